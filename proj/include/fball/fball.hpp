#pragma once

// single include pulling in the whole library

#include "fball/bigint.hpp"
#include "fball/counterexample.hpp"
#include "fball/errors.hpp"
#include "fball/extension.hpp"
#include "fball/formal_group.hpp"
#include "fball/linalg.hpp"
#include "fball/newton_polygon.hpp"
#include "fball/orbit.hpp"
#include "fball/parallel.hpp"
#include "fball/scalar.hpp"
#include "fball/serialize.hpp"
#include "fball/series.hpp"
#include "fball/subscheme.hpp"
#include "fball/weightspace.hpp"

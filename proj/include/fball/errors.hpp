#pragma once

#include <stdexcept>
#include <string>

namespace fball {

// Every failure mode gets its own code so tests and the CLI can tell them
// apart without string matching. The what() text carries the details.
enum class errc {
    division_by_zero_to_precision,
    precision_exhausted,
    bad_modulus,
    not_eisenstein,
    norm_precision_loss,
    unsupported_ring,
    variable_mismatch,
    nonzero_constant_term,
    not_in_open_disk,
    convergence_violation,
    construction_diverged,
    not_integral,
    integrality_lost,
    tail_too_short,
    unsupported_kind,
    singular_at_origin,
    chart_invalid,
    valuation_mismatch,
    integrality_failure,
    slope_exhaustion,
    residual_too_large,
    polygon_degenerate,
    tower_too_deep,
    level_too_deep,
    enumeration_overflow,
    bad_input,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::division_by_zero_to_precision: return "DivisionByZeroToPrecision";
    case errc::precision_exhausted: return "PrecisionExhausted";
    case errc::bad_modulus: return "BadModulus";
    case errc::not_eisenstein: return "NotEisenstein";
    case errc::norm_precision_loss: return "NormPrecisionLoss";
    case errc::unsupported_ring: return "UnsupportedRing";
    case errc::variable_mismatch: return "VariableMismatch";
    case errc::nonzero_constant_term: return "NonzeroConstantTerm";
    case errc::not_in_open_disk: return "NotInOpenDisk";
    case errc::convergence_violation: return "ConvergenceViolation";
    case errc::construction_diverged: return "ConstructionDiverged";
    case errc::not_integral: return "NotIntegral";
    case errc::integrality_lost: return "IntegralityLost";
    case errc::tail_too_short: return "TailTooShort";
    case errc::unsupported_kind: return "UnsupportedKind";
    case errc::singular_at_origin: return "SingularAtOrigin";
    case errc::chart_invalid: return "ChartInvalid";
    case errc::valuation_mismatch: return "ValuationMismatch";
    case errc::integrality_failure: return "IntegralityFailure";
    case errc::slope_exhaustion: return "SlopeExhaustion";
    case errc::residual_too_large: return "ResidualTooLarge";
    case errc::polygon_degenerate: return "PolygonDegenerate";
    case errc::tower_too_deep: return "TowerTooDeep";
    case errc::level_too_deep: return "LevelTooDeep";
    case errc::enumeration_overflow: return "EnumerationOverflow";
    case errc::bad_input: return "BadInput";
    }
    return "UnknownError";
}

class error : public std::runtime_error {
public:
    error(errc c, const std::string& msg)
        : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code_(c) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

} // namespace fball

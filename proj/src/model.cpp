// model.cpp: Parameter validation and the bare bath density

#include "sbsim/model.hpp"

#include <cmath>
#include <string>

namespace sbsim {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NonPositiveFrequency: return "NonPositiveFrequency";
    case ErrorKind::NegativeCoupling: return "NegativeCoupling";
    case ErrorKind::InvalidNumerics: return "InvalidNumerics";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BoundaryNotBracketed: return "BoundaryNotBracketed";
    case ErrorKind::TruncationNotConverged: return "TruncationNotConverged";
    case ErrorKind::TruncationTooLarge: return "TruncationTooLarge";
    case ErrorKind::NegativeFrequencyRequest: return "NegativeFrequencyRequest";
    case ErrorKind::DissipationlessLimit: return "DissipationlessLimit";
    }
    return "Unknown";
}

double ModelParams::g0() const { return omega0 * std::sqrt(lambda_); }

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ValidationError(ErrorKind::NonPositiveFrequency, field,
                              std::string(field) + " must be a positive finite frequency, got " +
                                  std::to_string(value));
    }
}

void require_nonnegative(double value, const char* field) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw ValidationError(ErrorKind::NegativeCoupling, field,
                              std::string(field) + " must be a non-negative finite coupling, got " +
                                  std::to_string(value));
    }
}

} // namespace

ModelParams validate(const ModelParams& params) {
    require_positive(params.delta, "delta");
    require_positive(params.omega0, "omega0");
    require_positive(params.omegac, "omegac");
    require_nonnegative(params.alpha, "alpha");
    require_nonnegative(params.lambda_, "lambda_");
    return params;
}

ModelParams validate(const ParamInput& input) {
    if (input.lambda_ && input.g0) {
        throw ValidationError(ErrorKind::InvalidConfig, "g0",
                              "give either lambda_ or g0, not both");
    }
    ModelParams p;
    p.delta = input.delta;
    p.omega0 = input.omega0;
    p.alpha = input.alpha;
    p.omegac = input.omegac;
    require_positive(p.omega0, "omega0");
    if (input.g0) {
        require_nonnegative(*input.g0, "g0");
        const double ratio = *input.g0 / p.omega0;
        p.lambda_ = ratio * ratio;
    } else {
        p.lambda_ = input.lambda_.value_or(0.0);
    }
    return validate(p);
}

NumericsConfig validate(const NumericsConfig& cfg) {
    auto bad = [](const char* field, const std::string& why) {
        return ValidationError(ErrorKind::InvalidNumerics, field, std::string(field) + " " + why);
    };
    if (!(cfg.poisson_tail_tol > 0.0 && cfg.poisson_tail_tol < 1.0))
        throw bad("poisson_tail_tol", "must lie in (0, 1)");
    if (!(cfg.fixed_point_tol > 0.0)) throw bad("fixed_point_tol", "must be > 0");
    if (!(cfg.quad_rel_tol > 0.0)) throw bad("quad_rel_tol", "must be > 0");
    if (!(cfg.freq_window >= 10.0)) throw bad("freq_window", "must be >= 10");
    if (cfg.pv_grid < 1 || cfg.pv_grid > 16) throw bad("pv_grid", "must lie in [1, 16]");
    if (cfg.max_fixed_point_iters < 1) throw bad("max_fixed_point_iters", "must be >= 1");
    if (!(cfg.alpha_ceiling > 0.0 && cfg.alpha_ceiling < 1.0))
        throw bad("alpha_ceiling", "must lie in (0, 1)");
    return cfg;
}

double ohmic_spectral_density(const ModelParams& params, double omega) {
    if (!(omega > 0.0)) return 0.0;
    return 2.0 * params.alpha * omega * std::exp(-omega / params.omegac);
}

double bare_bath_density(const ModelParams& params, double omega) {
    return 0.25 * ohmic_spectral_density(params, omega);
}

} // namespace sbsim

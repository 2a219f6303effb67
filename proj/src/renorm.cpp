// renorm.cpp: Fixed-point solution for eta

#include "sbsim/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbsim/quadrature.hpp"

namespace sbsim {

namespace {

// The integrand of I(a) bends on the scale a, so panels are graded around it.
std::vector<double> renorm_breaks(double a, double window) {
    auto breaks = quad::geometric_breaks(a, 0.0, window, 2, 1e-3);
    breaks.push_back(a);
    return quad::normalize_breaks(std::move(breaks), 0.0, window);
}

quad::Tolerance renorm_tolerance(const NumericsConfig& cfg) {
    return {0.0, std::min(cfg.quad_rel_tol, 1e-13)};
}

} // namespace

double renorm_integral(const ModelParams& params, double eta_delta, const NumericsConfig& cfg) {
    const double w = cfg.window(params);
    const double inv_c = 1.0 / params.omegac;
    auto f = [&](double x) {
        const double s = x + eta_delta;
        return x * std::exp(-x * inv_c) / (s * s);
    };
    const auto breaks = renorm_breaks(eta_delta, w);
    return quad::integrate(f, std::span<const double>(breaks), renorm_tolerance(cfg), 20000).value;
}

double eta_map(const ModelParams& params, double eta, const NumericsConfig& cfg) {
    if (params.alpha == 0.0) return 1.0;
    return std::exp(-params.alpha * renorm_integral(params, eta * params.delta, cfg));
}

namespace {

double energy_shift(const ModelParams& p, double eta_delta, const NumericsConfig& cfg) {
    double shift = -0.25 * p.lambda_ * p.omega0;
    if (p.alpha == 0.0) return shift;
    const double w = cfg.window(p);
    auto f = [&](double x) {
        const double xi = x / (x + eta_delta);
        return std::exp(-x / p.omegac) * xi * (2.0 - xi);
    };
    const auto breaks = renorm_breaks(eta_delta, w);
    shift -= 0.5 * p.alpha * quad::integrate(f, std::span<const double>(breaks), renorm_tolerance(cfg), 20000).value;
    return shift;
}

} // namespace

RenormalizedModel solve_eta(const ModelParams& params, const NumericsConfig& cfg, double damping) {
    const ModelParams p = validate(params);
    RenormalizedModel out;
    out.params = p;
    if (p.alpha == 0.0) {
        out.eta = 1.0;
        out.eta_delta = p.delta;
        out.energy_shift = energy_shift(p, p.delta, cfg);
        return out;
    }

    double eta = 1.0;
    for (int it = 1; it <= cfg.max_fixed_point_iters; ++it) {
        const double target = eta_map(p, eta, cfg);
        const double residual = std::abs(eta - target);
        if (residual < cfg.fixed_point_tol * eta) {
            // Report the image of the converged iterate; it is the sharper estimate.
            out.eta = target;
            out.eta_delta = target * p.delta;
            out.converged_in = it;
            out.residual = std::abs(target - eta_map(p, target, cfg));
            out.energy_shift = energy_shift(p, out.eta_delta, cfg);
            return out;
        }
        eta = (1.0 - damping) * eta + damping * target;
        if (!(eta > 1e-300)) break;
    }
    throw NumericalError(ErrorKind::NoConvergence, "renorm",
                         "eta fixed point did not converge within " +
                             std::to_string(cfg.max_fixed_point_iters) +
                             " iterations (alpha = " + std::to_string(p.alpha) + ")");
}

double effective_coupling_density(const RenormalizedModel& model, double omega) {
    if (!(omega > 0.0)) return 0.0;
    const double dress = model.eta_delta / (omega + model.eta_delta);
    return ohmic_spectral_density(model.params, omega) * dress * dress;
}

} // namespace sbsim

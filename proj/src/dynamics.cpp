// dynamics.cpp: Fidelity from the resummed spectral representation, pole search
// and the coherent-incoherent transition

#include "sbsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "sbsim/kernels.hpp"
#include "sbsim/version.hpp"

namespace sbsim {

namespace {

quad::BatchFn batch(const kernels::PointFn& f, Execution exec) {
    if (exec == Execution::Serial) {
        return [f](std::span<const double> x) { return kernels::evaluate_serial(f, x); };
    }
    return [f](std::span<const double> x) { return kernels::evaluate_parallel(f, x); };
}

std::vector<double> scan_grid(double a, double upper) {
    std::vector<double> grid{0.0};
    for (int k = -16; k <= 0; ++k) grid.push_back(a * std::pow(10.0, k / 4.0));
    for (int k = 1; k <= 32; ++k) grid.push_back(a * (1.0 + k / 16.0));
    for (double x = grid.back() * 1.05; x < upper; x *= 1.05) grid.push_back(x);
    grid.push_back(upper);
    std::erase_if(grid, [&](double x) { return x > upper; });
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

double bisect(const std::function<double(double)>& h, double lo, double hi, double h_lo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double h_mid = h(mid);
        if (h_mid == 0.0) return mid;
        if ((h_mid < 0.0) == (h_lo < 0.0)) {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Negative-frequency zero of the pole condition, where Gamma = 0 and the
// spectral function degenerates to a delta peak. Exists only when h(0) > 0.
struct BoundState {
    double omega{0.0};
    double residue{0.0};
};

std::optional<BoundState> bound_state(const SpectralKernels& k) {
    if (k.params().alpha == 0.0) return std::nullopt;
    auto h = [&](double w) { return pole_condition(k, w); };
    const double h0 = h(0.0);
    if (!(h0 > 0.0)) return std::nullopt;
    // h increases monotonically on omega < 0 and tends to -infinity.
    double lo = -k.eta_delta();
    while (h(lo) > 0.0) lo *= 2.0;
    const double root = bisect(h, lo, 0.0, h(lo));
    const double step = 1e-6 * std::max(std::abs(root), k.eta_delta());
    const double slope = (h(root + step) - h(root - step)) / (2.0 * step);
    return BoundState{root, 1.0 / std::abs(slope)};
}

} // namespace

double pole_condition(const SpectralKernels& kernels, double omega) {
    return omega - kernels.eta_delta() - kernels.big_sigma(omega);
}

double omega_eff_search_limit(const SpectralKernels& kernels) {
    const double a = kernels.eta_delta();
    const auto& p = kernels.params();
    return a + p.lambda_ * p.omega0 + 2.0 * a + p.omega0;
}

std::vector<double> pole_roots(const SpectralKernels& kernels, double upper) {
    if (kernels.params().alpha == 0.0) return {kernels.eta_delta()};
    const auto grid = scan_grid(kernels.eta_delta(), upper);
    auto h = [&](double w) { return pole_condition(kernels, w); };
    const auto values = kernels::evaluate_parallel(h, grid);
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (values[i] == 0.0 && grid[i] > 0.0) {
            roots.push_back(grid[i]);
        } else if ((values[i] < 0.0 && values[i + 1] > 0.0) || (values[i] > 0.0 && values[i + 1] < 0.0)) {
            roots.push_back(bisect(h, grid[i], grid[i + 1], values[i]));
        }
    }
    return roots;
}

std::optional<double> omega_eff(const SpectralKernels& kernels) {
    const auto roots = pole_roots(kernels, omega_eff_search_limit(kernels));
    for (double r : roots) {
        if (r > 0.0) return r;
    }
    return std::nullopt;
}

std::optional<double> quality_factor(const SpectralKernels& kernels) {
    if (kernels.params().alpha == 0.0) return std::numeric_limits<double>::infinity();
    const auto w = omega_eff(kernels);
    if (!w) return std::nullopt;
    return *w / kernels.big_gamma(kernels.eta_delta());
}

double fidelity_spectral_function(const SpectralKernels& kernels, double omega) {
    const double g = kernels.big_gamma(omega);
    if (g == 0.0) return 0.0;
    const double d = omega - kernels.eta_delta() - kernels.big_sigma(omega);
    return g / (d * d + g * g) / std::numbers::pi;
}

double validity_cap(const SpectralKernels& kernels) {
    const double g = kernels.big_gamma(kernels.eta_delta());
    if (!(g > 0.0)) return std::numeric_limits<double>::infinity();
    return 50.0 / g;
}

SpectralRule fidelity_rule(const SpectralKernels& kernels, const RuleOptions& opts) {
    const auto& p = kernels.params();
    const double a = kernels.eta_delta();
    const double hi = kernels.support_end();

    std::vector<double> breaks{0.0, hi};
    for (int l = 0; l <= kernels.lmax(); ++l) {
        const double shift = l * p.omega0;
        breaks.push_back(shift);
        for (double x : quad::geometric_breaks(a, 0.0, kernels.window(), l == 0 ? 2 : 1, 1e-2)) {
            breaks.push_back(shift + x);
        }
    }
    if (const auto w = omega_eff(kernels)) {
        const double width = std::max(kernels.big_gamma(*w), 1e-12 * a);
        breaks.push_back(*w);
        for (double m : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
            breaks.push_back(*w - m * width);
            breaks.push_back(*w + m * width);
        }
    }
    const auto b = quad::normalize_breaks(std::move(breaks), 0.0, hi);

    auto f = [&kernels](double w) { return fidelity_spectral_function(kernels, w); };
    const auto fn = batch(f, opts.exec);
    quad::Result summary;
    auto panels = quad::adaptive_panels_batched(fn, b, {opts.abs_tol, 0.0}, opts.max_panels, &summary);
    if (opts.t_max > 0.0) {
        panels = quad::split_wide_panels_batched(fn, std::move(panels), 10.0 / opts.t_max, opts.mass_floor);
    }
    SpectralRule out;
    out.rule = quad::node_rule(panels);
    out.converged = summary.converged;
    out.error_estimate = summary.error;
    for (std::size_t i = 0; i < out.rule.size(); ++i) out.total_weight += out.rule.weights[i] * out.rule.values[i];
    return out;
}

json kernel_metadata(const SpectralKernels& kernels) {
    const auto& m = kernels.model();
    const auto& p = m.params;
    const auto& c = kernels.numerics();
    json meta;
    meta["tool_version"] = kVersion;
    meta["params"] = {{"delta", p.delta}, {"omega0", p.omega0}, {"lambda_", p.lambda_},
                      {"alpha", p.alpha}, {"omegac", p.omegac}};
    meta["numerics"] = {{"poisson_tail_tol", c.poisson_tail_tol}, {"pv_grid", c.pv_grid},
                        {"fixed_point_tol", c.fixed_point_tol}, {"freq_window", c.freq_window},
                        {"quad_rel_tol", c.quad_rel_tol}, {"max_fixed_point_iters", c.max_fixed_point_iters},
                        {"alpha_ceiling", c.alpha_ceiling}};
    meta["eta"] = m.eta;
    meta["eta_delta"] = m.eta_delta;
    meta["energy_shift"] = m.energy_shift;
    meta["eta_iterations"] = m.converged_in;
    meta["lmax"] = kernels.lmax();
    return meta;
}

namespace {

json time_grid_meta(std::span<const double> times) {
    json g;
    g["count"] = times.size();
    if (!times.empty()) {
        g["start"] = times.front();
        g["stop"] = times.back();
    }
    return g;
}

// P(t) from the spectral rule plus any bound-state delta peak.
std::vector<double> population_values(const SpectralKernels& kernels, std::span<const double> times,
                                      Execution exec, json& meta) {
    const auto& p = kernels.params();
    if (p.alpha == 0.0) {
        std::vector<double> out(times.size());
        for (std::size_t j = 0; j < times.size(); ++j) out[j] = std::cos(p.delta * times[j]);
        meta["branch"] = "dissipationless";
        return out;
    }
    double t_max = 0.0;
    for (double t : times) t_max = std::max(t_max, std::abs(t));
    RuleOptions opts;
    opts.t_max = t_max;
    opts.exec = exec;
    const SpectralRule rule = fidelity_rule(kernels, opts);

    std::vector<double> coeffs(rule.rule.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = rule.rule.weights[i] * rule.rule.values[i];
    auto values = exec == Execution::Serial ? kernels::cosine_sum_serial(rule.rule.nodes, coeffs, times)
                                            : kernels::cosine_sum_parallel(rule.rule.nodes, coeffs, times);
    double total = rule.total_weight;
    if (const auto bs = bound_state(kernels)) {
        for (std::size_t j = 0; j < times.size(); ++j) values[j] += bs->residue * std::cos(bs->omega * times[j]);
        total += bs->residue;
        meta["bound_state"] = {{"omega", bs->omega}, {"residue", bs->residue}};
    }
    const auto w = omega_eff(kernels);
    meta["branch"] = "spectral";
    meta["omega_eff"] = w ? json(*w) : json(nullptr);
    meta["coherent"] = w.has_value();
    meta["Gamma_eta_delta"] = kernels.big_gamma(kernels.eta_delta());
    meta["sum_rule_residual"] = std::abs(total - 1.0);
    meta["quadrature_nodes"] = rule.rule.size();
    meta["quadrature_converged"] = rule.converged;
    const double cap = validity_cap(kernels);
    meta["validity_cap"] = cap;
    meta["beyond_validity_cap"] = t_max > cap;
    return values;
}

} // namespace

TimeSeries population(const SpectralKernels& kernels, std::span<const double> times, Execution exec) {
    TimeSeries ts;
    ts.observable = "P";
    ts.times.assign(times.begin(), times.end());
    ts.meta = kernel_metadata(kernels);
    ts.meta["time_grid"] = time_grid_meta(times);
    ts.values = population_values(kernels, times, exec, ts.meta);
    return ts;
}

TimeSeries fidelity(const SpectralKernels& kernels, std::span<const double> times, Execution exec) {
    TimeSeries ts = population(kernels, times, exec);
    ts.observable = "F";
    for (double& v : ts.values) v = 0.5 * (1.0 + v);
    return ts;
}

double fidelity_sum_rule(const SpectralKernels& kernels) {
    if (kernels.params().alpha == 0.0) return 1.0;
    RuleOptions opts;
    double total = fidelity_rule(kernels, opts).total_weight;
    if (const auto bs = bound_state(kernels)) total += bs->residue;
    return total;
}

bool is_coherent(const ModelParams& params, const NumericsConfig& cfg) {
    const SpectralKernels k = build_kernels(params, cfg);
    return omega_eff(k).has_value();
}

PhaseBoundaryPoint alpha_critical(const ModelParams& params, double lambda_, const NumericsConfig& cfg,
                                  double bracket_tol) {
    ModelParams p = params;
    p.lambda_ = lambda_;
    auto coherent_at = [&](double alpha) {
        ModelParams q = p;
        q.alpha = alpha;
        return is_coherent(q, cfg);
    };
    double lo = 0.0;
    double hi = cfg.alpha_ceiling;
    if (coherent_at(hi)) {
        throw NumericalError(ErrorKind::BoundaryNotBracketed, "dynamics",
                             "still coherent at alpha = " + std::to_string(hi) +
                                 " for lambda = " + std::to_string(lambda_));
    }
    while (hi - lo >= bracket_tol) {
        const double mid = 0.5 * (lo + hi);
        if (coherent_at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lambda_, 0.5 * (lo + hi), lo, hi};
}

PhaseBoundary phase_boundary(const ModelParams& params, std::span<const double> lambda_grid,
                             const NumericsConfig& cfg, double bracket_tol, Execution exec) {
    PhaseBoundary out;
    out.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
    out.bracket_tolerance = bracket_tol;
    out.points.resize(lambda_grid.size());
    std::vector<std::exception_ptr> failures(lambda_grid.size());
    const auto n = static_cast<std::ptrdiff_t>(lambda_grid.size());
#pragma omp parallel for schedule(dynamic, 1) if (exec == Execution::Parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out.points[k] = alpha_critical(params, lambda_grid[k], cfg, bracket_tol);
        } catch (...) {
            failures[k] = std::current_exception();
        }
    }
    for (const auto& e : failures) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

} // namespace sbsim

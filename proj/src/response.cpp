// response.cpp: Poisson-weighted superposition of spin-boson line shapes

#include "sbsim/response.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sbsim/kernels.hpp"

namespace sbsim {

namespace {

quad::BatchFn batch(const kernels::PointFn& f, Execution exec) {
    if (exec == Execution::Serial) {
        return [f](std::span<const double> x) { return kernels::evaluate_serial(f, x); };
    }
    return [f](std::span<const double> x) { return kernels::evaluate_parallel(f, x); };
}

// Zero of x - ed - R(x) on (0, 3 ed + 1]: the peak of the single-sideband kernel.
std::optional<double> sideband_peak(const SpectralKernels& k) {
    const double a = k.eta_delta();
    auto h = [&](double x) { return x - a - k.r_shift(x); };
    double lo = 0.0;
    double h_lo = h(lo);
    for (double x = 1e-4 * a; x < 3.0 * a + 1.0; x *= 1.05) {
        const double hx = h(x);
        if ((h_lo < 0.0) != (hx < 0.0)) {
            double hi = x;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (!(mid > lo && mid < hi)) break;
                const double hm = h(mid);
                if ((hm < 0.0) == (h_lo < 0.0)) {
                    lo = mid;
                    h_lo = hm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        lo = x;
        h_lo = hx;
    }
    return std::nullopt;
}

void require_dissipative(const SpectralKernels& k, const char* what) {
    if (k.params().alpha == 0.0) {
        throw ValidationError(ErrorKind::DissipationlessLimit, "alpha",
                              std::string(what) + ": alpha = 0 spectrum is a set of delta lines; use ibm_lines");
    }
}

} // namespace

double sbm_kernel(const SpectralKernels& kernels, double x) {
    const double g = kernels.gamma(x);
    if (g == 0.0) return 0.0;
    const double d = x - kernels.eta_delta() - kernels.r_shift(x);
    return g / (d * d + g * g) / std::numbers::pi;
}

double chi_im(const SpectralKernels& kernels, double omega) {
    if (omega < 0.0) {
        throw ValidationError(ErrorKind::NegativeFrequencyRequest, "omega",
                              "chi'' is defined for omega >= 0 only, got " + std::to_string(omega));
    }
    require_dissipative(kernels, "chi_im");
    const auto w = kernels.weights();
    const double w0 = kernels.params().omega0;
    double sum = 0.0;
    for (int l = 0; l <= kernels.lmax(); ++l) {
        const double x = omega - l * w0;
        if (!(x > 0.0)) break;
        sum += w[static_cast<std::size_t>(l)] * sbm_kernel(kernels, x);
    }
    return sum;
}

std::vector<SpectralLine> ibm_lines(const SpectralKernels& kernels) {
    const auto& p = kernels.params();
    const auto w = kernels.weights();
    std::vector<SpectralLine> lines;
    for (int l = 0; l <= kernels.lmax(); ++l) {
        lines.push_back({p.delta + l * p.omega0, w[static_cast<std::size_t>(l)]});
    }
    return lines;
}

SpectrumSeries susceptibility(const SpectralKernels& kernels, std::span<const double> omegas, Execution exec) {
    SpectrumSeries s;
    s.meta = kernel_metadata(kernels);
    s.meta["frequency_grid"] = {{"count", omegas.size()}};
    if (kernels.params().alpha == 0.0) {
        // Delta lines; the grid is replaced by the line positions.
        for (const auto& line : ibm_lines(kernels)) {
            s.omegas.push_back(line.position);
            s.chi.push_back(line.weight);
        }
        s.meta["representation"] = "delta_lines";
        return s;
    }
    for (double w : omegas) {
        if (w < 0.0) {
            throw ValidationError(ErrorKind::NegativeFrequencyRequest, "omega",
                                  "chi'' is defined for omega >= 0 only");
        }
    }
    s.omegas.assign(omegas.begin(), omegas.end());
    auto f = [&kernels](double w) { return chi_im(kernels, w); };
    s.chi = exec == Execution::Serial ? kernels::evaluate_serial(f, omegas) : kernels::evaluate_parallel(f, omegas);
    s.meta["representation"] = "density";
    return s;
}

SpectralRule sideband_rule(const SpectralKernels& kernels, const RuleOptions& opts) {
    require_dissipative(kernels, "sideband_rule");
    const double a = kernels.eta_delta();
    const double hi = kernels.window();
    std::vector<double> breaks = quad::geometric_breaks(a, 0.0, hi, 2, 1e-2);
    breaks.push_back(a);
    if (const auto peak = sideband_peak(kernels)) {
        const double width = std::max(kernels.gamma(*peak), 1e-12 * a);
        breaks.push_back(*peak);
        for (double m : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
            breaks.push_back(*peak - m * width);
            breaks.push_back(*peak + m * width);
        }
    }
    const auto b = quad::normalize_breaks(std::move(breaks), 0.0, hi);
    auto f = [&kernels](double x) { return sbm_kernel(kernels, x); };
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

TimeSeries correlation(const SpectralKernels& kernels, std::span<const double> times, Execution exec) {
    TimeSeries ts;
    ts.observable = "C";
    ts.times.assign(times.begin(), times.end());
    ts.meta = kernel_metadata(kernels);
    ts.meta["time_grid"] = {{"count", times.size()}};
    const auto& p = kernels.params();
    const auto w = kernels.weights();
    ts.values.assign(times.size(), 0.0);

    if (p.alpha == 0.0) {
        const auto lines = ibm_lines(kernels);
        for (std::size_t j = 0; j < times.size(); ++j) {
            double acc = 0.0;
            for (const auto& line : lines) acc += line.weight * std::cos(line.position * times[j]);
            ts.values[j] = acc;
        }
        ts.meta["branch"] = "dissipationless";
        return ts;
    }

    double t_max = 0.0;
    for (double t : times) t_max = std::max(t_max, std::abs(t));
    RuleOptions opts;
    opts.t_max = t_max;
    opts.exec = exec;
    const SpectralRule rule = sideband_rule(kernels, opts);
    std::vector<double> coeffs(rule.rule.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = rule.rule.weights[i] * rule.rule.values[i];
    // Sideband l contributes w_l Re[exp(i l omega0 t) K(t)], K(t) = int kernel(x) exp(i x t) dx.
    const auto k = exec == Execution::Serial ? kernels::fourier_sum_serial(rule.rule.nodes, coeffs, times)
                                             : kernels::fourier_sum_parallel(rule.rule.nodes, coeffs, times);
    for (std::size_t j = 0; j < times.size(); ++j) {
        double acc = 0.0;
        for (int l = 0; l <= kernels.lmax(); ++l) {
            const double phase = l * p.omega0 * times[j];
            acc += w[static_cast<std::size_t>(l)] * (std::cos(phase) * k[j].real() - std::sin(phase) * k[j].imag());
        }
        ts.values[j] = acc;
    }
    double weight_sum = 0.0;
    for (double x : w) weight_sum += x;
    ts.meta["branch"] = "spectral";
    ts.meta["sum_rule_residual"] = std::abs(rule.total_weight * weight_sum - 1.0);
    ts.meta["quadrature_nodes"] = rule.rule.size();
    ts.meta["quadrature_converged"] = rule.converged;
    return ts;
}

double sum_rule(const SpectralKernels& kernels) {
    if (kernels.params().alpha == 0.0) {
        double total = 0.0;
        for (const auto& line : ibm_lines(kernels)) total += line.weight;
        return std::abs(total - 1.0);
    }
    const auto& p = kernels.params();
    const double a = kernels.eta_delta();
    std::vector<double> breaks;
    const auto peak = sideband_peak(kernels);
    const double width = peak ? std::max(kernels.gamma(*peak), 1e-12 * a) : a;
    for (int l = 0; l <= kernels.lmax(); ++l) {
        const double shift = l * p.omega0;
        breaks.push_back(shift);
        for (double x : quad::geometric_breaks(a, 0.0, kernels.window(), 2, 1e-2)) breaks.push_back(shift + x);
        if (peak) {
            for (double m : {-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0}) breaks.push_back(shift + *peak + m * width);
        }
    }
    const auto b = quad::normalize_breaks(std::move(breaks), 0.0, kernels.support_end());
    auto f = [&kernels](double w) { return chi_im(kernels, w); };
    const auto fn = batch(f, Execution::Parallel);
    quad::Result r;
    quad::adaptive_panels_batched(fn, b, {1e-10, 0.0}, 200000, &r);
    return std::abs(r.value - 1.0);
}

} // namespace sbsim

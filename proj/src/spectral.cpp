// spectral.cpp: Sideband kernels and their principal-value shifts

#include "sbsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sbsim/quadrature.hpp"

namespace sbsim {

double gamma(const RenormalizedModel& model, double omega) {
    return std::numbers::pi * effective_coupling_density(model, omega);
}

namespace {

std::vector<double> coupling_breaks(double a, double window) {
    auto breaks = quad::geometric_breaks(a, 0.0, window, 2, 1e-3);
    breaks.push_back(a);
    return breaks;
}

// R is O(alpha * eta delta) in magnitude; an absolute floor on that scale keeps
// the relative test from stalling where R crosses zero.
quad::Tolerance shift_tolerance(const RenormalizedModel& m, const NumericsConfig& cfg) {
    return {1e-3 * cfg.quad_rel_tol * m.params.alpha * m.eta_delta, cfg.quad_rel_tol};
}

} // namespace

double r_shift(const RenormalizedModel& model, double omega, const NumericsConfig& cfg) {
    if (model.params.alpha == 0.0) return 0.0;
    const double w = cfg.window(model.params);
    auto g = [&](double x) { return effective_coupling_density(model, x); };
    return quad::principal_value(g, 0.0, w, omega, coupling_breaks(model.eta_delta, w),
                                 shift_tolerance(model, cfg), cfg.pv_grid, 20000)
        .value;
}

std::vector<double> poisson_weights(double lambda_, int lmax) {
    std::vector<double> w(static_cast<std::size_t>(lmax) + 1, 0.0);
    if (lambda_ == 0.0) {
        w[0] = 1.0;
        return w;
    }
    const double log_lambda = std::log(lambda_);
    for (int l = 0; l <= lmax; ++l) {
        w[static_cast<std::size_t>(l)] = std::exp(-lambda_ + l * log_lambda - std::lgamma(l + 1.0));
    }
    return w;
}

int poisson_lmax(double lambda_, double tail_tol) {
    if (lambda_ == 0.0) return 0;
    // Far enough out that the remaining mass is negligible against any tolerance.
    const int cap = static_cast<int>(std::ceil(lambda_ + 40.0 * std::sqrt(lambda_) + 60.0));
    const auto w = poisson_weights(lambda_, cap);
    // tail[L] = sum_{l > L} w_l, accumulated from the far end (small terms first).
    std::vector<double> tail(w.size(), 0.0);
    for (int l = cap - 1; l >= 0; --l) {
        tail[static_cast<std::size_t>(l)] = tail[static_cast<std::size_t>(l) + 1] + w[static_cast<std::size_t>(l) + 1];
    }
    for (int l = 0; l <= cap; ++l) {
        if (tail[static_cast<std::size_t>(l)] < tail_tol) return l;
    }
    return cap;
}

SpectralKernels::SpectralKernels(RenormalizedModel model, NumericsConfig cfg)
    : model_(std::move(model)), cfg_(validate(cfg)) {
    lmax_ = poisson_lmax(model_.params.lambda_, cfg_.poisson_tail_tol);
    weights_ = poisson_weights(model_.params.lambda_, lmax_);
}

SpectralKernels build_kernels(const ModelParams& params, const NumericsConfig& cfg) {
    return SpectralKernels(solve_eta(params, cfg), cfg);
}

double SpectralKernels::gamma(double omega) const { return sbsim::gamma(model_, omega); }

double SpectralKernels::r_shift(double omega) const { return sbsim::r_shift(model_, omega, cfg_); }

const double* SpectralKernels::memo_find(double omega) const {
    auto it = std::lower_bound(memo_omega_.begin(), memo_omega_.end(), omega);
    if (it == memo_omega_.end() || *it != omega) return nullptr;
    return &*it;
}

double SpectralKernels::big_gamma(double omega) const {
    if (const double* hit = memo_find(omega)) return memo_gamma_[static_cast<std::size_t>(hit - memo_omega_.data())];
    const double w0 = model_.params.omega0;
    double sum = 0.0;
    for (int l = 0; l <= lmax_; ++l) {
        const double x = omega - l * w0;
        if (!(x > 0.0)) break;
        sum += weights_[static_cast<std::size_t>(l)] * gamma(x);
    }
    return sum;
}

double SpectralKernels::big_sigma(double omega) const {
    if (const double* hit = memo_find(omega)) return memo_sigma_[static_cast<std::size_t>(hit - memo_omega_.data())];
    const double w0 = model_.params.omega0;
    double sum = 0.0;
    for (int l = 0; l <= lmax_; ++l) {
        sum += weights_[static_cast<std::size_t>(l)] * r_shift(omega - l * w0);
    }
    return sum;
}

void SpectralKernels::memoize(std::span<const double> grid) {
    std::vector<double> omega(grid.begin(), grid.end());
    std::sort(omega.begin(), omega.end());
    omega.erase(std::unique(omega.begin(), omega.end()), omega.end());
    memo_omega_.clear();
    memo_gamma_.assign(omega.size(), 0.0);
    memo_sigma_.assign(omega.size(), 0.0);
    const auto n = static_cast<std::ptrdiff_t>(omega.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        memo_gamma_[k] = big_gamma(omega[k]);
        memo_sigma_[k] = big_sigma(omega[k]);
    }
    memo_omega_ = std::move(omega);
}

double big_gamma(const SpectralKernels& kernels, double omega) { return kernels.big_gamma(omega); }

double big_sigma(const SpectralKernels& kernels, double omega) { return kernels.big_sigma(omega); }

double modulated_bath_density(const SpectralKernels& kernels, double omega) {
    return kernels.big_gamma(omega) / std::numbers::pi;
}

double effective_bath_density(const SpectralKernels& kernels, double omega) {
    return kernels.gamma(omega) / std::numbers::pi;
}

double sigma_from_gamma(const SpectralKernels& kernels, double omega) {
    const auto& p = kernels.params();
    if (p.alpha == 0.0) return 0.0;
    const double a = kernels.eta_delta();
    const double hi = kernels.support_end();
    std::vector<double> breaks;
    for (int l = 0; l <= kernels.lmax(); ++l) {
        const double shift = l * p.omega0;
        breaks.push_back(shift);
        for (double x : coupling_breaks(a, kernels.window())) breaks.push_back(shift + x);
    }
    auto g = [&](double x) { return kernels.big_gamma(x); };
    const auto& cfg = kernels.numerics();
    const quad::Tolerance tol{1e-3 * cfg.quad_rel_tol * p.alpha * a, cfg.quad_rel_tol};
    const double pv = quad::principal_value(g, 0.0, hi, omega, std::move(breaks), tol, cfg.pv_grid, 200000).value;
    return pv / std::numbers::pi;
}

} // namespace sbsim

// spectral.hpp: Bare kernels gamma(omega), R(omega) and the oscillator-modulated
// kernels Gamma(omega), Sigma(omega) built from Poisson-weighted sidebands

#pragma once

#include <span>
#include <vector>

#include "sbsim/model.hpp"
#include "sbsim/renorm.hpp"

namespace sbsim {

// gamma(omega) = pi sum_k V_k^2 delta(omega - omega_k); zero for omega <= 0.
double gamma(const RenormalizedModel& model, double omega);

// R(omega) = P int_0^W g_eff(x) / (omega - x) dx, with g_eff the dressed coupling density.
double r_shift(const RenormalizedModel& model, double omega, const NumericsConfig& cfg);

// Smallest L whose Poisson tail sum_{l > L} e^{-lambda} lambda^l / l! is below tail_tol.
int poisson_lmax(double lambda_, double tail_tol);

// e^{-lambda} lambda^l / l! for l = 0..lmax.
std::vector<double> poisson_weights(double lambda_, int lmax);

class SpectralKernels {
public:
    SpectralKernels(RenormalizedModel model, NumericsConfig cfg);

    const RenormalizedModel& model() const { return model_; }
    const ModelParams& params() const { return model_.params; }
    const NumericsConfig& numerics() const { return cfg_; }
    int lmax() const { return lmax_; }
    std::span<const double> weights() const { return weights_; }

    double eta_delta() const { return model_.eta_delta; }
    double window() const { return cfg_.window(model_.params); }
    // Gamma(omega) vanishes beyond this frequency.
    double support_end() const { return window() + lmax_ * model_.params.omega0; }

    double gamma(double omega) const;
    double r_shift(double omega) const;
    double big_gamma(double omega) const;
    double big_sigma(double omega) const;

    // Stores Gamma and Sigma on a declared grid; later requests at exactly
    // these frequencies are table lookups, anything else is evaluated directly.
    void memoize(std::span<const double> grid);
    std::size_t memo_size() const { return memo_omega_.size(); }

private:
    const double* memo_find(double omega) const;

    RenormalizedModel model_;
    NumericsConfig cfg_;
    int lmax_{0};
    std::vector<double> weights_;
    std::vector<double> memo_omega_;
    std::vector<double> memo_gamma_;
    std::vector<double> memo_sigma_;
};

SpectralKernels build_kernels(const ModelParams& params, const NumericsConfig& cfg = {});

double big_gamma(const SpectralKernels& kernels, double omega);
double big_sigma(const SpectralKernels& kernels, double omega);

// G_sa(omega) = Gamma(omega) / pi; equals G_sb = gamma / pi when lambda = 0.
double modulated_bath_density(const SpectralKernels& kernels, double omega);
double effective_bath_density(const SpectralKernels& kernels, double omega);

// Sigma reconstructed from Gamma alone: (1/pi) P int Gamma(x) / (omega - x) dx.
// Independent of the sideband sum used by big_sigma.
double sigma_from_gamma(const SpectralKernels& kernels, double omega);

} // namespace sbsim

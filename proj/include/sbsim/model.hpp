// model.hpp: Physical parameters, numerical settings and the bare Ohmic bath

#pragma once

#include <optional>

#include "sbsim/errors.hpp"

namespace sbsim {

// Qubit + control oscillator + Ohmic bath, zero bias, zero temperature.
// Every frequency shares one unit; omegac = 1 is the conventional choice.
struct ModelParams {
    double delta{0.1};    // bare tunneling splitting
    double omega0{0.5};   // control oscillator frequency
    double lambda_{0.0};  // oscillator coupling, (g0 / omega0)^2
    double alpha{0.1};    // dimensionless Ohmic coupling
    double omegac{1.0};   // bath cutoff

    double g0() const;
};

struct NumericsConfig {
    double poisson_tail_tol{1e-12};
    int pv_grid{4};                 // refinement depth of the principal-value panels
    double fixed_point_tol{1e-12};
    double freq_window{40.0};       // semi-infinite integrals stop at freq_window * omegac
    double quad_rel_tol{1e-9};
    int max_fixed_point_iters{20000};
    double alpha_ceiling{0.99};     // upper end of the alpha_c bisection bracket

    double window(const ModelParams& p) const { return freq_window * p.omegac; }
};

// Raw interface input: either lambda or g0 may be given, never both.
struct ParamInput {
    double delta{0.1};
    double omega0{0.5};
    std::optional<double> lambda_;
    std::optional<double> g0;
    double alpha{0.1};
    double omegac{1.0};
};

ModelParams validate(const ModelParams& params);
ModelParams validate(const ParamInput& input);
NumericsConfig validate(const NumericsConfig& cfg);

// G(omega) = (alpha/2) omega exp(-omega/omegac) for omega > 0, else 0.
double bare_bath_density(const ModelParams& params, double omega);

// J(omega) = sum_k g_k^2 delta(omega - omega_k) = 4 G(omega).
double ohmic_spectral_density(const ModelParams& params, double omega);

} // namespace sbsim

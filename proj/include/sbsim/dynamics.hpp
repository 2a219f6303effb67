// dynamics.hpp: Non-equilibrium fidelity, effective Rabi frequency, quality
// factor and the coherent-incoherent boundary

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbsim/json_fwd.hpp"
#include "sbsim/quadrature.hpp"
#include "sbsim/spectral.hpp"

namespace sbsim {

enum class Execution { Serial, Parallel };

struct TimeSeries {
    std::string observable;  // "F", "P", "C", ...
    std::vector<double> times;
    std::vector<double> values;
    json meta;
};

// Quadrature rule for (1/pi) int A(omega) f(omega) d omega, where A is a
// Lorentzian-like spectral function; values[] hold A(node)/pi.
struct SpectralRule {
    quad::NodeRule rule;
    double total_weight{0.0};  // sum of weights * values, the sum-rule integral
    double error_estimate{0.0};
    bool converged{true};
};

struct RuleOptions {
    double t_max{0.0};               // resolve cos(omega t) up to this time
    double abs_tol{1e-10};
    double mass_floor{1e-13};        // panels below this mass are never split for time resolution
    std::size_t max_panels{60000};
    Execution exec{Execution::Parallel};
};

// h(omega) = omega - eta delta - Sigma(omega); its positive zero is omega_eff.
double pole_condition(const SpectralKernels& kernels, double omega);

// All sign changes of pole_condition on (0, upper], refined by bisection.
std::vector<double> pole_roots(const SpectralKernels& kernels, double upper);

// Smallest positive root of pole_condition; nullopt when the qubit is
// incoherent (no positive solution).
std::optional<double> omega_eff(const SpectralKernels& kernels);

// Default search interval end: eta delta + lambda omega0 + margin.
double omega_eff_search_limit(const SpectralKernels& kernels);

// Q = omega_eff / Gamma(eta delta). nullopt when incoherent, +inf when alpha = 0.
std::optional<double> quality_factor(const SpectralKernels& kernels);

// Integrand weight of the fidelity kernel, Gamma / ([omega - ed - Sigma]^2 + Gamma^2) / pi.
double fidelity_spectral_function(const SpectralKernels& kernels, double omega);

SpectralRule fidelity_rule(const SpectralKernels& kernels, const RuleOptions& opts);

// t_max beyond which the quadrature's oscillation error is no longer controlled: 50 / Gamma(eta delta).
double validity_cap(const SpectralKernels& kernels);

// F(t) = 1/2 + (1/2 pi) int Gamma cos(omega t) / ([omega - ed - Sigma]^2 + Gamma^2) d omega.
// alpha = 0 takes the closed form [1 + cos(delta t)] / 2.
TimeSeries fidelity(const SpectralKernels& kernels, std::span<const double> times,
                    Execution exec = Execution::Parallel);

// P(t) = 2 F(t) - 1.
TimeSeries population(const SpectralKernels& kernels, std::span<const double> times,
                      Execution exec = Execution::Parallel);

// (1/pi) int A d omega; 1 for a complete spectral weight.
double fidelity_sum_rule(const SpectralKernels& kernels);

struct PhaseBoundaryPoint {
    double lambda_{0.0};
    double alpha_c{0.0};
    double bracket_lo{0.0};
    double bracket_hi{0.0};
};

struct PhaseBoundary {
    std::vector<double> lambda_grid;
    std::vector<PhaseBoundaryPoint> points;
    double bracket_tolerance{1e-3};
};

// True when omega_eff exists for these parameters (eta is re-solved).
bool is_coherent(const ModelParams& params, const NumericsConfig& cfg);

// Bisection on alpha in [0, cfg.alpha_ceiling] for the coherent/incoherent switch.
// Throws NumericalError(BoundaryNotBracketed) when still coherent at the ceiling.
PhaseBoundaryPoint alpha_critical(const ModelParams& params, double lambda_, const NumericsConfig& cfg = {},
                                  double bracket_tol = 1e-3);

PhaseBoundary phase_boundary(const ModelParams& params, std::span<const double> lambda_grid,
                             const NumericsConfig& cfg = {}, double bracket_tol = 1e-3,
                             Execution exec = Execution::Parallel);

// Metadata common to every series derived from a kernel set.
json kernel_metadata(const SpectralKernels& kernels);

} // namespace sbsim

// response.hpp: Equilibrium susceptibility chi''(omega) and the symmetrized
// correlation function C(t)

#pragma once

#include <span>
#include <vector>

#include "sbsim/dynamics.hpp"

namespace sbsim {

struct SpectrumSeries {
    std::vector<double> omegas;
    std::vector<double> chi;
    json meta;
};

// Delta peak of the dissipationless (alpha = 0) spectrum.
struct SpectralLine {
    double position{0.0};
    double weight{0.0};
};

// Single-sideband kernel (1/pi) gamma(x) / ([x - ed - R(x)]^2 + gamma(x)^2); zero for x <= 0.
double sbm_kernel(const SpectralKernels& kernels, double x);

// chi''(omega) = sum_l w_l sbm_kernel(omega - l omega0), omega >= 0.
// Throws ValidationError(NegativeFrequencyRequest) for omega < 0 and for
// alpha = 0, where the spectrum is a set of delta lines (see ibm_lines).
double chi_im(const SpectralKernels& kernels, double omega);

// Lines at delta + l omega0 with weights e^{-lambda} lambda^l / l!.
std::vector<SpectralLine> ibm_lines(const SpectralKernels& kernels);

SpectrumSeries susceptibility(const SpectralKernels& kernels, std::span<const double> omegas,
                              Execution exec = Execution::Parallel);

// Quadrature rule for int sbm_kernel(x) f(x) dx on (0, W].
SpectralRule sideband_rule(const SpectralKernels& kernels, const RuleOptions& opts);

// C(t) = int_0^inf chi''(omega) cos(omega t) d omega.
TimeSeries correlation(const SpectralKernels& kernels, std::span<const double> times,
                       Execution exec = Execution::Parallel);

// |int_0^inf chi'' d omega - 1|, integrated directly over chi''.
double sum_rule(const SpectralKernels& kernels);

} // namespace sbsim

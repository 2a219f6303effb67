// renorm.hpp: Self-consistent tunneling renormalization and the dressed
// qubit-bath coupling that survives the polaron-type transformation

#pragma once

#include "sbsim/model.hpp"

namespace sbsim {

struct RenormalizedModel {
    ModelParams params;
    double eta{1.0};           // tunneling renormalization, 0 < eta <= 1
    double eta_delta{0.0};     // renormalized splitting eta * delta
    double energy_shift{0.0};  // constant shift of the unperturbed Hamiltonian
    int converged_in{0};       // fixed-point iterations used
    double residual{0.0};      // |eta - exp(-alpha I(eta))| at exit
};

// I(a) = int_0^W omega exp(-omega/omegac) / (omega + a)^2 d omega, with a = eta*delta.
double renorm_integral(const ModelParams& params, double eta_delta, const NumericsConfig& cfg);

// exp(-alpha * I(eta * delta)): the right-hand side of the self-consistency.
double eta_map(const ModelParams& params, double eta, const NumericsConfig& cfg);

// Damped fixed-point iteration eta <- (1-d) eta + d exp(-alpha I(eta)) from eta = 1.
// Throws NumericalError(NoConvergence) when the iteration budget is exhausted.
RenormalizedModel solve_eta(const ModelParams& params, const NumericsConfig& cfg = {},
                            double damping = 0.5);

// sum_k V_k^2 delta(omega - omega_k)
//   = 2 alpha omega exp(-omega/omegac) (eta delta)^2 / (omega + eta delta)^2.
double effective_coupling_density(const RenormalizedModel& model, double omega);

} // namespace sbsim

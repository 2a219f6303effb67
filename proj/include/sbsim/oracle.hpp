// oracle.hpp: Independent reference results: closed forms of the
// dissipationless model and exact propagation of the full Hamiltonian on a
// truncated Fock space with a discretized bath

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sbsim/dynamics.hpp"
#include "sbsim/model.hpp"

namespace sbsim::oracle {

// Linear: equal bins on (0, band]. Logarithmic: (0, log_min] then geometric
// bins. TwoScale: equal bins on (0, split] and n_coarse_modes wider equal bins
// on (split, band], for runs where only low frequencies need fine spacing.
enum class BathGrid { Linear, Logarithmic, TwoScale };

// Observable convention for ed_dynamics.
//   Lab:     |psi0> = |sigma_z = +1>|0_a>|vac> evolved by H, observable sigma_z.
//   Polaron: the same product state prepared in the transformed frame, i.e.
//            <psi0| e^{iH''t} sigma_z e^{-iH''t} |psi0> with H'' = U H U^dagger,
//            U = e^{S2} e^{S1}, evaluated exactly on the truncated space.
enum class Frame { Lab, Polaron };

const char* grid_name(BathGrid g);

struct TruncationSpec {
    int n_osc{12};               // oscillator Fock states 0 .. n_osc-1
    int n_bath_modes{6};
    int n_fock_per_mode{3};      // per-mode occupations 0 .. n_fock_per_mode-1
    int max_bath_excitations{-1};  // cap on total bath quanta; -1 = no cap
    BathGrid discretization{BathGrid::Linear};
    double band{4.0};            // bath modes cover (0, band * omegac]
    double log_min{1e-2};        // first log-grid edge, in units of omegac
    double split{2.0};           // TwoScale boundary, in units of omegac
    int n_coarse_modes{0};       // TwoScale modes above split
    std::size_t budget{2'000'000};

    std::size_t bath_states() const;
    std::size_t dimension() const { return 2 * static_cast<std::size_t>(n_osc) * bath_states(); }
};

struct BathMode {
    double omega{0.0};  // J-weighted bin centroid
    double g{0.0};      // g^2 = int_bin 2 alpha w exp(-w/omegac) dw
};

// Bin the Ohmic density J(w) = 2 alpha w exp(-w/omegac) on (0, band * omegac].
std::vector<BathMode> discretize_bath(const ModelParams& params, const TruncationSpec& trunc);

// Exact dissipationless correlation e^{lambda (cos w0 t - 1)} cos(delta t + lambda sin w0 t).
double ibm_correlation(const ModelParams& params, double t);

struct EdOptions {
    Frame frame{Frame::Polaron};
    int krylov_dim{30};
    double step_tol{1e-10};  // local Lanczos error estimate allowed per step
};

// P(t) = <sigma_z(t)> by Lanczos propagation of the full Hamiltonian. Times may
// be negative. meta carries dimension, max norm drift and max energy drift.
TimeSeries ed_dynamics(const ModelParams& params, const TruncationSpec& trunc, std::span<const double> times,
                       const EdOptions& opts = {});

// Truncation one step larger in every cutoff: n_osc, n_fock_per_mode and,
// when capped, max_bath_excitations.
TruncationSpec incremented(const TruncationSpec& trunc);

struct ConvergenceReport {
    TimeSeries base;
    TimeSeries refined;
    double max_change{0.0};
};

// Runs ed_dynamics at trunc and incremented(trunc). Throws
// NumericalError(TruncationNotConverged) when max |P_base - P_refined| > tol.
ConvergenceReport ed_dynamics_checked(const ModelParams& params, const TruncationSpec& trunc,
                                      std::span<const double> times, double tol, const EdOptions& opts = {});

} // namespace sbsim::oracle

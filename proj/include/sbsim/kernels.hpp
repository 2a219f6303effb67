// kernels.hpp: Data-parallel inner loops: pointwise evaluation on frequency
// nodes and cosine/Fourier sums over time grids.
//
// Each kernel has a serial reference and an OpenMP version. The parallel
// versions only distribute independent outputs; every individual sum is
// accumulated serially in node order, so both variants are bit-identical.

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace sbsim::kernels {

using PointFn = std::function<double(double)>;

std::vector<double> evaluate_serial(const PointFn& f, std::span<const double> points);
std::vector<double> evaluate_parallel(const PointFn& f, std::span<const double> points);

// out[j] = sum_i coeffs[i] cos(nodes[i] * times[j])
std::vector<double> cosine_sum_serial(std::span<const double> nodes, std::span<const double> coeffs,
                                      std::span<const double> times);
std::vector<double> cosine_sum_parallel(std::span<const double> nodes, std::span<const double> coeffs,
                                        std::span<const double> times);

// out[j] = sum_i coeffs[i] exp(i nodes[i] * times[j])
std::vector<std::complex<double>> fourier_sum_serial(std::span<const double> nodes,
                                                     std::span<const double> coeffs,
                                                     std::span<const double> times);
std::vector<std::complex<double>> fourier_sum_parallel(std::span<const double> nodes,
                                                       std::span<const double> coeffs,
                                                       std::span<const double> times);

// Upper bound on worker threads: SBSIM_THREADS if set and positive, else the
// OpenMP default.
int thread_limit();
void apply_thread_limit();

} // namespace sbsim::kernels

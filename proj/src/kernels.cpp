// kernels.cpp: Serial and OpenMP implementations of the grid kernels

#include "sbsim/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace sbsim::kernels {

std::vector<double> evaluate_serial(const PointFn& f, std::span<const double> points) {
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = f(points[i]);
    return out;
}

std::vector<double> evaluate_parallel(const PointFn& f, std::span<const double> points) {
    std::vector<double> out(points.size());
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = f(points[static_cast<std::size_t>(i)]);
    }
    return out;
}

namespace {

inline double cosine_at(std::span<const double> nodes, std::span<const double> coeffs, double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += coeffs[i] * std::cos(nodes[i] * t);
    return acc;
}

inline std::complex<double> fourier_at(std::span<const double> nodes, std::span<const double> coeffs, double t) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double phase = nodes[i] * t;
        re += coeffs[i] * std::cos(phase);
        im += coeffs[i] * std::sin(phase);
    }
    return {re, im};
}

} // namespace

std::vector<double> cosine_sum_serial(std::span<const double> nodes, std::span<const double> coeffs,
                                      std::span<const double> times) {
    std::vector<double> out(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) out[j] = cosine_at(nodes, coeffs, times[j]);
    return out;
}

std::vector<double> cosine_sum_parallel(std::span<const double> nodes, std::span<const double> coeffs,
                                        std::span<const double> times) {
    std::vector<double> out(times.size());
    const auto n = static_cast<std::ptrdiff_t>(times.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        out[static_cast<std::size_t>(j)] = cosine_at(nodes, coeffs, times[static_cast<std::size_t>(j)]);
    }
    return out;
}

std::vector<std::complex<double>> fourier_sum_serial(std::span<const double> nodes,
                                                     std::span<const double> coeffs,
                                                     std::span<const double> times) {
    std::vector<std::complex<double>> out(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) out[j] = fourier_at(nodes, coeffs, times[j]);
    return out;
}

std::vector<std::complex<double>> fourier_sum_parallel(std::span<const double> nodes,
                                                       std::span<const double> coeffs,
                                                       std::span<const double> times) {
    std::vector<std::complex<double>> out(times.size());
    const auto n = static_cast<std::ptrdiff_t>(times.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        out[static_cast<std::size_t>(j)] = fourier_at(nodes, coeffs, times[static_cast<std::size_t>(j)]);
    }
    return out;
}

int thread_limit() {
    if (const char* env = std::getenv("SBSIM_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

void apply_thread_limit() { omp_set_num_threads(thread_limit()); }

} // namespace sbsim::kernels

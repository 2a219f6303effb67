// acceptance.cpp: One PASS/FAIL line per acceptance criterion; exit 1 if any fails

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sbsim/dynamics.hpp"
#include "sbsim/oracle.hpp"
#include "sbsim/response.hpp"

using namespace sbsim;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

ModelParams make(double delta, double omega0, double lambda, double alpha) {
    ModelParams p;
    p.delta = delta;
    p.omega0 = omega0;
    p.lambda_ = lambda;
    p.alpha = alpha;
    return p;
}

std::vector<double> local_maxima(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) peaks.push_back(x[i]);
    }
    return peaks;
}

Verdict critical_coupling() {
    const auto pt = alpha_critical(make(0.01, 0.5, 0.0, 0.0), 0.0);
    const bool ok = std::abs(pt.alpha_c - 0.5) <= 0.05;
    return {ok, fmt("alpha_c=%.4f", pt.alpha_c) + fmt(" bracket=%.1e", pt.bracket_hi - pt.bracket_lo) +
                    " target 0.50+-0.05"};
}

Verdict quality_factor_baseline() {
    const double delta = 0.01, omega0 = 0.5;
    const auto q0 = quality_factor(build_kernels(make(delta, omega0, 0.0, 0.1)));
    bool ok = q0.has_value() && *q0 >= 5.4 && *q0 <= 6.8;
    double prev = 0.0, q_last = 0.0;
    bool monotone = true;
    for (int i = 0; i <= 8; ++i) {
        const auto q = quality_factor(build_kernels(make(delta, omega0, 0.25 * i, 0.1)));
        if (!q || *q < prev) monotone = false;
        prev = q ? *q : prev;
        q_last = q ? *q : 0.0;
    }
    const double ratio = q0 ? q_last / *q0 : 0.0;
    ok = ok && monotone && ratio > 5.0;
    return {ok, fmt("Q(0)=%.3f in [5.4,6.8]", q0.value_or(NAN)) + (monotone ? " monotone" : " NOT monotone") +
                    fmt(" Q(2)/Q(0)=%.2f > 5", ratio) + fmt(" pair delta=%g", delta) + fmt(" omega0=%g", omega0)};
}

Verdict sum_rules() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ud(0.02, 0.2), uo(0.2, 1.0), ul(0.0, 2.0), ua(0.02, 0.3);
    double worst_p = 0.0, worst_c = 0.0;
    int sampled = 0;
    const std::vector<double> t0{0.0};
    while (sampled < 10) {
        const auto p = make(ud(rng), uo(rng), ul(rng), ua(rng));
        const auto k = build_kernels(p);
        if (!omega_eff(k)) continue;
        ++sampled;
        worst_p = std::max(worst_p, std::abs(population(k, t0).values[0] - 1.0));
        worst_c = std::max(worst_c, std::abs(correlation(k, t0).values[0] - 1.0));
    }
    return {worst_p < 1e-3 && worst_c < 1e-3,
            fmt("max|P(0)-1|=%.2e", worst_p) + fmt(" max|C(0)-1|=%.2e", worst_c) + " over 10 coherent draws, tol 1e-3"};
}

Verdict ibm_oracle() {
    double worst_c = 0.0, worst_w = 0.0;
    for (double lambda : {0.5, 1.0, 2.0}) {
        const auto p = make(0.1, 0.5, lambda, 0.0);
        const auto k = build_kernels(p);
        const auto t = oracles::linspace(0.0, 20.0 / p.omega0, 2001);
        const auto c = correlation(k, t);
        for (std::size_t j = 0; j < t.size(); ++j) {
            const double exact = std::exp(lambda * (std::cos(p.omega0 * t[j]) - 1.0)) *
                                 std::cos(p.delta * t[j] + lambda * std::sin(p.omega0 * t[j]));
            worst_c = std::max(worst_c, std::abs(c.values[j] - exact));
        }
        const auto lines = ibm_lines(k);
        for (std::size_t l = 0; l < lines.size(); ++l) {
            const double w = std::exp(-lambda + static_cast<double>(l) * std::log(lambda) - std::lgamma(l + 1.0));
            worst_w = std::max(worst_w, std::abs(lines[l].weight - w));
            worst_w = std::max(worst_w, std::abs(lines[l].position - (p.delta + static_cast<double>(l) * p.omega0)));
        }
    }
    return {worst_c <= 1e-10 && worst_w <= 1e-10,
            fmt("max|C-C_exact|=%.2e", worst_c) + fmt(" max line error=%.2e", worst_w) + " tol 1e-10"};
}

Verdict sbm_reduction() {
    const auto k = build_kernels(make(0.1, 0.5, 0.0, 0.1));
    bool same = k.lmax() == 0;
    for (double w : oracles::linspace(-2.0, 5.0, 701)) {
        same = same && k.big_gamma(w) == k.gamma(w) && k.big_sigma(w) == k.r_shift(w);
    }
    const auto omegas = oracles::linspace(0.0, 2.0, 4001);
    const auto s = susceptibility(k, omegas);
    const auto peaks = local_maxima(s.omegas, s.chi);
    const double a = k.eta_delta();
    const bool single = peaks.size() == 1 && std::abs(peaks[0] - a) < 0.25 * a;
    return {same && single, std::string(same ? "Gamma==gamma, Sigma==R bitwise" : "kernels differ") +
                                fmt(" peaks=%.0f", static_cast<double>(peaks.size())) +
                                fmt(" at %.4f", peaks.empty() ? NAN : peaks[0]) + fmt(" eta*delta=%.4f", a)};
}

Verdict multi_peak() {
    const double omega0 = 0.5, step = 1e-3;
    const auto k = build_kernels(make(0.1, omega0, 1.0, 0.05));
    const auto omegas = oracles::linspace(0.0, 3.0, 3001);
    const auto s = susceptibility(k, omegas);
    const auto peaks = local_maxima(s.omegas, s.chi);
    double worst = 0.0;
    for (std::size_t i = 1; i < peaks.size(); ++i) worst = std::max(worst, std::abs(peaks[i] - peaks[i - 1] - omega0));
    const bool ok = peaks.size() >= 4 && worst <= step * (1.0 + 1e-9);
    return {ok, fmt("%.0f peaks", static_cast<double>(peaks.size())) + fmt(" max|spacing-omega0|=%.1e", worst) +
                    fmt(" grid step %.0e", step)};
}

Verdict ed_cross_validation() {
    const auto p = make(0.2, 1.0, 0.25, 0.05);
    const auto k = build_kernels(p);
    const auto w = omega_eff(k);
    if (!w) return {false, "no effective frequency"};
    const auto t = oracles::linspace(0.0, 3.0 * 2.0 * std::acos(-1.0) / *w, 121);
    const auto analytic = population(k, t);

    oracle::TruncationSpec trunc;
    trunc.discretization = oracle::BathGrid::TwoScale;
    trunc.n_bath_modes = 48;
    trunc.split = 2.0;
    trunc.n_coarse_modes = 8;
    trunc.n_fock_per_mode = 3;
    trunc.max_bath_excitations = 2;
    trunc.n_osc = 4;
    try {
        const auto report = oracle::ed_dynamics_checked(p, trunc, t, 0.01);
        double gap = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) gap = std::max(gap, std::abs(analytic.values[j] - report.base.values[j]));
        return {gap <= 0.05, fmt("max|P-P_ed|=%.4f tol 0.05", gap) + fmt(" truncation change=%.4f tol 0.01", report.max_change) +
                                 fmt(" dim=%.0f", report.base.meta["dimension"].get<double>())};
    } catch (const NumericalError& e) {
        return {false, std::string("ED truncation: ") + e.what()};
    }
}

Verdict kramers_kronig() {
    const auto k = build_kernels(make(0.1, 0.5, 1.0, 0.1));
    std::vector<double> omegas = oracles::linspace(-1.9, -0.1, 10);
    for (double w : oracles::linspace(0.013, 3.07, 30)) omegas.push_back(w);
    for (double w : oracles::linspace(3.5, 20.5, 10)) omegas.push_back(w);
    double worst = 0.0;
    for (double w : omegas) {
        const double direct = k.big_sigma(w);
        worst = std::max(worst, std::abs(sigma_from_gamma(k, w) - direct) / std::abs(direct));
    }
    return {worst <= 1e-4, fmt("max relative deviation %.2e", worst) + " at 50 frequencies, tol 1e-4"};
}

Verdict correlation_vs_population() {
    const auto p = make(0.1, 0.5, 1.0, 0.1);
    const auto k = build_kernels(p);
    const auto t = oracles::linspace(0.0, 20.0 / p.delta, 2001);
    const auto c = correlation(k, t);
    const auto pop = population(k, t);
    double gap = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) gap = std::max(gap, std::abs(c.values[j] - pop.values[j]));
    return {gap > 0.05, fmt("max|C-P|=%.4f > 0.05", gap)};
}

Verdict determinism() {
    const auto dir = fs::temp_directory_path() / "sbsim_acceptance";
    fs::create_directories(dir);
    std::string bodies[2];
    for (int i = 0; i < 2; ++i) {
        const auto out = dir / ("run" + std::to_string(i) + ".csv");
        fs::remove(out);
        const std::string cmd = std::string("\"") + SBSIM_TOOL + "\" correlation --lambda 1 --alpha 0.1 --t 0:200:401"
                                " --with-population -o \"" + out.string() + "\" > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) return {false, "tool run failed"};
        std::ifstream in(out, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        bodies[i] = ss.str();
    }
    const bool ok = !bodies[0].empty() && bodies[0] == bodies[1];
    return {ok, fmt("%.0f bytes", static_cast<double>(bodies[0].size())) + (ok ? " identical" : " differ")};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"critical coupling", critical_coupling},
        {"quality factor baseline", quality_factor_baseline},
        {"sum rules", sum_rules},
        {"dissipationless limit", ibm_oracle},
        {"single-kernel reduction", sbm_reduction},
        {"multi-peak structure", multi_peak},
        {"exact propagation", ed_cross_validation},
        {"kramers-kronig", kramers_kronig},
        {"correlation vs population", correlation_vs_population},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2zu %-26s %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str(),
                    secs);
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

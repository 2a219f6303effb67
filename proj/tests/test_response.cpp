#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sbsim/response.hpp"

using namespace sbsim;
using std::numbers::pi;
using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

namespace {

ModelParams make(double lambda, double alpha, double delta = 0.1, double omega0 = 0.5) {
    ModelParams p;
    p.lambda_ = lambda;
    p.alpha = alpha;
    p.delta = delta;
    p.omega0 = omega0;
    return p;
}

// Integral of chi'' over [lo, hi] with a forced cut at each sideband peak.
double chi_mass(const SpectralKernels& k, double lo, double hi, double peak_offset) {
    std::vector<double> cuts{lo};
    for (int l = 0; l <= k.lmax(); ++l) {
        for (double d : {-0.05, 0.0, 0.05}) {
            const double c = peak_offset + l * k.params().omega0 + d;
            if (c > cuts.back() && c < hi) cuts.push_back(c);
        }
    }
    cuts.push_back(hi);
    auto f = [&](double w) { return chi_im(k, w); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += GK::integrate(f, cuts[i], cuts[i + 1], 18, 1e-11);
    return total;
}

} // namespace

TEST_CASE("negative frequencies and the dissipationless limit are rejected") {
    const auto k = build_kernels(make(1.0, 0.1));
    try {
        chi_im(k, -0.1);
        FAIL("no throw");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == ErrorKind::NegativeFrequencyRequest);
        CHECK(e.field() == "omega");
    }
    const auto k0 = build_kernels(make(1.0, 0.0));
    try {
        chi_im(k0, 0.3);
        FAIL("no throw");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == ErrorKind::DissipationlessLimit);
    }
}

TEST_CASE("without the oscillator chi'' is the single spin-boson kernel") {
    const auto k = build_kernels(make(0.0, 0.1));
    CHECK(k.lmax() == 0);
    for (double w : {0.01, 0.05, 0.09, 0.2, 1.5}) CHECK(chi_im(k, w) == sbm_kernel(k, w));
    CHECK(chi_im(k, 0.0) == 0.0);
}

TEST_CASE("dissipationless lines carry the poisson weights") {
    const auto k = build_kernels(make(1.3, 0.0));
    const auto lines = ibm_lines(k);
    REQUIRE(static_cast<int>(lines.size()) == k.lmax() + 1);
    double total = 0.0;
    for (std::size_t l = 0; l < lines.size(); ++l) {
        CHECK(lines[l].position == doctest::Approx(0.1 + 0.5 * static_cast<double>(l)).epsilon(1e-15));
        const double expected = std::exp(-1.3 + static_cast<double>(l) * std::log(1.3) - std::lgamma(l + 1.0));
        CHECK(lines[l].weight == doctest::Approx(expected).epsilon(1e-12));
        total += lines[l].weight;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(sum_rule(k) < 1e-12);
    const std::vector<double> grid{0.0, 0.5, 1.0};
    const auto s = susceptibility(k, grid);
    CHECK(s.meta["representation"] == "delta_lines");
    CHECK(s.omegas.size() == lines.size());
}

TEST_CASE("sideband windows hold the poisson weights") {
    const auto k = build_kernels(make(1.0, 0.05));
    const double w0 = 0.5;
    const auto weights = k.weights();
    const double centre = k.eta_delta();
    for (int l = 0; l <= 3; ++l) {
        const double lo = std::max(0.0, centre + (l - 0.5) * w0);
        const double hi = centre + (l + 0.5) * w0;
        const double mass = chi_mass(k, lo, hi, centre);
        CAPTURE(l);
        CHECK(mass == doctest::Approx(weights[static_cast<std::size_t>(l)]).epsilon(0.05));
    }
}

TEST_CASE("spectral sum rule") {
    CHECK(sum_rule(build_kernels(make(0.0, 0.1))) < 1e-3);
    CHECK(sum_rule(build_kernels(make(2.0, 0.3))) < 1e-3);
}

TEST_CASE("chi'' is non-negative and peaks once per sideband") {
    const auto k = build_kernels(make(2.0, 0.05));
    const auto omegas = oracles::linspace(0.0, 3.0, 3001);
    const auto s = susceptibility(k, omegas);
    std::vector<double> peaks;
    for (std::size_t i = 0; i < s.chi.size(); ++i) {
        CHECK(s.chi[i] >= 0.0);
        if (i > 0 && i + 1 < s.chi.size() && s.chi[i] > s.chi[i - 1] && s.chi[i] >= s.chi[i + 1]) {
            peaks.push_back(s.omegas[i]);
        }
    }
    REQUIRE(peaks.size() >= 4);
    for (std::size_t i = 1; i < 4; ++i) CHECK(peaks[i] - peaks[i - 1] == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("correlation starts at one") {
    for (double lambda : {0.0, 1.0, 2.0}) {
        const std::vector<double> t{0.0};
        const auto c = correlation(build_kernels(make(lambda, 0.1)), t);
        CHECK(std::abs(c.values[0] - 1.0) < 1e-3);
    }
}

TEST_CASE("dissipationless correlation matches a direct line sum") {
    const double lambda = 0.9;
    const auto k = build_kernels(make(lambda, 0.0));
    const auto t = oracles::linspace(0.0, 80.0, 161);
    const auto c = correlation(k, t);
    CHECK(c.meta["branch"] == "dissipationless");
    for (std::size_t j = 0; j < t.size(); ++j) {
        double ref = 0.0;
        for (int l = 0; l < 50; ++l) {
            const double w = std::exp(-lambda + l * std::log(lambda) - std::lgamma(l + 1.0));
            ref += w * std::cos((0.1 + 0.5 * l) * t[j]);
        }
        CHECK(c.values[j] == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("correlation is the cosine transform of chi''") {
    const auto k = build_kernels(make(1.0, 0.1));
    const std::vector<double> t{0.0, 3.0, 17.0, 40.0};
    const auto c = correlation(k, t);
    const double centre = k.eta_delta();
    for (std::size_t j = 0; j < t.size(); ++j) {
        std::vector<double> cuts{0.0};
        for (int l = 0; l <= k.lmax(); ++l) {
            for (double d : {-0.05, 0.0, 0.05}) {
                const double x = centre + l * 0.5 + d;
                if (x > cuts.back()) cuts.push_back(x);
            }
        }
        cuts.push_back(k.support_end());
        auto f = [&](double w) { return chi_im(k, w) * std::cos(w * t[j]); };
        double ref = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) ref += GK::integrate(f, cuts[i], cuts[i + 1], 15, 1e-9);
        CAPTURE(t[j]);
        CHECK(std::abs(c.values[j] - ref) < 1e-4);
    }
}

TEST_CASE("without the oscillator the correlation is the population") {
    const auto k = build_kernels(make(0.0, 0.1));
    const auto t = oracles::linspace(0.0, 150.0, 151);
    const auto c = correlation(k, t);
    const auto p = population(k, t);
    for (std::size_t j = 0; j < t.size(); ++j) CHECK(std::abs(c.values[j] - p.values[j]) < 1e-3);
}

TEST_CASE("the oscillator separates correlation from population") {
    const auto k = build_kernels(make(1.0, 0.1));
    const auto t = oracles::linspace(0.0, 60.0, 121);
    const auto c = correlation(k, t);
    const auto p = population(k, t);
    double gap = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) gap = std::max(gap, std::abs(c.values[j] - p.values[j]));
    CHECK(gap > 0.05);
}

TEST_CASE("weak damping approaches the line sum") {
    const double lambda = 0.6;
    const auto k = build_kernels(make(lambda, 1e-4));
    const auto t = oracles::linspace(0.0, 50.0, 101);
    const auto c = correlation(k, t);
    for (std::size_t j = 0; j < t.size(); ++j) {
        double ref = 0.0;
        for (int l = 0; l < 40; ++l) {
            const double w = std::exp(-lambda + l * std::log(lambda) - std::lgamma(l + 1.0));
            ref += w * std::cos((0.1 + 0.5 * l) * t[j]);
        }
        CHECK(std::abs(c.values[j] - ref) < 1e-3);
    }
}

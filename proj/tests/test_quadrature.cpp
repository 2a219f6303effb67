#include <doctest.h>

#include <cmath>
#include <vector>

#include "sbsim/quadrature.hpp"

using namespace sbsim;

TEST_CASE("gauss-kronrod integrates smooth functions") {
    const auto r = quad::integrate([](double x) { return std::exp(-x) * std::cos(3.0 * x); }, 0.0, 10.0, {1e-14, 1e-12});
    const double exact = (1.0 - std::exp(-10.0) * (std::cos(30.0) - 3.0 * std::sin(30.0))) / 10.0;
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("high-degree polynomials are exact on one panel") {
    int calls = 0;
    const auto r = quad::integrate(
        [&](double x) {
            ++calls;
            return std::pow(x, 19);
        },
        0.0, 1.0, {0.0, 1e-12});
    CHECK(r.value == doctest::Approx(1.0 / 20.0).epsilon(1e-14));
    CHECK(calls == 21);
}

TEST_CASE("breaks are clipped, sorted and deduplicated") {
    const auto b = quad::normalize_breaks({3.0, -1.0, 0.5, 0.5 + 1e-15, 2.0, 9.0}, 0.0, 4.0);
    REQUIRE(b.size() == 5);
    CHECK(b.front() == 0.0);
    CHECK(b[1] == 0.5);
    CHECK(b[2] == 2.0);
    CHECK(b[3] == 3.0);
    CHECK(b.back() == 4.0);
}

TEST_CASE("principal value of constant and linear densities") {
    for (double pole : {0.1, 0.37, 0.9}) {
        const auto c = quad::principal_value([](double) { return 1.0; }, 0.0, 1.0, pole, {}, {1e-13, 1e-12});
        CHECK(c.value == doctest::Approx(std::log(pole / (1.0 - pole))).epsilon(1e-10));
        const auto l = quad::principal_value([](double x) { return x; }, 0.0, 1.0, pole, {}, {1e-13, 1e-12});
        CHECK(l.value == doctest::Approx(-1.0 + pole * std::log(pole / (1.0 - pole))).epsilon(1e-10));
    }
}

TEST_CASE("batched adaptive panels agree with the scalar integrator") {
    auto f = [](double x) { return 1.0 / (1e-4 + (x - 0.3) * (x - 0.3)); };
    const quad::BatchFn batch = [&](std::span<const double> xs) {
        std::vector<double> out;
        for (double x : xs) out.push_back(f(x));
        return out;
    };
    const std::vector<double> breaks{0.0, 1.0};
    quad::Result summary;
    const auto panels = quad::adaptive_panels_batched(batch, breaks, {1e-10, 0.0}, 5000, &summary);
    const double exact = 100.0 * (std::atan(0.7 / 1e-2) + std::atan(0.3 / 1e-2));
    CHECK(summary.converged);
    CHECK(summary.value == doctest::Approx(exact).epsilon(1e-11));

    const auto rule = quad::node_rule(panels);
    double total = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) total += rule.weights[i] * rule.values[i];
    CHECK(total == doctest::Approx(exact).epsilon(1e-11));

    const auto split = quad::split_wide_panels_batched(batch, panels, 0.01, 0.0);
    for (const auto& p : split) CHECK(p.b - p.a <= 0.01 + 1e-15);
    double again = 0.0;
    for (const auto& p : split) again += p.value;
    CHECK(again == doctest::Approx(exact).epsilon(1e-11));
}

// quadrature.hpp: Globally adaptive Gauss-Kronrod integration, principal values
// and reusable node rules

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace sbsim::quad {

struct Tolerance {
    double abs{0.0};
    double rel{1e-9};
};

struct Result {
    double value{0.0};
    double error{0.0};
    std::size_t evaluations{0};
    bool converged{true};
};

inline constexpr std::size_t kKronrodPoints = 21;

// One Gauss-Kronrod (10, 21) panel with the integrand samples retained, so
// that the panel can later be reused as a fixed quadrature rule.
struct Panel {
    double a{0.0};
    double b{0.0};
    double value{0.0};
    double error{0.0};
    std::array<double, kKronrodPoints> samples{};
};

namespace detail {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

// Abscissae in [-1, 1] ordered as: 0, +x1, -x1, +x2, -x2, ...
inline const std::array<double, kKronrodPoints>& unit_nodes() {
    static const std::array<double, kKronrodPoints> nodes = [] {
        std::array<double, kKronrodPoints> n{};
        const auto& x = Kronrod::abscissa();
        n[0] = x[0];
        for (std::size_t i = 1; i < x.size(); ++i) {
            n[2 * i - 1] = x[i];
            n[2 * i] = -x[i];
        }
        return n;
    }();
    return nodes;
}

} // namespace detail

template <class F>
Panel gk21(F& f, double a, double b) {
    const auto& xk = detail::Kronrod::abscissa();
    const auto& wk = detail::Kronrod::weights();
    const auto& wg = detail::Gauss::weights();
    const auto& unit = detail::unit_nodes();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    Panel p{a, b, 0.0, 0.0, {}};
    for (std::size_t i = 0; i < kKronrodPoints; ++i) p.samples[i] = f(c + h * unit[i]);

    double kron = wk[0] * p.samples[0];
    double gauss = 0.0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double pair = p.samples[2 * i - 1] + p.samples[2 * i];
        kron += wk[i] * pair;
        // Gauss-10 abscissae are the odd-indexed Kronrod abscissae.
        if (i % 2 == 1) gauss += wg[i / 2] * pair;
    }
    p.value = kron * h;
    p.error = std::abs((kron - gauss) * h);
    return p;
}

// Kronrod weight for the i-th retained sample of a panel.
inline double kronrod_weight(std::size_t i) {
    const auto& wk = detail::Kronrod::weights();
    return i == 0 ? wk[0] : wk[(i + 1) / 2];
}

inline double kronrod_node(const Panel& p, std::size_t i) {
    return 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * detail::unit_nodes()[i];
}

// Sorted, de-duplicated breakpoints clipped to [lo, hi] with both ends present.
inline std::vector<double> normalize_breaks(std::vector<double> breaks, double lo, double hi) {
    breaks.push_back(lo);
    breaks.push_back(hi);
    std::erase_if(breaks, [&](double x) { return !(x >= lo && x <= hi) || !std::isfinite(x); });
    std::sort(breaks.begin(), breaks.end());
    // Points closer than rounding noise would create degenerate panels.
    auto close = [](double x, double y) { return y - x <= 1e-12 * std::max(std::abs(x), std::abs(y)); };
    breaks.erase(std::unique(breaks.begin(), breaks.end(), close), breaks.end());
    breaks.front() = lo;
    if (breaks.size() > 1) breaks.back() = hi;
    return breaks;
}

// Logarithmically graded points scale * 10^(k / per_decade) inside (lo, hi).
inline std::vector<double> geometric_breaks(double scale, double lo, double hi, int per_decade = 2,
                                            double min_factor = 1e-3) {
    std::vector<double> out;
    if (!(scale > 0.0)) return out;
    const double step = std::pow(10.0, 1.0 / per_decade);
    for (double x = scale * min_factor; x < hi; x *= step) {
        if (x > lo) out.push_back(x);
    }
    return out;
}

template <class F>
class AdaptiveIntegrator {
public:
    explicit AdaptiveIntegrator(Tolerance tol, std::size_t max_panels = 4000)
        : tol_(tol), max_panels_(max_panels) {}

    // Refines panels until the summed Kronrod-Gauss error meets the tolerance.
    std::vector<Panel> panels(F& f, std::span<const double> breaks, Result* summary = nullptr) const {
        std::vector<Panel> done;
        auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
        std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
        std::size_t evals = 0;
        double total = 0.0;
        double err = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            if (!(breaks[i + 1] > breaks[i])) continue;
            Panel p = gk21(f, breaks[i], breaks[i + 1]);
            evals += kKronrodPoints;
            total += p.value;
            err += p.error;
            heap.push(p);
        }
        bool converged = true;
        while (!heap.empty() && err > std::max(tol_.abs, tol_.rel * std::abs(total))) {
            if (heap.size() + done.size() >= max_panels_) {
                converged = false;
                break;
            }
            Panel worst = heap.top();
            const double mid = 0.5 * (worst.a + worst.b);
            if (!(mid > worst.a && mid < worst.b) ||
                (worst.b - worst.a) < 1e-14 * std::max(std::abs(worst.a), std::abs(worst.b))) {
                // Panel cannot be split further in floating point.
                heap.pop();
                done.push_back(worst);
                err -= worst.error;
                if (done.size() > max_panels_) {
                    converged = false;
                    break;
                }
                continue;
            }
            heap.pop();
            Panel left = gk21(f, worst.a, mid);
            Panel right = gk21(f, mid, worst.b);
            evals += 2 * kKronrodPoints;
            total += left.value + right.value - worst.value;
            err += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
        }
        while (!heap.empty()) {
            done.push_back(heap.top());
            heap.pop();
        }
        std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
        if (summary) {
            // Re-sum in panel order so the result does not depend on heap history.
            summary->value = 0.0;
            summary->error = 0.0;
            for (const auto& p : done) {
                summary->value += p.value;
                summary->error += p.error;
            }
            summary->evaluations = evals;
            summary->converged = converged;
        }
        return done;
    }

private:
    Tolerance tol_;
    std::size_t max_panels_;
};

template <class F>
Result integrate(F&& f, std::span<const double> breaks, Tolerance tol, std::size_t max_panels = 4000) {
    Result r;
    AdaptiveIntegrator<std::remove_reference_t<F>>(tol, max_panels).panels(f, breaks, &r);
    return r;
}

template <class F>
Result integrate(F&& f, double a, double b, Tolerance tol, std::size_t max_panels = 4000) {
    const std::array<double, 2> breaks{a, b};
    return integrate(std::forward<F>(f), std::span<const double>(breaks), tol, max_panels);
}

// P int_lo^hi g(x) / (pole - x) dx by singularity subtraction:
//   int (g(x) - g(pole)) / (pole - x) dx + g(pole) ln((pole - lo) / (hi - pole)).
// Outside (lo, hi) the integral is regular and evaluated directly. `depth`
// adds graded breakpoints approaching the pole from both sides.
template <class G>
Result principal_value(G&& g, double lo, double hi, double pole, std::vector<double> breaks,
                       Tolerance tol, int depth = 4, std::size_t max_panels = 4000) {
    if (!(pole > lo && pole < hi)) {
        auto regular = [&](double x) { return g(x) / (pole - x); };
        const auto b = normalize_breaks(std::move(breaks), lo, hi);
        return integrate(regular, std::span<const double>(b), tol, max_panels);
    }
    const double g_pole = g(pole);
    auto smooth = [&](double x) {
        const double d = pole - x;
        return (g(x) - g_pole) / d;
    };
    const double reach = std::min(pole - lo, hi - pole);
    std::erase_if(breaks, [&](double x) { return std::abs(x - pole) <= 1e-10 * reach; });
    for (int k = 1; k <= depth; ++k) {
        const double d = reach * std::ldexp(1.0, -k);
        breaks.push_back(pole - d);
        breaks.push_back(pole + d);
    }
    breaks.push_back(pole);
    const auto b = normalize_breaks(std::move(breaks), lo, hi);
    Result r = integrate(smooth, std::span<const double>(b), tol, max_panels);
    if (g_pole != 0.0) r.value += g_pole * std::log((pole - lo) / (hi - pole));
    r.evaluations += 1;
    return r;
}

// Batch evaluator: fills values[i] = f(points[i]).
using BatchFn = std::function<std::vector<double>(std::span<const double>)>;

namespace detail {

inline Panel assemble_panel(double a, double b, const double* samples) {
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double h = 0.5 * (b - a);
    Panel p{a, b, 0.0, 0.0, {}};
    std::copy(samples, samples + kKronrodPoints, p.samples.begin());
    double kron = wk[0] * p.samples[0];
    double gauss = 0.0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double pair = p.samples[2 * i - 1] + p.samples[2 * i];
        kron += wk[i] * pair;
        if (i % 2 == 1) gauss += wg[i / 2] * pair;
    }
    p.value = kron * h;
    p.error = std::abs((kron - gauss) * h);
    return p;
}

inline std::vector<Panel> evaluate_panels(const BatchFn& f, std::span<const std::pair<double, double>> spans) {
    const auto& unit = unit_nodes();
    std::vector<double> points;
    points.reserve(spans.size() * kKronrodPoints);
    for (const auto& [a, b] : spans) {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        for (std::size_t i = 0; i < kKronrodPoints; ++i) points.push_back(c + h * unit[i]);
    }
    const std::vector<double> values = f(points);
    std::vector<Panel> out;
    out.reserve(spans.size());
    for (std::size_t k = 0; k < spans.size(); ++k) {
        out.push_back(assemble_panel(spans[k].first, spans[k].second, values.data() + k * kKronrodPoints));
    }
    return out;
}

} // namespace detail

// Round-based adaptive integration: every panel whose error exceeds its share
// of the target is bisected, and all new nodes of a round go to `f` as one
// batch. The panel set depends only on the sampled values, so serial and
// parallel batch evaluators yield identical rules.
inline std::vector<Panel> adaptive_panels_batched(const BatchFn& f, std::span<const double> breaks, Tolerance tol,
                                                  std::size_t max_panels, Result* summary = nullptr) {
    std::vector<std::pair<double, double>> spans;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] > breaks[i]) spans.emplace_back(breaks[i], breaks[i + 1]);
    }
    std::vector<Panel> panels = detail::evaluate_panels(f, spans);
    std::size_t evals = panels.size() * kKronrodPoints;
    bool converged = false;
    for (;;) {
        double total = 0.0;
        double err = 0.0;
        for (const auto& p : panels) {
            total += p.value;
            err += p.error;
        }
        const double target = std::max(tol.abs, tol.rel * std::abs(total));
        if (err <= target) {
            converged = true;
            break;
        }
        const double share = target / static_cast<double>(panels.size());
        std::vector<Panel> keep;
        std::vector<std::pair<double, double>> split;
        for (const auto& p : panels) {
            const double mid = 0.5 * (p.a + p.b);
            const bool splittable = mid > p.a && mid < p.b &&
                                    (p.b - p.a) > 1e-14 * std::max(std::abs(p.a), std::abs(p.b));
            if (p.error > share && splittable) {
                split.emplace_back(p.a, mid);
                split.emplace_back(mid, p.b);
            } else {
                keep.push_back(p);
            }
        }
        if (split.empty() || keep.size() + split.size() > max_panels) break;
        auto fresh = detail::evaluate_panels(f, split);
        evals += fresh.size() * kKronrodPoints;
        keep.insert(keep.end(), fresh.begin(), fresh.end());
        std::sort(keep.begin(), keep.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
        panels = std::move(keep);
    }
    if (summary) {
        summary->value = 0.0;
        summary->error = 0.0;
        for (const auto& p : panels) {
            summary->value += p.value;
            summary->error += p.error;
        }
        summary->evaluations = evals;
        summary->converged = converged;
    }
    return panels;
}

// Splits every panel wider than max_width whose absolute mass exceeds
// mass_floor, so that cos(omega t) with t <= 10 / max_width stays resolved by
// the 21-point rule.
inline std::vector<Panel> split_wide_panels_batched(const BatchFn& f, std::vector<Panel> panels, double max_width,
                                                    double mass_floor) {
    std::vector<Panel> out;
    std::vector<std::pair<double, double>> spans;
    for (const auto& p : panels) {
        double mass = 0.0;
        const double h = 0.5 * (p.b - p.a);
        for (std::size_t i = 0; i < kKronrodPoints; ++i) mass += kronrod_weight(i) * std::abs(p.samples[i]);
        mass *= h;
        const double width = p.b - p.a;
        if (width <= max_width || mass <= mass_floor) {
            out.push_back(p);
            continue;
        }
        const auto pieces = static_cast<std::size_t>(std::ceil(width / max_width));
        for (std::size_t k = 0; k < pieces; ++k) {
            const double a = p.a + width * static_cast<double>(k) / static_cast<double>(pieces);
            const double b = (k + 1 == pieces) ? p.b
                                               : p.a + width * static_cast<double>(k + 1) / static_cast<double>(pieces);
            spans.emplace_back(a, b);
        }
    }
    auto fresh = detail::evaluate_panels(f, spans);
    out.insert(out.end(), fresh.begin(), fresh.end());
    std::sort(out.begin(), out.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    return out;
}

// Fixed rule assembled from the Kronrod nodes of a panel set.
struct NodeRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> values;  // integrand samples at the nodes

    std::size_t size() const { return nodes.size(); }
};

inline NodeRule node_rule(std::span<const Panel> panels) {
    NodeRule rule;
    rule.nodes.reserve(panels.size() * kKronrodPoints);
    rule.weights.reserve(panels.size() * kKronrodPoints);
    rule.values.reserve(panels.size() * kKronrodPoints);
    for (const auto& p : panels) {
        const double h = 0.5 * (p.b - p.a);
        for (std::size_t i = 0; i < kKronrodPoints; ++i) {
            rule.nodes.push_back(kronrod_node(p, i));
            rule.weights.push_back(h * kronrod_weight(i));
            rule.values.push_back(p.samples[i]);
        }
    }
    return rule;
}

} // namespace sbsim::quad

// cli.cpp: Argument parsing, per-command table assembly, exit-code mapping

#include "sbsim/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "sbsim/dynamics.hpp"
#include "sbsim/kernels.hpp"
#include "sbsim/response.hpp"
#include "sbsim/version.hpp"

namespace sbsim::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct HelpRequested {
    std::string text;
};

ValidationError config_error(const std::string& field, const std::string& message) {
    return ValidationError(ErrorKind::InvalidConfig, field, message);
}

const std::map<std::string, Command>& command_names() {
    static const std::map<std::string, Command> names = {
        {"spectrum", Command::Spectrum},           {"fidelity", Command::Fidelity},
        {"susceptibility", Command::Susceptibility}, {"correlation", Command::Correlation},
        {"qfactor", Command::QFactor},             {"phase-boundary", Command::PhaseBoundary},
        {"oracle-compare", Command::OracleCompare}, {"sweep", Command::Sweep},
    };
    return names;
}

const char* describe(Command c) {
    switch (c) {
    case Command::Spectrum: return "bare and modulated bath densities, rates and shifts vs omega";
    case Command::Fidelity: return "F(t) and P(t) of the qubit";
    case Command::Susceptibility: return "chi''(omega)";
    case Command::Correlation: return "symmetrized sigma_z correlation C(t)";
    case Command::QFactor: return "effective frequency, rate and quality factor";
    case Command::PhaseBoundary: return "critical alpha over a lambda grid";
    case Command::OracleCompare: return "analytic P(t) against exact propagation of a truncated model";
    case Command::Sweep: return "one observable along a lambda or alpha range";
    }
    return "";
}

// Values read from --config; any key outside these two structs is rejected.
struct ConfigDoc {
    ParamInput params;
    NumericsConfig numerics;
};

ConfigDoc read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("config", "cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::exception& e) {
        throw config_error("config", "malformed JSON in " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw config_error("config", "config document must be a JSON object");
    ConfigDoc out;
    auto num = [&](const std::string& key, const json& v) {
        if (!v.is_number()) throw config_error(key, key + " must be a number");
        return v.get<double>();
    };
    auto integer = [&](const std::string& key, const json& v) {
        if (!v.is_number_integer()) throw config_error(key, key + " must be an integer");
        return v.get<int>();
    };
    for (const auto& [key, v] : doc.items()) {
        if (key == "delta") out.params.delta = num(key, v);
        else if (key == "omega0") out.params.omega0 = num(key, v);
        else if (key == "lambda_") out.params.lambda_ = num(key, v);
        else if (key == "g0") out.params.g0 = num(key, v);
        else if (key == "alpha") out.params.alpha = num(key, v);
        else if (key == "omegac") out.params.omegac = num(key, v);
        else if (key == "poisson_tail_tol") out.numerics.poisson_tail_tol = num(key, v);
        else if (key == "pv_grid") out.numerics.pv_grid = integer(key, v);
        else if (key == "fixed_point_tol") out.numerics.fixed_point_tol = num(key, v);
        else if (key == "freq_window") out.numerics.freq_window = num(key, v);
        else if (key == "quad_rel_tol") out.numerics.quad_rel_tol = num(key, v);
        else if (key == "max_fixed_point_iters") out.numerics.max_fixed_point_iters = integer(key, v);
        else if (key == "alpha_ceiling") out.numerics.alpha_ceiling = num(key, v);
        else throw config_error(key, "unknown config key '" + key + "'");
    }
    return out;
}

double single_value(const std::string& text, const char* field) {
    const Range r = parse_range(text, field);
    if (r.count != 1) throw config_error(field, std::string(field) + " expects a single value here");
    return r.start;
}

json range_meta(const Range& r) { return {{"start", r.start}, {"stop", r.stop}, {"count", r.count}}; }

json truncation_meta(const oracle::TruncationSpec& t) {
    return {{"n_osc", t.n_osc},
            {"n_bath_modes", t.n_bath_modes},
            {"n_fock_per_mode", t.n_fock_per_mode},
            {"max_bath_excitations", t.max_bath_excitations},
            {"discretization", oracle::grid_name(t.discretization)},
            {"split", t.split},
            {"n_coarse_modes", t.n_coarse_modes},
            {"band", t.band},
            {"log_min", t.log_min},
            {"budget", t.budget}};
}

json run_meta(const RunConfig& c) {
    json m;
    m["tool_version"] = kVersion;
    m["command"] = to_string(c.command);
    m["unit"] = c.unit_delta ? "delta" : "omegac";
    m["params"] = {{"delta", c.params.delta}, {"omega0", c.params.omega0}, {"lambda_", c.params.lambda_},
                   {"alpha", c.params.alpha}, {"omegac", c.params.omegac}};
    const auto& n = c.numerics;
    m["numerics"] = {{"poisson_tail_tol", n.poisson_tail_tol}, {"pv_grid", n.pv_grid},
                     {"fixed_point_tol", n.fixed_point_tol}, {"freq_window", n.freq_window},
                     {"quad_rel_tol", n.quad_rel_tol}, {"max_fixed_point_iters", n.max_fixed_point_iters},
                     {"alpha_ceiling", n.alpha_ceiling}};
    return m;
}

void merge(json& into, const json& from) {
    for (const auto& [k, v] : from.items()) {
        if (!into.contains(k)) into[k] = v;
    }
}

// Independent cells evaluated in parallel; assembled by index.
template <class F>
std::vector<double> parallel_cells(const std::vector<double>& xs, F&& cell) {
    std::vector<double> out(xs.size(), kNaN);
    std::vector<std::exception_ptr> errors(xs.size());
    const auto n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = cell(xs[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

io::Table spectrum_table(const RunConfig& c) {
    auto k = build_kernels(c.params, c.numerics);
    const auto w = c.omegas.values();
    k.memoize(w);
    io::Table t;
    t.columns = {"omega", "G", "G_sb", "G_sa", "gamma", "R", "Gamma", "Sigma"};
    auto col = [&](const kernels::PointFn& f) { return kernels::evaluate_parallel(f, w); };
    const auto& p = k.params();
    t.data.push_back(w);
    t.data.push_back(col([&](double x) { return bare_bath_density(p, x); }));
    t.data.push_back(col([&](double x) { return effective_bath_density(k, x); }));
    t.data.push_back(col([&](double x) { return modulated_bath_density(k, x); }));
    t.data.push_back(col([&](double x) { return k.gamma(x); }));
    t.data.push_back(col([&](double x) { return k.r_shift(x); }));
    t.data.push_back(col([&](double x) { return k.big_gamma(x); }));
    t.data.push_back(col([&](double x) { return k.big_sigma(x); }));
    t.meta = kernel_metadata(k);
    t.meta["frequency_grid"] = range_meta(c.omegas);
    return t;
}

io::Table fidelity_table(const RunConfig& c) {
    const auto k = build_kernels(c.params, c.numerics);
    const auto ts = c.times.values();
    const TimeSeries pop = population(k, ts);
    io::Table t;
    t.columns = {"t", "F", "P"};
    std::vector<double> f(pop.values.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 0.5 * (1.0 + pop.values[i]);
    t.data = {ts, f, pop.values};
    t.meta = pop.meta;
    t.meta["time_grid"] = range_meta(c.times);
    return t;
}

io::Table susceptibility_table(const RunConfig& c) {
    const auto k = build_kernels(c.params, c.numerics);
    const auto w = c.omegas.values();
    const SpectrumSeries s = susceptibility(k, w);
    io::Table t;
    t.columns = {"omega", "chi"};
    t.data = {s.omegas, s.chi};
    t.meta = s.meta;
    t.meta["frequency_grid"] = range_meta(c.omegas);
    return t;
}

io::Table correlation_table(const RunConfig& c) {
    const auto k = build_kernels(c.params, c.numerics);
    const auto ts = c.times.values();
    const TimeSeries cs = correlation(k, ts);
    io::Table t;
    t.columns = {"t", "C"};
    t.data = {ts, cs.values};
    t.meta = cs.meta;
    if (c.with_population) {
        const TimeSeries pop = population(k, ts);
        t.columns.push_back("P");
        t.data.push_back(pop.values);
        t.meta["population"] = pop.meta;
    }
    t.meta["time_grid"] = range_meta(c.times);
    return t;
}

io::Table qfactor_table(const RunConfig& c) {
    const auto k = build_kernels(c.params, c.numerics);
    const auto w = omega_eff(k);
    const auto q = quality_factor(k);
    const double g = k.big_gamma(k.eta_delta());
    io::Table t;
    t.columns = {"lambda", "alpha", "omega_eff", "Gamma_eta_delta", "Q"};
    t.data = {{c.params.lambda_}, {c.params.alpha}, {w ? *w : kNaN}, {g}, {q ? *q : kNaN}};
    t.meta = kernel_metadata(k);
    t.meta["coherent"] = w.has_value();
    t.meta["pole_roots"] = pole_roots(k, omega_eff_search_limit(k));
    return t;
}

io::Table phase_boundary_table(const RunConfig& c) {
    const auto grid = c.lambdas.values();
    const PhaseBoundary pb = phase_boundary(c.params, grid, c.numerics);
    io::Table t;
    t.columns = {"lambda", "alpha_c"};
    std::vector<double> ac;
    json brackets = json::array();
    for (const auto& pt : pb.points) {
        ac.push_back(pt.alpha_c);
        brackets.push_back({pt.bracket_lo, pt.bracket_hi});
    }
    t.data = {grid, ac};
    t.meta["lambda_grid"] = range_meta(c.lambdas);
    t.meta["bracket_tolerance"] = pb.bracket_tolerance;
    t.meta["brackets"] = brackets;
    return t;
}

io::Table sweep_table(const RunConfig& c) {
    const auto xs = c.sweep_range.values();
    const bool over_lambda = c.sweep_axis == "lambda";
    auto at = [&](double x) {
        ModelParams p = c.params;
        (over_lambda ? p.lambda_ : p.alpha) = x;
        return p;
    };
    std::string column;
    std::vector<double> ys;
    if (c.observable == "qfactor") {
        column = "Q";
        ys = parallel_cells(xs, [&](double x) {
            const auto q = quality_factor(build_kernels(at(x), c.numerics));
            return q ? *q : kNaN;
        });
    } else if (c.observable == "omega_eff") {
        column = "omega_eff";
        ys = parallel_cells(xs, [&](double x) {
            const auto w = omega_eff(build_kernels(at(x), c.numerics));
            return w ? *w : kNaN;
        });
    } else if (c.observable == "eta") {
        column = "eta";
        ys = parallel_cells(xs, [&](double x) { return solve_eta(at(x), c.numerics).eta; });
    } else {  // alpha_c, validated to go with the lambda axis
        column = "alpha_c";
        ys = parallel_cells(xs, [&](double x) { return alpha_critical(c.params, x, c.numerics).alpha_c; });
    }
    io::Table t;
    t.columns = {c.sweep_axis, column};
    t.data = {xs, ys};
    t.meta["axis"] = c.sweep_axis;
    t.meta["range"] = range_meta(c.sweep_range);
    t.meta["observable"] = c.observable;
    return t;
}

io::Table oracle_table(const RunConfig& c, std::ostream& log) {
    const auto k = build_kernels(c.params, c.numerics);
    const auto ts = c.times.values();
    const TimeSeries analytic = population(k, ts);
    oracle::EdOptions opts = c.ed;
    opts.frame = c.frame;
    TimeSeries ed;
    if (c.check_convergence) {
        auto report = oracle::ed_dynamics_checked(c.params, c.truncation, ts, c.convergence_tolerance, opts);
        ed = std::move(report.base);
    } else {
        ed = oracle::ed_dynamics(c.params, c.truncation, ts, opts);
    }
    io::Table t;
    t.columns = {"t", "P_analytic", "P_ed", "absdiff"};
    std::vector<double> diff(ts.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        diff[i] = std::abs(analytic.values[i] - ed.values[i]);
        worst = std::max(worst, diff[i]);
    }
    t.data = {ts, analytic.values, ed.values, diff};
    t.meta = analytic.meta;
    t.meta["ed"] = ed.meta;
    t.meta["max_absdiff"] = worst;
    t.meta["tolerance"] = c.compare_tolerance;
    t.meta["pass"] = worst <= c.compare_tolerance;
    log << "oracle-compare " << (worst <= c.compare_tolerance ? "PASS" : "FAIL") << " max_absdiff="
        << io::format_number(worst) << " tolerance=" << c.compare_tolerance << "\n";
    return t;
}

} // namespace

const char* to_string(Command c) {
    for (const auto& [name, cmd] : command_names()) {
        if (cmd == c) return name.c_str();
    }
    return "unknown";
}

std::vector<double> Range::values() const {
    std::vector<double> out;
    if (count == 1) return {start};
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(i == count - 1 ? stop : start + (stop - start) * i / (count - 1));
    }
    return out;
}

Range parse_range(const std::string& text, const char* field) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ':')) parts.push_back(piece);
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v)) {
            throw config_error(field, std::string(field) + ": cannot parse '" + text + "' as start:stop:count");
        }
        return v;
    };
    Range r;
    if (parts.size() == 1) {
        r.start = r.stop = number(parts[0]);
        return r;
    }
    if (parts.size() != 3) throw config_error(field, std::string(field) + ": expected start:stop:count, got '" + text + "'");
    r.start = number(parts[0]);
    r.stop = number(parts[1]);
    const double n = number(parts[2]);
    if (n < 1 || n != std::floor(n) || n > 1e7) throw config_error(field, std::string(field) + ": count must be a positive integer");
    r.count = static_cast<int>(n);
    if (r.count == 1 && r.start != r.stop) throw config_error(field, std::string(field) + ": a one-point range needs start == stop");
    if (r.count > 1 && !(r.stop > r.start)) throw config_error(field, std::string(field) + ": range must be strictly increasing");
    return r;
}

RunConfig parse_args(int argc, const char* const* argv) {
    CLI::App app{"Qubit + control oscillator + Ohmic bath: spectra, dynamics, response", "sbsim"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1, 1);

    std::optional<std::string> config_path, lambda_text;
    std::optional<double> delta, omega0, g0, alpha, omegac;
    std::optional<double> poisson_tail_tol, fixed_point_tol, freq_window, quad_rel_tol, alpha_ceiling;
    std::optional<int> pv_grid, max_iters;
    std::optional<std::string> unit, out_path, format, t_range, omega_range;

    app.add_option("--config", config_path, "JSON document with ModelParams / NumericsConfig fields");
    app.add_option("--delta", delta, "tunneling splitting");
    app.add_option("--omega0", omega0, "oscillator frequency");
    app.add_option("--lambda", lambda_text, "oscillator coupling (g0/omega0)^2; a range for phase-boundary");
    app.add_option("--g0", g0, "oscillator coupling g0 (alternative to --lambda)");
    app.add_option("--alpha", alpha, "Ohmic coupling");
    app.add_option("--omegac", omegac, "bath cutoff");
    app.add_option("--poisson-tail-tol", poisson_tail_tol);
    app.add_option("--pv-grid", pv_grid);
    app.add_option("--fixed-point-tol", fixed_point_tol);
    app.add_option("--freq-window", freq_window);
    app.add_option("--quad-rel-tol", quad_rel_tol);
    app.add_option("--max-fixed-point-iters", max_iters);
    app.add_option("--alpha-ceiling", alpha_ceiling);
    app.add_option("--unit", unit, "omegac (default) or delta: frequencies in units of delta, delta = 1");
    app.add_option("--out,-o", out_path, "output file; stdout when omitted");
    app.add_option("--format", format, "csv (default) or json");
    app.add_option("--t", t_range, "time grid start:stop:count");
    app.add_option("--omega", omega_range, "frequency grid start:stop:count");

    app.fallthrough();  // shared options may follow the subcommand
    std::vector<CLI::App*> subs;
    for (const auto& [name, cmd] : command_names()) subs.push_back(app.add_subcommand(name, describe(cmd)));

    auto* corr = app.get_subcommand("correlation");
    bool with_p = false;
    corr->add_flag("--with-population", with_p, "add the P(t) column");

    auto* sweep = app.get_subcommand("sweep");
    std::vector<std::string> axis;
    std::string observable = "qfactor";
    sweep->add_option("--axis", axis, "axis name (lambda or alpha) and range")->expected(2)->required();
    sweep->add_option("--observable", observable, "qfactor, omega_eff, eta or alpha_c");

    auto* orc = app.get_subcommand("oracle-compare");
    RunConfig cfg;
    std::string bath_grid = "linear", frame = "polaron";
    orc->add_option("--n-osc", cfg.truncation.n_osc);
    orc->add_option("--n-bath-modes", cfg.truncation.n_bath_modes);
    orc->add_option("--n-fock", cfg.truncation.n_fock_per_mode);
    orc->add_option("--max-bath-excitations", cfg.truncation.max_bath_excitations);
    orc->add_option("--bath-grid", bath_grid, "linear, log or two-scale");
    orc->add_option("--split", cfg.truncation.split, "two-scale boundary");
    orc->add_option("--n-coarse", cfg.truncation.n_coarse_modes, "two-scale modes above the boundary");
    orc->add_option("--krylov-dim", cfg.ed.krylov_dim);
    orc->add_option("--step-tol", cfg.ed.step_tol);
    orc->add_option("--band", cfg.truncation.band);
    orc->add_option("--log-min", cfg.truncation.log_min);
    orc->add_option("--budget", cfg.truncation.budget);
    orc->add_option("--frame", frame, "polaron (default) or lab");
    orc->add_option("--tolerance", cfg.compare_tolerance);
    orc->add_option("--convergence-tolerance", cfg.convergence_tolerance);
    orc->add_flag("--check-convergence", cfg.check_convergence);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::CallForVersion&) {
        throw HelpRequested{std::string(kVersion) + "\n"};
    } catch (const CLI::ParseError& e) {
        throw config_error("arguments", e.what());
    }

    for (auto* s : subs) {
        if (s->parsed()) cfg.command = command_names().at(s->get_name());
    }

    ConfigDoc doc;
    if (config_path) doc = read_config(*config_path);
    ParamInput in = doc.params;
    if (delta) in.delta = *delta;
    if (omega0) in.omega0 = *omega0;
    if (alpha) in.alpha = *alpha;
    if (omegac) in.omegac = *omegac;
    if (lambda_text && g0) throw config_error("g0", "give either --lambda or --g0, not both");
    if (lambda_text) {
        const Range r = parse_range(*lambda_text, "lambda");
        if (cfg.command == Command::PhaseBoundary) {
            cfg.lambdas = r;
            in.lambda_ = r.start;
        } else {
            in.lambda_ = single_value(*lambda_text, "lambda");
        }
        in.g0.reset();
    }
    if (g0) {
        in.g0 = *g0;
        in.lambda_.reset();
    }
    if (unit) {
        if (*unit == "delta") {
            if (delta && *delta != 1.0) throw config_error("delta", "--unit delta fixes delta = 1");
            cfg.unit_delta = true;
            in.delta = 1.0;
        } else if (*unit != "omegac") {
            throw config_error("unit", "unit must be omegac or delta");
        }
    }
    cfg.params = validate(in);
    if (cfg.command == Command::PhaseBoundary && !lambda_text) cfg.lambdas = {cfg.params.lambda_, cfg.params.lambda_, 1};

    NumericsConfig n = doc.numerics;
    if (poisson_tail_tol) n.poisson_tail_tol = *poisson_tail_tol;
    if (pv_grid) n.pv_grid = *pv_grid;
    if (fixed_point_tol) n.fixed_point_tol = *fixed_point_tol;
    if (freq_window) n.freq_window = *freq_window;
    if (quad_rel_tol) n.quad_rel_tol = *quad_rel_tol;
    if (max_iters) n.max_fixed_point_iters = *max_iters;
    if (alpha_ceiling) n.alpha_ceiling = *alpha_ceiling;
    cfg.numerics = validate(n);

    if (t_range) cfg.times = parse_range(*t_range, "t");
    if (omega_range) cfg.omegas = parse_range(*omega_range, "omega");
    cfg.output = out_path;
    if (format) {
        if (*format == "csv") cfg.format = io::Format::Csv;
        else if (*format == "json") cfg.format = io::Format::Json;
        else throw config_error("format", "format must be csv or json");
    }
    cfg.with_population = with_p;

    if (cfg.command == Command::Sweep) {
        cfg.sweep_axis = axis.at(0);
        if (cfg.sweep_axis != "lambda" && cfg.sweep_axis != "alpha") {
            throw config_error("axis", "sweep axis must be lambda or alpha");
        }
        cfg.sweep_range = parse_range(axis.at(1), "axis");
        if (cfg.sweep_axis == "lambda" && cfg.sweep_range.start < 0.0) {
            throw ValidationError(ErrorKind::NegativeCoupling, "lambda_", "lambda_ sweep must stay >= 0");
        }
        if (cfg.sweep_axis == "alpha" && cfg.sweep_range.start < 0.0) {
            throw ValidationError(ErrorKind::NegativeCoupling, "alpha", "alpha sweep must stay >= 0");
        }
        cfg.observable = observable;
        if (observable != "qfactor" && observable != "omega_eff" && observable != "eta" && observable != "alpha_c") {
            throw config_error("observable", "observable must be qfactor, omega_eff, eta or alpha_c");
        }
        if (observable == "alpha_c" && cfg.sweep_axis != "lambda") {
            throw config_error("observable", "alpha_c can only be swept along lambda");
        }
    }
    if (cfg.command == Command::PhaseBoundary && cfg.lambdas.start < 0.0) {
        throw ValidationError(ErrorKind::NegativeCoupling, "lambda_", "lambda_ grid must stay >= 0");
    }
    if (cfg.command == Command::OracleCompare) {
        if (bath_grid == "linear") cfg.truncation.discretization = oracle::BathGrid::Linear;
        else if (bath_grid == "log") cfg.truncation.discretization = oracle::BathGrid::Logarithmic;
        else if (bath_grid == "two-scale") cfg.truncation.discretization = oracle::BathGrid::TwoScale;
        else throw config_error("bath-grid", "bath grid must be linear, log or two-scale");
        if (frame == "polaron") cfg.frame = oracle::Frame::Polaron;
        else if (frame == "lab") cfg.frame = oracle::Frame::Lab;
        else throw config_error("frame", "frame must be polaron or lab");
        if (cfg.truncation.dimension() > cfg.truncation.budget) {
            throw ValidationError(ErrorKind::TruncationTooLarge, "truncation",
                                  "truncated dimension " + std::to_string(cfg.truncation.dimension()) +
                                      " exceeds budget " + std::to_string(cfg.truncation.budget));
        }
    }
    if (cfg.command == Command::Susceptibility && cfg.omegas.start < 0.0) {
        throw ValidationError(ErrorKind::NegativeFrequencyRequest, "omega", "chi'' is defined for omega >= 0 only");
    }
    return cfg;
}

io::Table compute(const RunConfig& c, std::ostream& log) {
    io::Table t;
    switch (c.command) {
    case Command::Spectrum: t = spectrum_table(c); break;
    case Command::Fidelity: t = fidelity_table(c); break;
    case Command::Susceptibility: t = susceptibility_table(c); break;
    case Command::Correlation: t = correlation_table(c); break;
    case Command::QFactor: t = qfactor_table(c); break;
    case Command::PhaseBoundary: t = phase_boundary_table(c); break;
    case Command::OracleCompare: t = oracle_table(c, log); break;
    case Command::Sweep: t = sweep_table(c); break;
    }
    // Run-level fields go first so every file is reproducible from its metadata alone.
    json meta = run_meta(c);
    if (c.command == Command::OracleCompare) meta["truncation"] = truncation_meta(c.truncation);
    merge(meta, t.meta);
    t.meta = std::move(meta);
    return t;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    kernels::apply_thread_limit();
    try {
        const RunConfig cfg = parse_args(argc, argv);
        std::ostringstream log;
        const io::Table table = compute(cfg, log);
        if (cfg.output) {
            io::emit(table, cfg.format, *cfg.output);
        } else {
            out << (cfg.format == io::Format::Csv ? io::to_csv(table) : io::to_json(table).dump(2) + "\n");
        }
        out << log.str();
        if (cfg.command == Command::OracleCompare && !table.meta.value("pass", false)) return 1;
        return 0;
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const ValidationError& e) {
        err << "error: invalid " << e.field() << " (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "error: numerical failure in module " << e.field() << " (" << to_string(e.kind()) << "): " << e.what()
            << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace sbsim::cli

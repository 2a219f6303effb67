#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sbsim/cli.hpp"

using namespace sbsim;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "sbsim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "sbsim_cli_tests";
    fs::create_directories(dir);
    const auto p = dir / name;
    fs::remove(p);
    fs::remove(io::sidecar_path(p));
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty() || line.find(',') == std::string::npos) break;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST_CASE("range parsing") {
    const auto r = cli::parse_range("0:2:5", "t");
    CHECK(r.values() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    CHECK(cli::parse_range("0.25", "t").values() == std::vector<double>{0.25});
    for (const char* bad : {"0:1:0", "1:0:3", "0:1", "a:b:c", "0:1:2:3", "1:2:1", ""}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(cli::parse_range(bad, "t"), ValidationError);
    }
}

TEST_CASE("malformed input exits with 2 and writes nothing") {
    const auto cfg = scratch("broken.json");
    std::ofstream(cfg) << "{\"alpha\": 0.1,";
    const auto out = scratch("never.csv");
    auto r = run({"--config", cfg.string(), "qfactor", "-o", out.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("InvalidConfig") != std::string::npos);
    CHECK_FALSE(fs::exists(out));

    std::ofstream(cfg, std::ios::trunc) << R"({"alpha": 0.1, "temperature": 0.0})";
    r = run({"--config", cfg.string(), "qfactor", "-o", out.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("temperature") != std::string::npos);
    CHECK_FALSE(fs::exists(out));

    r = run({"qfactor", "--delta", "-0.1", "-o", out.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("delta") != std::string::npos);
    CHECK_FALSE(fs::exists(out));

    CHECK(run({"qfactor", "--lambda", "1", "--g0", "0.5"}).code == 2);
    CHECK(run({"sweep", "--axis", "omega0", "0:1:3"}).code == 2);
    CHECK(run({"fidelity", "--format", "xml"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
}

TEST_CASE("numerical failures exit with 3 and name the module") {
    const auto r = run({"fidelity", "--max-fixed-point-iters", "1", "--t", "0:1:2"});
    CHECK(r.code == 3);
    CHECK(r.err.find("renorm") != std::string::npos);
    CHECK(r.err.find("NoConvergence") != std::string::npos);
}

TEST_CASE("help and version") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"--version"}).code == 0);
}

TEST_CASE("quality factor sweep along lambda") {
    const auto r = run({"sweep", "--axis", "lambda", "0:2:9", "--observable", "qfactor", "--delta", "0.01"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("lambda,Q\n", 0) == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 9);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][0] > rows[i - 1][0]);
        CHECK(rows[i][1] >= rows[i - 1][1]);
    }
}

TEST_CASE("phase boundary of the bare model") {
    const auto r = run({"phase-boundary", "--lambda", "0", "--delta", "0.01"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][1] == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("output files, sidecars and json round trip") {
    const auto csv = scratch("p.csv");
    auto r = run({"fidelity", "--t", "0:10:6", "-o", csv.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const std::string body = slurp(csv);
    CHECK(body.rfind("t,F,P\n", 0) == 0);
    CHECK(csv_rows(body).size() == 6);
    const auto side = json::parse(slurp(io::sidecar_path(csv)));
    CHECK(side["command"] == "fidelity");
    CHECK(side["params"]["alpha"] == 0.1);
    CHECK(side.contains("numerics"));

    const auto js = scratch("p.json");
    REQUIRE(run({"fidelity", "--t", "0:10:6", "--format", "json", "-o", js.string()}).code == 0);
    const auto doc = json::parse(slurp(js));
    const auto table = io::table_from_json(doc);
    CHECK(table.rows() == 6);
    CHECK(io::to_json(table) == doc);
    CHECK(io::to_csv(table) == body);
}

TEST_CASE("empty tables serialize to a header") {
    io::Table t;
    t.columns = {"t", "P"};
    t.data = {{}, {}};
    CHECK(io::to_csv(t) == "t,P\n");
    CHECK(io::table_from_json(io::to_json(t)).rows() == 0);
}

TEST_CASE("repeated runs are byte identical") {
    const auto a = scratch("a.csv");
    const auto b = scratch("b.csv");
    const std::vector<std::string> args{"correlation", "--lambda", "1", "--t", "0:50:26", "--with-population"};
    auto with_out = [&](const fs::path& p) {
        auto v = args;
        v.push_back("-o");
        v.push_back(p.string());
        return run(v);
    };
    REQUIRE(with_out(a).code == 0);
    REQUIRE(with_out(b).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(io::sidecar_path(a)) == slurp(io::sidecar_path(b)));
    CHECK(slurp(a).rfind("t,C,P\n", 0) == 0);
}

TEST_CASE("flags override the config document") {
    const auto cfg = scratch("c.json");
    std::ofstream(cfg) << R"({"alpha": 0.2, "delta": 0.05, "lambda_": 0.5})";
    const std::string path = cfg.string();
    const char* argv[] = {"sbsim", "--config", path.c_str(), "qfactor", "--alpha", "0.3"};
    const auto cfgd = cli::parse_args(6, argv);
    CHECK(cfgd.params.alpha == 0.3);
    CHECK(cfgd.params.delta == 0.05);
    CHECK(cfgd.params.lambda_ == 0.5);
    CHECK(cfgd.command == cli::Command::QFactor);
}

TEST_CASE("delta units") {
    const char* argv[] = {"sbsim", "--unit", "delta", "--omegac", "100", "--omega0", "5", "qfactor"};
    const auto cfg = cli::parse_args(8, argv);
    CHECK(cfg.unit_delta);
    CHECK(cfg.params.delta == 1.0);
    CHECK(cfg.params.omegac == 100.0);
    const auto r = run({"--unit", "delta", "--omegac", "100", "--omega0", "50", "--format", "json", "qfactor"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out.substr(0, r.out.rfind('}') + 1));
    CHECK(doc["metadata"]["unit"] == "delta");
    const auto ref = run({"--delta", "0.01", "--omega0", "0.5", "--format", "json", "qfactor"});
    const auto ref_doc = json::parse(ref.out.substr(0, ref.out.rfind('}') + 1));
    CHECK(doc["columns"]["Q"][0].get<double>() ==
          doctest::Approx(ref_doc["columns"]["Q"][0].get<double>()).epsilon(1e-6));
}

TEST_CASE("oracle comparison reports its verdict") {
    const auto out = scratch("o.csv");
    const auto r = run({"oracle-compare", "--alpha", "0", "--lambda", "0.5", "--t", "0:60:7", "--n-osc", "12",
                        "--n-bath-modes", "1", "--n-fock", "1", "-o", out.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("oracle-compare PASS") != std::string::npos);
    CHECK(slurp(out).rfind("t,P_analytic,P_ed,absdiff\n", 0) == 0);
    const auto side = json::parse(slurp(io::sidecar_path(out)));
    CHECK(side["pass"] == true);
    CHECK(side["max_absdiff"].get<double>() < 1e-9);

    const auto fail = run({"oracle-compare", "--alpha", "0.1", "--lambda", "0.5", "--t", "0:60:7", "--n-osc", "3",
                           "--n-bath-modes", "2", "--n-fock", "2", "--tolerance", "1e-6"});
    CHECK(fail.code == 1);
    CHECK(fail.out.find("oracle-compare FAIL") != std::string::npos);
}

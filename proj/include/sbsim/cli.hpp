// cli.hpp: Command-line driver: configuration, subcommands, sweeps

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbsim/io.hpp"
#include "sbsim/model.hpp"
#include "sbsim/oracle.hpp"

namespace sbsim::cli {

enum class Command { Spectrum, Fidelity, Susceptibility, Correlation, QFactor, PhaseBoundary, OracleCompare, Sweep };

const char* to_string(Command c);

// start:stop:count with inclusive endpoints; a bare number is a one-point range.
struct Range {
    double start{0.0};
    double stop{0.0};
    int count{1};

    std::vector<double> values() const;
};

Range parse_range(const std::string& text, const char* field);

struct RunConfig {
    Command command{Command::Fidelity};
    ModelParams params;
    NumericsConfig numerics;
    bool unit_delta{false};

    Range times{0.0, 100.0, 201};
    Range omegas{0.0, 2.0, 401};
    Range lambdas{0.0, 0.0, 1};  // phase-boundary grid
    std::string sweep_axis{"lambda"};
    Range sweep_range{0.0, 0.0, 1};
    std::string observable{"qfactor"};
    bool with_population{false};  // correlation: add a P column

    oracle::TruncationSpec truncation;
    oracle::Frame frame{oracle::Frame::Polaron};
    oracle::EdOptions ed;
    double compare_tolerance{0.05};
    double convergence_tolerance{0.01};
    bool check_convergence{false};

    std::optional<std::string> output;  // stdout when absent
    io::Format format{io::Format::Csv};
};

// Parses argv into a validated RunConfig. Throws ValidationError; unknown
// config keys, malformed JSON and bad flags all map to InvalidConfig.
RunConfig parse_args(int argc, const char* const* argv);

// Computes the table for a config without writing anything.
io::Table compute(const RunConfig& config, std::ostream& log);

// Full driver: exit 0 on success, 1 when oracle-compare fails its tolerance,
// 2 on validation errors, 3 on numerical non-convergence.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sbsim::cli

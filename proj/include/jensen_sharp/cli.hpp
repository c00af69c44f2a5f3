#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jsharp::cli {

enum class Command { Bound, SampleBound, Partition, PowerMean, Oracle, Paper };
enum class OutputFormat { Text, Json };

struct PartitionArgs {
    std::optional<int> cells;  // equal-probability cells
    std::vector<double> cuts;  // explicit interior cuts
    friend bool operator==(const PartitionArgs&, const PartitionArgs&) = default;
};

struct OracleArgs {
    enum class Kind { None, Quadrature, MonteCarlo };
    Kind kind = Kind::None;
    long samples = 1'000'000;
    std::optional<std::uint64_t> seed;  // falls back to RunConfig::seed
    friend bool operator==(const OracleArgs&, const OracleArgs&) = default;
};

struct RunConfig {
    Command command = Command::Bound;
    std::string function_spec_text;
    std::string distribution_text;
    PartitionArgs partition_args;
    OracleArgs oracle_args;
    OutputFormat output_format = OutputFormat::Text;
    std::uint64_t seed = 42;
    double r = 1.0;  // power-mean exponents
    double s = -1.0;
    std::string data_path;  // paper: seeded sample file
    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Exit statuses: 0 success, 1 a verification check failed, 2 usage or parse
/// error, 3 numeric failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Parses "--oracle" values: "quad", "none", "mc", "mc:n=1000000,seed=42".
OracleArgs parse_oracle(const std::string& text);
std::string format_oracle(const OracleArgs& args);

/// Parses argv (without the program name). The default seed comes from
/// JENSEN_SHARP_SEED when set. Throws ParseError on bad input.
RunConfig parse_args(const std::vector<std::string>& args);

/// Inverse of parse_args.
std::vector<std::string> format_args(const RunConfig& config);

/// Executes the command, writing the report to `out` and diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Runs the bundled regression targets and prints the comparison table.
int paper_report(const RunConfig& config, std::ostream& out);

/// argv entry point: parse + run with exit-status mapping.
int main(int argc, char** argv);

}  // namespace jsharp::cli

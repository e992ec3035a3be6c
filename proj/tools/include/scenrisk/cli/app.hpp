#pragma once

#include "scenrisk/cli/report.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace scenrisk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUndefined = 2;

const std::vector<std::string>& command_names();

struct RunConfig {
    std::string command;
    std::filesystem::path tree;
    std::vector<std::filesystem::path> processes;
    std::vector<std::filesystem::path> measures;
    std::filesystem::path spec;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::vector<int> depths;
    std::vector<double> k_grid;
    std::string family;
    std::optional<std::size_t> samples;
    double tol = 1e-9;
    std::optional<std::uint64_t> seed;
    std::filesystem::path out;
    Format format = Format::Table;
};

/// "1..10" or "1,2,5"; throws ValidationError.
std::vector<int> parse_depths(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);

/// Fills `config` from argv. Returns an exit code when the program should
/// stop (help requested or bad arguments), nothing when it should run.
std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                              std::ostream& err);

/// Runs one command and writes the report to `out` (or config.out).
/// Diagnostics go to `err`. Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace scenrisk::cli

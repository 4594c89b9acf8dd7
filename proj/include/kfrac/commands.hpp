#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kfrac/config.hpp"
#include "kfrac/report.hpp"

namespace kfrac {

struct RunOptions {
    std::optional<std::filesystem::path> out_dir;  // no files when empty
    std::optional<int> levels;                     // overrides study.levels
    std::uint64_t seed = 42;
};

// Runs one subcommand and returns its report without writing anything.
Report run_command(const std::string& sub, const Config& cfg, const RunOptions& opt);

// Runs sub (or every subcommand for "all"), writes reports, prints summaries.
// Returns 0 when every verdict passes and 1 otherwise.
int run(const std::string& sub, const Config& cfg, const RunOptions& opt, std::ostream& log);

}  // namespace kfrac

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fbplab/config.hpp"

namespace fbp {

/// Output root: $FBPLAB_OUT if set, otherwise ./out.
std::filesystem::path default_output_root();

struct VerdictEntry {
    std::string check;
    std::string anchor;  // property the check exercises
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct RunOutcome {
    std::filesystem::path directory;
    std::vector<VerdictEntry> verdict;
    bool pass() const;
};

/// Validates the config, runs its pipeline, writes CSV/JSON artifacts plus
/// verdict.json and config.json into out_root/<output_dir or subcommand>.
RunOutcome run(const ExperimentConfig& cfg, const std::filesystem::path& out_root, std::ostream& log);

/// Exit status convention of the tool: 0 iff every requested check passed.
int exit_code(const RunOutcome& outcome);

}  // namespace fbp

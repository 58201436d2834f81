#pragma once

// The twelve acceptance experiments with pinned tolerances. Each returns a
// self-describing result; nothing is relaxed when a measurement misses.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fbp::acceptance {

struct Check {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string anchor;  // property being exercised
    std::vector<Check> checks;
    double seconds = 0.0;
    std::string note;
    bool pass() const;
    /// One line: "[PASS] 03 brunet-derrida-identity  worst ... (1.2 s)".
    std::string summary() const;
};

inline constexpr int kCriteria = 12;

/// Runs criterion `id` (1..12). Artifacts go to `out_dir` when given.
CriterionResult run_criterion(int id, const std::optional<std::filesystem::path>& out_dir = std::nullopt);

std::vector<CriterionResult> run_all(const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                                     const std::function<void(const CriterionResult&)>& on_done = {});

}  // namespace fbp::acceptance

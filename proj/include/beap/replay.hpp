#pragma once

#include <string>
#include <vector>

#include "beap/jsonl.hpp"
#include "beap/world.hpp"

namespace beap {

// Outcome of re-executing a logged episode against its world.
struct ReplayReport {
    bool clean = false;
    // 1-based line of the first inconsistent row, 0 when clean.
    int divergence_line = 0;
    std::string detail;
};

// Re-executes every logged transition in a fresh environment and checks that
// the recorded state identities are reproduced. Throws ReplayWorldMismatch if
// the log was produced against a different world.
ReplayReport replay_log(const std::vector<LogRow>& rows, const WorldSpec& world);
ReplayReport replay_log_file(const std::string& log_path, const WorldSpec& world);

}  // namespace beap

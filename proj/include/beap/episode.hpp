#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "beap/env.hpp"
#include "beap/plan.hpp"
#include "beap/policy.hpp"
#include "beap/status.hpp"
#include "beap/trajectory.hpp"

namespace beap {

struct AblationFlags {
    bool enable_backtrack = true;
    bool enable_tracker = true;
    // Fig. 1 style baseline: always return to the immediate parent instead of
    // the nearest ancestor with unexplored actions.
    bool single_step_backtrack = false;
};

struct EpisodeConfig {
    int max_steps = 50;
    int max_backtrack_retries = 3;
    int snapshot_window = 10;
    AblationFlags ablation;
    uint64_t seed = 0;
};

// One JSONL line. Field order in the serialized form is fixed:
// episode_id, step, mode, state_from, action, state_to, exec_status,
// back_status, plan_revision; absent values are null.
struct LogRow {
    std::string episode_id;
    int step = 0;
    std::string mode;
    std::optional<std::string> state_from;
    std::optional<nlohmann::ordered_json> action;
    std::optional<std::string> state_to;
    std::optional<std::string> exec_status;
    std::optional<std::string> back_status;
    int plan_revision = 0;

    friend bool operator==(const LogRow&, const LogRow&) = default;
};

struct EpisodeResult {
    Outcome outcome = Outcome::Fail;
    int steps_used = 0;
    int backtrack_attempts = 0;
    int backtrack_successes = 0;
    int backtrack_steps_total = 0;
    Trajectory trajectory;
    Plan final_plan;
    std::vector<LogRow> log;
    std::string diagnostic;
    int monotonicity_rejections = 0;
};

// Runs the plan / act / track / backtrack pipeline until DONE, FAIL, search
// exhaustion, or the step budget. Policy failures mark the episode FAIL with a
// diagnostic instead of propagating.
EpisodeResult run_episode(Environment& env, const Policies& policies, const TaskSpec& task,
                          const EpisodeConfig& config, const std::string& episode_id);

}  // namespace beap

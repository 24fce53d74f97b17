#pragma once

#include <cstdint>
#include <map>
#include <random>

#include "beap/policy.hpp"
#include "beap/world.hpp"

namespace beap {

// Knobs that emulate an imperfect model-driven agent: `knowledge` reveals only a
// fraction of the true solution path to the planner, `wrong_branch_bias` pulls
// the executor toward marked decoy edges, and `detection_depth` delays the
// tracker's dead-branch signal by k steps (sparse reward).
struct ScriptedPolicyParams {
    double knowledge = 1.0;
    double wrong_branch_bias = 0.0;
    int detection_depth = 1;
    uint64_t seed = 0;
};

void validate_params(const ScriptedPolicyParams& p);

// Subtask text conventions shared by the scripted policies:
//   "<action key> @ <page>"  concrete step
//   "pending: ..."           beyond the plan horizon, resolved later by the tracker
//   "explore: ..."           no goal route known; descend unexplored branches
struct SubtaskRef {
    enum class Kind { Concrete, Pending, Explore };
    Kind kind = Kind::Concrete;
    std::string action_key;
    std::string page;
};
SubtaskRef parse_subtask(const std::string& text);
std::string concrete_subtask(const std::string& action_key, const std::string& page);

class ScriptedPlanner : public Planner {
public:
    ScriptedPlanner(const WorldSpec& world, ScriptedPolicyParams params, bool respect_horizon);
    Plan plan(const PolicyContext& ctx, const TaskSpec& task) override;

private:
    const WorldSpec& world_;
    ScriptedPolicyParams params_;
    bool respect_horizon_;
};

class ScriptedExecutor : public Executor {
public:
    ScriptedExecutor(const WorldSpec& world, ScriptedPolicyParams params);
    ActionSpec act(const PolicyContext& ctx, const TaskSpec& task) override;

private:
    const WorldSpec& world_;
    ScriptedPolicyParams params_;
    std::mt19937_64 rng_;
};

class ScriptedTracker : public Tracker {
public:
    ScriptedTracker(const WorldSpec& world, ScriptedPolicyParams params);
    std::pair<Plan, ExecStatus> track(const PolicyContext& ctx, const TaskSpec& task) override;

private:
    bool viable(const PolicyContext& ctx, const StateFingerprint& s);

    const WorldSpec& world_;
    ScriptedPolicyParams params_;
    std::map<std::pair<std::string, size_t>, bool> viability_cache_;
};

// Blocked (page|action) edge keys implied by the failure ledger.
std::set<std::string> blocked_page_edges(const SearchTree& tree, const FailureLedger& ledger);

// Scripted policies with the given knobs. The world reference must outlive them.
Policies make_scripted_policies(const WorldSpec& world, const ScriptedPolicyParams& params);

}  // namespace beap

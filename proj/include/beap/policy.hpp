#pragma once

#include <memory>
#include <string>
#include <vector>

#include "beap/fingerprint.hpp"
#include "beap/ledger.hpp"
#include "beap/plan.hpp"
#include "beap/status.hpp"
#include "beap/trajectory.hpp"
#include "beap/tree.hpp"
#include "beap/world.hpp"

namespace beap {

// The task handed to the agent.
struct TaskSpec {
    std::string instruction;
    GoalSpec goal;
};

// Everything a policy may look at when called: current node s, its observation,
// the search tree, the failure ledger F, the history H, the accepted plan P,
// and the declared action set of the current page.
struct PolicyContext {
    StateFingerprint state;
    Observation obs;
    const SearchTree* tree = nullptr;
    const FailureLedger* ledger = nullptr;
    const Trajectory* history = nullptr;
    const Plan* plan = nullptr;
    std::vector<ActionSpec> available;
};

// What the executor proposes while recovering: undo the newest step, or ask the
// orchestrator to restore a checkpoint at the target.
struct BacktrackAction {
    enum class Kind { InverseStep, RestoreCheckpoint };
    Kind kind = Kind::InverseStep;
    ActionSpec inverse;
};

class Planner {
public:
    virtual ~Planner() = default;
    virtual Plan plan(const PolicyContext& ctx, const TaskSpec& task) = 0;
};

class Executor {
public:
    virtual ~Executor() = default;
    virtual ActionSpec act(const PolicyContext& ctx, const TaskSpec& task) = 0;

    // `edge` is the next edge to undo (upward); `traj_index` is the trajectory
    // index of the step that created it. Default: propose the inverse action.
    virtual BacktrackAction backtrack_act(const PolicyContext& ctx, const TransitionEdge& edge,
                                          int traj_index);
};

class Tracker {
public:
    virtual ~Tracker() = default;
    virtual std::pair<Plan, ExecStatus> track(const PolicyContext& ctx, const TaskSpec& task) = 0;

    // Backtrack mode: did the environment really return to `target`? Default
    // compares the live observation digest with the target node's.
    virtual BackStatus verify_backtrack(const PolicyContext& ctx, const StateFingerprint& target);
};

struct Policies {
    std::shared_ptr<Planner> planner;
    std::shared_ptr<Executor> executor;
    std::shared_ptr<Tracker> tracker;
};

}  // namespace beap

#include "beap/episode.hpp"

#include <algorithm>
#include <deque>

#include "beap/dfs.hpp"
#include "beap/errors.hpp"
#include "beap/ledger.hpp"
#include "beap/tree.hpp"

namespace beap {

namespace {

nlohmann::ordered_json restore_marker() {
    nlohmann::ordered_json j;
    j["kind"] = "restore";
    return j;
}

// Sliding-window stack of environment checkpoints, newest last.
class SnapshotStack {
public:
    explicit SnapshotStack(size_t capacity) : capacity_(capacity) {}

    void push(const StateFingerprint& state, uint64_t token, int step_index) {
        entries_.push_back({state, token, step_index});
        if (entries_.size() > capacity_) entries_.pop_front();
    }

    // Newest checkpoint taken at `state`.
    std::optional<uint64_t> find(const StateFingerprint& state) const {
        for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
            if (it->state == state) return it->token;
        }
        return std::nullopt;
    }

    void clear() { entries_.clear(); }

private:
    struct Entry {
        StateFingerprint state;
        uint64_t token;
        int step_index;
    };
    std::deque<Entry> entries_;
    size_t capacity_;
};

bool goal_holds(const GoalSpec& goal, const Observation& obs) {
    if (goal.pages.count(obs.page) == 0) return false;
    return !goal.typed || obs.typed == *goal.typed;
}

class EpisodeRunner {
public:
    EpisodeRunner(Environment& env, const Policies& policies, const TaskSpec& task,
                  const EpisodeConfig& config, const std::string& id)
        : env_(env), policies_(policies), task_(task), config_(config), id_(id),
          snaps_(static_cast<size_t>(config.snapshot_window)) {}

    EpisodeResult run() {
        Observation obs = env_.reset();
        cur_ = fingerprint(obs);
        tree_ = SearchTree(cur_, obs, env_.available());
        snaps_.push(cur_, env_.checkpoint(), -1);

        try {
            plan_ = policies_.planner->plan(ctx(), task_);
        } catch (const Error& e) {
            return terminal(Outcome::Fail, std::string("planner: ") + e.what());
        }

        // Consult before the first action so a goal-at-start episode ends at 0 steps.
        ExecStatus status = consult();
        if (status != ExecStatus::Continue) {
            if (status == ExecStatus::Backtrack) emit_status_row(status);
            if (auto end = dispatch(status)) return *end;
        }

        while (true) {
            if (res_.steps_used >= config_.max_steps) {
                return terminal(Outcome::BudgetExhausted, "step budget exhausted");
            }
            ActionSpec action;
            try {
                action = policies_.executor->act(ctx(), task_);
            } catch (const Error& e) {
                return terminal(Outcome::Fail, std::string("executor: ") + e.what());
            }
            auto unexplored = unexplored_actions(tree_, ledger_, cur_);
            if (std::find(unexplored.begin(), unexplored.end(), action) == unexplored.end()) {
                return terminal(Outcome::Fail, "executor proposed an explored or blocked action: " +
                                                   action_key(action));
            }
            try {
                obs = env_.step(action);
            } catch (const Error& e) {
                return terminal(Outcome::Fail, std::string("env: ") + e.what());
            }
            StateFingerprint from = cur_;
            StateFingerprint to = child_fingerprint(from, action, fingerprint(obs));
            tree_.add_transition({from, action, to}, obs, env_.available());
            res_.steps_used += 1;
            res_.trajectory.append(Mode::Normal, {from, action, to}, plan_.revision);
            snaps_.push(to, env_.checkpoint(), res_.trajectory.size() - 1);
            cur_ = to;

            status = consult();
            LogRow row;
            row.step = res_.trajectory.size() - 1;
            row.mode = to_string(Mode::Normal);
            row.state_from = from.digest;
            row.action = action_to_json(action);
            row.state_to = to.digest;
            row.exec_status = to_string(status);
            row.plan_revision = plan_.revision;
            emit(row);

            if (auto end = dispatch(status)) return *end;
        }
    }

private:
    PolicyContext ctx() {
        PolicyContext c;
        c.state = cur_;
        c.obs = env_.observe();
        c.tree = &tree_;
        c.ledger = &ledger_;
        c.history = &res_.trajectory;
        c.plan = &plan_;
        c.available = env_.available();
        return c;
    }

    void emit(LogRow row) {
        row.episode_id = id_;
        res_.log.push_back(std::move(row));
    }

    void emit_status_row(ExecStatus status) {
        LogRow row;
        row.step = res_.steps_used;
        row.mode = to_string(Mode::Normal);
        row.state_from = cur_.digest;
        row.exec_status = to_string(status);
        row.plan_revision = plan_.revision;
        emit(row);
    }

    void emit_back_marker(BackStatus status) {
        LogRow row;
        row.step = res_.steps_used;
        row.mode = to_string(Mode::Backtrack);
        row.state_from = cur_.digest;
        row.back_status = to_string(status);
        row.plan_revision = plan_.revision;
        emit(row);
    }

    EpisodeResult terminal(Outcome outcome, const std::string& diagnostic) {
        res_.outcome = outcome;
        res_.diagnostic = diagnostic;
        res_.final_plan = plan_;
        LogRow row;
        row.step = res_.steps_used;
        row.mode = to_string(mode_);
        row.state_from = cur_.digest;
        row.exec_status = to_string(outcome);
        row.plan_revision = plan_.revision;
        emit(row);
        return res_;
    }

    // Normal-mode tracker consult (or its ablated substitute) plus plan update.
    ExecStatus consult() {
        if (!config_.ablation.enable_tracker) {
            return goal_holds(task_.goal, env_.observe()) ? ExecStatus::Done
                                                          : ExecStatus::Continue;
        }
        auto [update, status] = policies_.tracker->track(ctx(), task_);
        accept_plan(update);
        return status;
    }

    void accept_plan(const Plan& update) {
        try {
            plan_ = apply_tracker_update(plan_, update);
        } catch (const PlanMonotonicityViolation&) {
            res_.monotonicity_rejections += 1;  // keep the old plan
        }
    }

    // Terminal-or-not dispatch of a normal-mode status.
    std::optional<EpisodeResult> dispatch(ExecStatus status) {
        switch (status) {
            case ExecStatus::Continue:
                return std::nullopt;
            case ExecStatus::Done:
                return terminal(Outcome::Done, "");
            case ExecStatus::Fail:
                return terminal(Outcome::Fail, "tracker reported FAIL");
            case ExecStatus::Backtrack:
                return backtrack();
        }
        return std::nullopt;
    }

    std::optional<EpisodeResult> backtrack() {
        if (!config_.ablation.enable_backtrack) {
            return terminal(Outcome::Fail, "backtracking disabled by ablation");
        }
        std::optional<StateFingerprint> target;
        if (config_.ablation.single_step_backtrack) {
            const auto& parent = tree_.node(cur_).parent;
            if (parent) target = parent->first;
        } else {
            target = backtrack_target(tree_, ledger_, cur_);
        }
        if (!target) {
            return terminal(Outcome::Fail, "search space exhausted, no viable ancestor");
        }

        FailPath abandoned;
        auto upward = tree_.path_up(cur_, *target);
        for (auto it = upward.rbegin(); it != upward.rend(); ++it) {
            abandoned.push_back({it->from, it->action});
        }

        res_.backtrack_attempts += 1;
        mode_ = Mode::Backtrack;
        auto recovery = recover(*target);
        if (recovery == Recovery::Budget) {
            return terminal(Outcome::BudgetExhausted, "step budget exhausted during backtrack");
        }
        if (recovery == Recovery::Irrecoverable) {
            return terminal(Outcome::Fail,
                            "backtrack irrecoverable: no inverse path, checkpoint, or clean replay");
        }
        res_.backtrack_successes += 1;
        ledger_.record_failure(abandoned);
        try {
            Plan revised = policies_.planner->plan(ctx(), task_);
            accept_plan(revised);
        } catch (const Error& e) {
            return terminal(Outcome::Fail, std::string("planner (replan): ") + e.what());
        }
        mode_ = Mode::Normal;
        return std::nullopt;
    }

    enum class Recovery { Recovered, Budget, Irrecoverable };

    BackStatus verify(const StateFingerprint& target) {
        if (!config_.ablation.enable_tracker) {
            return fingerprint(env_.observe()) == fingerprint(tree_.node(target).obs)
                       ? BackStatus::Recovered
                       : BackStatus::NotRecovered;
        }
        return policies_.tracker->verify_backtrack(ctx(), target);
    }

    // Recovery ladder: inverse walk (retried), checkpoint restore, reset-replay.
    Recovery recover(const StateFingerprint& target) {
        bool restore_requested = false;
        for (int round = 0; round < config_.max_backtrack_retries && !restore_requested; ++round) {
            while (!(cur_ == target)) {
                if (res_.steps_used >= config_.max_steps) return Recovery::Budget;
                TransitionEdge edge = tree_.path_up(cur_, target).front();
                BacktrackAction proposal = policies_.executor->backtrack_act(
                    ctx(), edge, static_cast<int>(env_.history_size()) - 1);
                if (proposal.kind == BacktrackAction::Kind::RestoreCheckpoint) {
                    restore_requested = true;
                    break;
                }
                try {
                    env_.step(proposal.inverse);
                } catch (const IrreversibleAction&) {
                    break;
                } catch (const IllegalAction&) {
                    break;
                }
                res_.steps_used += 1;
                res_.backtrack_steps_total += 1;
                TransitionEdge undo{cur_, proposal.inverse, edge.from};
                res_.trajectory.append(Mode::Backtrack, undo, plan_.revision);
                LogRow row;
                row.step = res_.trajectory.size() - 1;
                row.mode = to_string(Mode::Backtrack);
                row.state_from = cur_.digest;
                row.action = action_to_json(proposal.inverse);
                row.state_to = edge.from.digest;
                row.plan_revision = plan_.revision;
                emit(row);
                cur_ = edge.from;
            }
            if (cur_ == target && verify(target) == BackStatus::Recovered) {
                emit_back_marker(BackStatus::Recovered);
                return Recovery::Recovered;
            }
            emit_back_marker(BackStatus::NotRecovered);
        }

        if (auto token = snaps_.find(target)) {
            Observation obs;
            bool ok = true;
            try {
                obs = env_.restore(*token);
            } catch (const CheckpointError&) {
                ok = false;
            }
            if (ok) {
                LogRow row;
                row.step = res_.steps_used;
                row.mode = to_string(Mode::Backtrack);
                row.state_from = cur_.digest;
                row.action = restore_marker();
                row.state_to = target.digest;
                row.plan_revision = plan_.revision;
                emit(row);
                cur_ = target;
                if (verify(target) == BackStatus::Recovered) {
                    emit_back_marker(BackStatus::Recovered);
                    return Recovery::Recovered;
                }
                emit_back_marker(BackStatus::NotRecovered);
            }
        }

        return replay_prefix(target);
    }

    // Mechanism of last resort: reset the environment and re-execute the
    // surviving root-to-target prefix, checkpointing along the way.
    Recovery replay_prefix(const StateFingerprint& target) {
        auto prefix = tree_.path_from_root(target);
        env_.reset();
        snaps_.clear();
        snaps_.push(tree_.root(), env_.checkpoint(), res_.trajectory.size() - 1);
        LogRow row;
        row.step = res_.steps_used;
        row.mode = to_string(Mode::Backtrack);
        row.state_from = cur_.digest;
        row.action = restore_marker();
        row.state_to = tree_.root().digest;
        row.plan_revision = plan_.revision;
        emit(row);
        cur_ = tree_.root();

        for (const auto& edge : prefix) {
            if (res_.steps_used >= config_.max_steps) return Recovery::Budget;
            Observation obs;
            try {
                obs = env_.step(edge.action);
            } catch (const Error&) {
                return Recovery::Irrecoverable;
            }
            if (!(child_fingerprint(edge.from, edge.action, fingerprint(obs)) == edge.to)) {
                return Recovery::Irrecoverable;
            }
            res_.steps_used += 1;
            res_.backtrack_steps_total += 1;
            res_.trajectory.append(Mode::Backtrack, edge, plan_.revision);
            LogRow step_row;
            step_row.step = res_.trajectory.size() - 1;
            step_row.mode = to_string(Mode::Backtrack);
            step_row.state_from = edge.from.digest;
            step_row.action = action_to_json(edge.action);
            step_row.state_to = edge.to.digest;
            step_row.plan_revision = plan_.revision;
            emit(step_row);
            snaps_.push(edge.to, env_.checkpoint(), res_.trajectory.size() - 1);
            cur_ = edge.to;
        }
        if (verify(target) == BackStatus::Recovered) {
            emit_back_marker(BackStatus::Recovered);
            return Recovery::Recovered;
        }
        emit_back_marker(BackStatus::NotRecovered);
        return Recovery::Irrecoverable;
    }

    Environment& env_;
    const Policies& policies_;
    const TaskSpec& task_;
    const EpisodeConfig& config_;
    std::string id_;

    SearchTree tree_;
    FailureLedger ledger_;
    SnapshotStack snaps_;
    Plan plan_;
    StateFingerprint cur_;
    Mode mode_ = Mode::Normal;
    EpisodeResult res_;
};

}  // namespace

EpisodeResult run_episode(Environment& env, const Policies& policies, const TaskSpec& task,
                          const EpisodeConfig& config, const std::string& episode_id) {
    if (config.max_steps < 1) throw ConfigError("max_steps must be >= 1");
    if (config.snapshot_window < 1) throw ConfigError("snapshot_window must be >= 1");
    EpisodeRunner runner(env, policies, task, config, episode_id);
    return runner.run();
}

}  // namespace beap

#include "beap/scripted_policy.hpp"

#include <algorithm>
#include <cmath>

#include "beap/errors.hpp"

namespace beap {

void validate_params(const ScriptedPolicyParams& p) {
    if (p.knowledge < 0.0 || p.knowledge > 1.0) throw ConfigError("knowledge must be in [0,1]");
    if (p.wrong_branch_bias < 0.0 || p.wrong_branch_bias > 1.0) {
        throw ConfigError("wrong_branch_bias must be in [0,1]");
    }
    if (p.detection_depth < 1) throw ConfigError("detection_depth must be >= 1");
}

SubtaskRef parse_subtask(const std::string& text) {
    if (text.rfind("pending:", 0) == 0) return {SubtaskRef::Kind::Pending, "", ""};
    if (text.rfind("explore:", 0) == 0) return {SubtaskRef::Kind::Explore, "", ""};
    auto at = text.rfind(" @ ");
    if (at == std::string::npos) throw EpisodePolicyError("unparseable subtask: " + text);
    return {SubtaskRef::Kind::Concrete, text.substr(0, at), text.substr(at + 3)};
}

std::string concrete_subtask(const std::string& action_key, const std::string& page) {
    return action_key + " @ " + page;
}

std::set<std::string> blocked_page_edges(const SearchTree& tree, const FailureLedger& ledger) {
    std::set<std::string> blocked;
    for (const auto& [fp, action] : ledger.failed_edges()) {
        blocked.insert(edge_key(tree.node(fp).obs.page, action));
    }
    return blocked;
}

namespace {

// Concrete subtasks for the action-key path starting at `page`.
std::vector<Subtask> subtasks_for_path(const WorldSpec& world, std::string page,
                                       const std::vector<std::string>& path, size_t limit) {
    std::vector<Subtask> out;
    for (size_t i = 0; i < path.size() && i < limit; ++i) {
        out.push_back({concrete_subtask(path[i], page), SubtaskStatus::Pending});
        page = world.transitions.at(page).at(path[i]);
    }
    return out;
}

// How many leading concrete subtasks are realized by the executed branch, as an
// in-order subsequence of the root-to-current tree path. This is the plan
// position even when statuses lag behind (tracker disabled).
size_t matched_concrete_prefix(const PolicyContext& ctx, const Plan& plan) {
    auto path = ctx.tree->path_from_root(ctx.state);
    size_t cursor = 0;
    size_t matched = 0;
    for (const auto& sub : plan.subtasks) {
        auto ref = parse_subtask(sub.text);
        if (ref.kind != SubtaskRef::Kind::Concrete) break;
        bool ok = false;
        for (size_t j = cursor; j < path.size(); ++j) {
            if (ctx.tree->node(path[j].from).obs.page == ref.page &&
                action_key(path[j].action) == ref.action_key) {
                cursor = j + 1;
                ok = true;
                break;
            }
        }
        if (!ok) break;
        ++matched;
    }
    return matched;
}

}  // namespace

ScriptedPlanner::ScriptedPlanner(const WorldSpec& world, ScriptedPolicyParams params,
                                 bool respect_horizon)
    : world_(world), params_(params), respect_horizon_(respect_horizon) {}

Plan ScriptedPlanner::plan(const PolicyContext& ctx, const TaskSpec&) {
    Plan out;
    if (ctx.plan) {
        for (const auto& sub : ctx.plan->subtasks) {
            if (sub.status != SubtaskStatus::Completed) break;
            out.subtasks.push_back(sub);
        }
    }
    auto blocked = blocked_page_edges(*ctx.tree, *ctx.ledger);
    auto path = shortest_goal_path(world_, ctx.obs.page, ctx.obs.typed, blocked);
    if (!path) {
        out.subtasks.push_back(
            {"explore: no goal route visible; survey unexplored branches", SubtaskStatus::Pending});
        return out;
    }
    auto revealed = static_cast<size_t>(std::ceil(params_.knowledge * double(path->size())));
    if (respect_horizon_ && world_.plan_horizon) {
        revealed = std::min(revealed, static_cast<size_t>(*world_.plan_horizon));
    }
    auto tail = subtasks_for_path(world_, ctx.obs.page, *path, revealed);
    out.subtasks.insert(out.subtasks.end(), tail.begin(), tail.end());
    if (revealed < path->size()) {
        out.subtasks.push_back({"pending: resolve remaining " +
                                    std::to_string(path->size() - revealed) + " steps",
                                SubtaskStatus::Pending});
    }
    return out;
}

ScriptedExecutor::ScriptedExecutor(const WorldSpec& world, ScriptedPolicyParams params)
    : world_(world), params_(params), rng_(params.seed) {}

ActionSpec ScriptedExecutor::act(const PolicyContext& ctx, const TaskSpec&) {
    if (!ctx.plan || ctx.plan->subtasks.empty()) {
        throw EpisodePolicyError("executor called without a plan");
    }
    int pending = ctx.plan->next_pending();
    size_t idx = pending < 0 ? ctx.plan->subtasks.size() : static_cast<size_t>(pending);
    idx = std::max(idx, matched_concrete_prefix(ctx, *ctx.plan));
    if (idx >= ctx.plan->subtasks.size()) {
        throw EpisodePolicyError("executor: plan exhausted before DONE");
    }
    auto ref = parse_subtask(ctx.plan->subtasks[idx].text);
    auto unexplored = unexplored_actions(*ctx.tree, *ctx.ledger, ctx.state);

    if (params_.wrong_branch_bias > 0.0) {
        for (const auto& a : unexplored) {
            if (!world_.edge_decoy(ctx.obs.page, a)) continue;
            if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < params_.wrong_branch_bias) {
                return a;
            }
            break;  // one temptation per decision
        }
    }

    switch (ref.kind) {
        case SubtaskRef::Kind::Concrete:
            if (ref.page == ctx.obs.page) {
                for (const auto& a : unexplored) {
                    if (action_key(a) == ref.action_key) return a;
                }
            }
            // Plan step does not fit the page we actually reached. A biased
            // executor keeps poking around; a faithful one gives up.
            if (params_.wrong_branch_bias > 0.0 && !unexplored.empty()) return unexplored.front();
            throw EpisodePolicyError("executor: plan step '" + ctx.plan->subtasks[idx].text +
                                     "' not executable on page " + ctx.obs.page);
        case SubtaskRef::Kind::Explore:
            if (!unexplored.empty()) return unexplored.front();
            throw EpisodePolicyError("executor: dead end, nothing unexplored on page " +
                                     ctx.obs.page);
        case SubtaskRef::Kind::Pending:
            throw EpisodePolicyError("executor: plan step still unresolved: " +
                                     ctx.plan->subtasks[idx].text);
    }
    throw EpisodePolicyError("executor: unreachable");
}

ScriptedTracker::ScriptedTracker(const WorldSpec& world, ScriptedPolicyParams params)
    : world_(world), params_(params) {}

bool ScriptedTracker::viable(const PolicyContext& ctx, const StateFingerprint& s) {
    auto key = std::pair{s.digest, ctx.ledger->edge_count()};
    auto it = viability_cache_.find(key);
    if (it != viability_cache_.end()) return it->second;
    const NodeRecord& rec = ctx.tree->node(s);
    bool v = goal_reachable(world_, rec.obs.page, rec.obs.typed,
                            blocked_page_edges(*ctx.tree, *ctx.ledger));
    viability_cache_[key] = v;
    return v;
}

std::pair<Plan, ExecStatus> ScriptedTracker::track(const PolicyContext& ctx, const TaskSpec&) {
    Plan updated = ctx.plan ? *ctx.plan : Plan{};
    if (world_.goal_satisfied(ctx.obs.page, ctx.obs.typed)) {
        for (auto& sub : updated.subtasks) sub.status = SubtaskStatus::Completed;
        return {updated, ExecStatus::Done};
    }
    if (world_.is_trap(ctx.obs.page)) return {updated, ExecStatus::Fail};

    // Sparse-reward dead-branch detection: the divergence is noticed only once
    // the trailing run of non-viable nodes reaches detection_depth.
    int run = 0;
    StateFingerprint at = ctx.state;
    while (!viable(ctx, at)) {
        ++run;
        const auto& rec = ctx.tree->node(at);
        if (!rec.parent) break;
        at = rec.parent->first;
    }
    if (run >= params_.detection_depth) return {updated, ExecStatus::Backtrack};

    // Promote plan steps that match the executed root-to-current branch.
    size_t matched = matched_concrete_prefix(ctx, updated);
    for (size_t i = 0; i < matched; ++i) updated.subtasks[i].status = SubtaskStatus::Completed;

    // Resolve a pending placeholder once it becomes the next step and the route
    // ahead is actually visible from here.
    int next = updated.next_pending();
    if (next >= 0 && parse_subtask(updated.subtasks[next].text).kind == SubtaskRef::Kind::Pending &&
        viable(ctx, ctx.state)) {
        auto blocked = blocked_page_edges(*ctx.tree, *ctx.ledger);
        auto rest = shortest_goal_path(world_, ctx.obs.page, ctx.obs.typed, blocked);
        if (rest) {
            updated.subtasks.resize(static_cast<size_t>(next));
            auto tail = subtasks_for_path(world_, ctx.obs.page, *rest, rest->size());
            updated.subtasks.insert(updated.subtasks.end(), tail.begin(), tail.end());
        }
    }
    return {updated, ExecStatus::Continue};
}

Policies make_scripted_policies(const WorldSpec& world, const ScriptedPolicyParams& params) {
    validate_params(params);
    return {std::make_shared<ScriptedPlanner>(world, params, true),
            std::make_shared<ScriptedExecutor>(world, params),
            std::make_shared<ScriptedTracker>(world, params)};
}

}  // namespace beap

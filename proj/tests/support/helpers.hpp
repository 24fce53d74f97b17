#pragma once

// Hand-built worlds and a raw DFS driver shared across the test suite.

#include <map>
#include <string>
#include <vector>

#include "beap/dfs.hpp"
#include "beap/env.hpp"
#include "beap/ledger.hpp"
#include "beap/tree.hpp"
#include "beap/world.hpp"

namespace testsupport {

inline void add_page(beap::WorldSpec& w, const std::string& id,
                     const std::vector<std::pair<beap::ActionSpec, std::string>>& edges) {
    beap::PageSpec page;
    for (const auto& [action, to] : edges) {
        page.elements.push_back(action.target.empty() ? "#body" : action.target);
        page.actions.push_back(action);
        w.transitions[id][beap::action_key(action)] = to;
    }
    std::sort(page.actions.begin(), page.actions.end());
    std::sort(page.elements.begin(), page.elements.end());
    page.elements.erase(std::unique(page.elements.begin(), page.elements.end()),
                        page.elements.end());
    w.transitions.try_emplace(id);
    w.pages[id] = std::move(page);
}

inline beap::WorldSpec finish_world(beap::WorldSpec w) {
    w.solution_paths = beap::minimal_goal_paths(w);
    beap::validate_world(w);
    return w;
}

// Two routes of equal length converging on the same goal page. Exercises
// path-qualified state identity (the tree must not fuse the two routes).
inline beap::WorldSpec diamond_world() {
    using beap::ActionSpec;
    beap::WorldSpec w;
    w.category = "A";
    w.start = "p0";
    w.goal.pages = {"p3"};
    add_page(w, "p0", {{ActionSpec::click("#a"), "p1"}, {ActionSpec::click("#b"), "p2"}});
    add_page(w, "p1", {{ActionSpec::click("#c"), "p3"}});
    add_page(w, "p2", {{ActionSpec::click("#d"), "p3"}});
    add_page(w, "p3", {});
    return finish_world(std::move(w));
}

// Decoy branch of length 3 off the depth-1 node; the middle decoy edge is
// irreversible so an inverse walk cannot reach the backtrack target and the
// runner must fall back to a checkpoint restore.
inline beap::WorldSpec irreversible_middle_world() {
    using beap::ActionSpec;
    beap::WorldSpec w;
    w.category = "B";
    w.start = "p0";
    w.goal.pages = {"g"};
    add_page(w, "p0", {{ActionSpec::click("#go"), "p1"}});
    add_page(w, "p1", {{ActionSpec::click("#menu"), "d1"}, {ActionSpec::click("#win"), "g"}});
    add_page(w, "d1", {{ActionSpec::click("#d2"), "d2"}});
    add_page(w, "d2", {{ActionSpec::click("#d3"), "d3"}});
    add_page(w, "d3", {});
    add_page(w, "g", {});
    w.decoys = {beap::edge_key("p1", "click:#menu")};
    w.irreversible = {beap::edge_key("d1", "click:#d2")};
    return finish_world(std::move(w));
}

// Two disjoint goal routes; blocking the first edge of one must reroute the
// planner through the other.
inline beap::WorldSpec reroute_world() {
    using beap::ActionSpec;
    beap::WorldSpec w;
    w.category = "A";
    w.start = "p0";
    w.goal.pages = {"g"};
    add_page(w, "p0", {{ActionSpec::click("#a"), "p1"}, {ActionSpec::click("#b"), "p2"}});
    add_page(w, "p1", {{ActionSpec::click("#c"), "g"}});
    add_page(w, "p2", {{ActionSpec::click("#d"), "g"}});
    add_page(w, "g", {});
    return finish_world(std::move(w));
}

// Drives an environment with dfs_decide alone (direct goal test, no policies,
// no failure recording). Returns true on Finish, false on Exhausted.
inline bool dfs_reaches_goal(beap::Environment& env, int max_iters = 200000) {
    beap::Observation obs = env.reset();
    beap::StateFingerprint cur = beap::fingerprint(obs);
    beap::SearchTree tree(cur, obs, env.available());
    beap::FailureLedger ledger;
    std::map<std::string, uint64_t> tokens;
    tokens[cur.digest] = env.checkpoint();

    for (int i = 0; i < max_iters; ++i) {
        bool done = env.spec().goal_satisfied(env.page(), env.typed());
        beap::DfsDecision d = beap::dfs_decide(tree, ledger, cur, done);
        switch (d.kind) {
            case beap::DfsDecision::Kind::Finish:
                return true;
            case beap::DfsDecision::Kind::Exhausted:
                return false;
            case beap::DfsDecision::Kind::Descend: {
                obs = env.step(d.action);
                beap::StateFingerprint to =
                    beap::child_fingerprint(cur, d.action, beap::fingerprint(obs));
                tree.add_transition({cur, d.action, to}, obs, env.available());
                tokens[to.digest] = env.checkpoint();
                cur = to;
                break;
            }
            case beap::DfsDecision::Kind::Backtrack:
                env.restore(tokens.at(d.target.digest));
                cur = d.target;
                break;
        }
    }
    throw std::runtime_error("dfs driver exceeded its iteration guard");
}

}  // namespace testsupport

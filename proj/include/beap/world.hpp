#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "beap/action.hpp"

namespace beap {

// Task success condition: current page must be one of `pages` and, when `typed`
// is set, the accumulated typed text must equal it exactly.
struct GoalSpec {
    std::set<std::string> pages;
    std::optional<std::string> typed;
};

struct PageSpec {
    std::vector<std::string> elements;
    std::vector<ActionSpec> actions;  // canonical order
};

// "page|action_key" — identifies one transition edge.
std::string edge_key(const std::string& page, const ActionSpec& a);
std::string edge_key(const std::string& page, const std::string& akey);

// Deterministic synthetic GUI world. Pages and declared actions define the state
// graph; transitions are total over declared actions; `irreversible` edges cannot
// be undone with Inverse. `decoys` marks the plausible-but-wrong edges that a
// biased executor is drawn to; `plan_horizon` caps how many solution steps are
// visible at planning time (absent = unlimited).
struct WorldSpec {
    std::string category;  // A | B | C | U
    std::map<std::string, PageSpec> pages;
    std::map<std::string, std::map<std::string, std::string>> transitions;  // page -> key -> page
    std::set<std::string> irreversible;  // edge keys
    std::set<std::string> decoys;        // edge keys
    GoalSpec goal;
    std::set<std::string> traps;
    std::vector<std::vector<std::string>> solution_paths;  // minimal goal paths, action keys
    std::string start;
    std::optional<int> plan_horizon;

    bool has_page(const std::string& id) const { return pages.count(id) > 0; }
    bool is_trap(const std::string& page) const { return traps.count(page) > 0; }
    bool goal_satisfied(const std::string& page, const std::string& typed) const;
    bool edge_irreversible(const std::string& page, const ActionSpec& a) const;
    bool edge_decoy(const std::string& page, const ActionSpec& a) const;
};

nlohmann::json world_to_json(const WorldSpec& w);
WorldSpec world_from_json(const nlohmann::json& j);
std::string world_digest(const WorldSpec& w);  // sha256 of the key-sorted serialization

// Structural checks: transitions total over declared actions, traps disjoint
// from goal pages, recorded solution paths actually reach the goal minimally.
void validate_world(const WorldSpec& w);

// Shortest action-key path from (page, typed) to the goal, avoiding blocked
// edge keys. Search is over (page, typed-text) pairs; absent when unreachable.
std::optional<std::vector<std::string>> shortest_goal_path(const WorldSpec& w,
                                                           const std::string& page,
                                                           const std::string& typed,
                                                           const std::set<std::string>& blocked);

// All minimal goal paths from the start state (used by the generator).
std::vector<std::vector<std::string>> minimal_goal_paths(const WorldSpec& w);

bool goal_reachable(const WorldSpec& w, const std::string& page, const std::string& typed,
                    const std::set<std::string>& blocked);

}  // namespace beap

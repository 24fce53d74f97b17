#pragma once

// Independent reference implementations used to cross-check the library.
// These deliberately avoid the library's search code and work straight off
// the world tables and raw tree records.

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "beap/ledger.hpp"
#include "beap/tree.hpp"
#include "beap/world.hpp"

namespace testsupport {

// Plain BFS over (page, typed) pairs using only WorldSpec tables.
inline bool brute_goal_reachable(const beap::WorldSpec& world) {
    std::set<std::pair<std::string, std::string>> seen;
    std::deque<std::pair<std::string, std::string>> queue;
    queue.push_back({world.start, ""});
    seen.insert(queue.front());
    size_t guard = 0;
    while (!queue.empty()) {
        if (++guard > 1000000) return false;
        auto [page, typed] = queue.front();
        queue.pop_front();
        bool page_ok = world.goal.pages.count(page) > 0;
        bool typed_ok = !world.goal.typed || typed == *world.goal.typed;
        if (page_ok && typed_ok) return true;
        auto it = world.transitions.find(page);
        if (it == world.transitions.end()) continue;
        for (const auto& [akey, to] : it->second) {
            std::string next_typed = typed;
            if (akey.rfind("type:", 0) == 0) {
                auto second = akey.find(':', 5);
                if (second != std::string::npos) next_typed += akey.substr(second + 1);
            }
            auto next = std::make_pair(to, next_typed);
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    return false;
}

// Nearest strict ancestor with an untried, unblocked action. Collects the whole
// ancestor chain first, then tests each from the deepest up, using raw node
// records rather than the engine's frontier helper.
inline std::optional<beap::StateFingerprint> brute_backtrack_target(
    const beap::SearchTree& tree, const beap::FailureLedger& ledger,
    const beap::StateFingerprint& s) {
    std::vector<beap::StateFingerprint> ancestors;
    beap::StateFingerprint cur = s;
    while (true) {
        const auto& parent = tree.node(cur).parent;
        if (!parent) break;
        ancestors.push_back(parent->first);
        cur = parent->first;
    }
    for (const auto& anc : ancestors) {
        const beap::NodeRecord& node = tree.node(anc);
        for (const auto& action : node.available) {
            if (node.explored.count(action) > 0) continue;
            if (ledger.is_failed_edge(anc, action)) continue;
            return anc;
        }
    }
    return std::nullopt;
}

}  // namespace testsupport

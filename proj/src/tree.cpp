#include "beap/tree.hpp"

#include <algorithm>

#include "beap/errors.hpp"
#include "beap/ledger.hpp"

namespace beap {

SearchTree::SearchTree(const StateFingerprint& root_obs_digest, const Observation& obs,
                       const std::vector<ActionSpec>& available) {
    root_ = root_obs_digest;
    NodeRecord rec;
    rec.obs = obs;
    rec.available = {available.begin(), available.end()};
    rec.depth = 0;
    nodes_[root_] = std::move(rec);
}

const NodeRecord& SearchTree::node(const StateFingerprint& s) const {
    auto it = nodes_.find(s);
    if (it == nodes_.end()) throw StateNotInTree("state not in tree: " + s.digest);
    return it->second;
}

NodeRecord& SearchTree::node_mut(const StateFingerprint& s) {
    auto it = nodes_.find(s);
    if (it == nodes_.end()) throw StateNotInTree("state not in tree: " + s.digest);
    return it->second;
}

void SearchTree::add_transition(const TransitionEdge& edge, const Observation& to_obs,
                                const std::vector<ActionSpec>& to_available) {
    NodeRecord& from = node_mut(edge.from);
    if (from.available.count(edge.action) == 0) {
        throw IllegalAction("action " + action_key(edge.action) + " not available at " +
                            edge.from.digest);
    }
    auto child = from.children.find(edge.action);
    if (child != from.children.end()) {
        if (child->second != edge.to) {
            throw NondeterminismDetected("action " + action_key(edge.action) + " from " +
                                         edge.from.digest + " led to two different states");
        }
        return;  // identical re-add
    }
    from.explored.insert(edge.action);
    from.children[edge.action] = edge.to;
    if (!nodes_.count(edge.to)) {
        NodeRecord rec;
        rec.parent = {edge.from, edge.action};
        rec.obs = to_obs;
        rec.available = {to_available.begin(), to_available.end()};
        rec.depth = from.depth + 1;
        nodes_[edge.to] = std::move(rec);
    }
}

bool SearchTree::is_ancestor(const StateFingerprint& ancestor, const StateFingerprint& n) const {
    StateFingerprint at = n;
    while (true) {
        if (at == ancestor) return true;
        const auto& rec = node(at);
        if (!rec.parent) return false;
        at = rec.parent->first;
    }
}

std::vector<TransitionEdge> SearchTree::path_up(const StateFingerprint& current,
                                                const StateFingerprint& target) const {
    std::vector<TransitionEdge> edges;
    StateFingerprint at = current;
    while (!(at == target)) {
        const auto& rec = node(at);
        if (!rec.parent) {
            throw NotAnAncestor(target.digest + " is not an ancestor of " + current.digest);
        }
        edges.push_back({rec.parent->first, rec.parent->second, at});
        at = rec.parent->first;
    }
    return edges;
}

std::vector<TransitionEdge> SearchTree::path_from_root(const StateFingerprint& n) const {
    auto up = path_up(n, root_);
    std::reverse(up.begin(), up.end());
    return up;
}

void SearchTree::assert_invariants() const {
    for (const auto& [fp, rec] : nodes_) {
        for (const auto& a : rec.explored) {
            if (rec.available.count(a) == 0) {
                throw Error("tree invariant broken: explored action not available at " +
                            fp.digest);
            }
        }
        for (const auto& [a, child] : rec.children) {
            if (rec.explored.count(a) == 0) {
                throw Error("tree invariant broken: child without explored action at " +
                            fp.digest);
            }
            (void)child;
        }
        if (!(fp == root_) && !rec.parent) {
            throw Error("tree invariant broken: non-root node without parent");
        }
    }
}

std::vector<ActionSpec> unexplored_actions(const SearchTree& tree, const FailureLedger& ledger,
                                           const StateFingerprint& s) {
    const NodeRecord& rec = tree.node(s);
    std::vector<ActionSpec> out;
    for (const auto& a : rec.available) {
        if (rec.explored.count(a) > 0) continue;
        if (ledger.is_failed_edge(s, a)) continue;
        out.push_back(a);
    }
    return out;  // std::set iteration is already canonical order
}

}  // namespace beap

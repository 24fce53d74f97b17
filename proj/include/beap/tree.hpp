#pragma once

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "beap/action.hpp"
#include "beap/fingerprint.hpp"
#include "beap/observation.hpp"

namespace beap {

struct TransitionEdge {
    StateFingerprint from;
    ActionSpec action;
    StateFingerprint to;

    friend bool operator==(const TransitionEdge&, const TransitionEdge&) = default;
};

struct NodeRecord {
    std::optional<std::pair<StateFingerprint, ActionSpec>> parent;
    std::map<ActionSpec, StateFingerprint> children;
    std::set<ActionSpec> explored;
    std::set<ActionSpec> available;
    Observation obs;  // what the agent saw here; also yields the content digest
    int depth = 0;
};

// The episode's search tree: explored states with parent links and per-node
// explored/available action sets. Node ids are path-qualified, so a revisited
// page configuration reached along a different path is a distinct node and the
// structure stays a tree. add_transition is the only mutator.
class SearchTree {
public:
    SearchTree() = default;
    SearchTree(const StateFingerprint& root_obs_digest, const Observation& obs,
               const std::vector<ActionSpec>& available);

    const StateFingerprint& root() const { return root_; }
    bool contains(const StateFingerprint& s) const { return nodes_.count(s) > 0; }
    const NodeRecord& node(const StateFingerprint& s) const;
    size_t size() const { return nodes_.size(); }

    // Moves edge.action into explored(edge.from) and registers the child; when
    // edge.to is new its available set is taken from `to_available`. Idempotent
    // for an identical re-add.
    void add_transition(const TransitionEdge& edge, const Observation& to_obs,
                        const std::vector<ActionSpec>& to_available);

    bool is_ancestor(const StateFingerprint& ancestor, const StateFingerprint& node) const;

    // Tree edges from `current` up to `target`, in upward order.
    std::vector<TransitionEdge> path_up(const StateFingerprint& current,
                                        const StateFingerprint& target) const;

    // Root-to-node downward edges.
    std::vector<TransitionEdge> path_from_root(const StateFingerprint& node) const;

    void assert_invariants() const;

private:
    NodeRecord& node_mut(const StateFingerprint& s);

    StateFingerprint root_;
    std::unordered_map<StateFingerprint, NodeRecord> nodes_;
};

class FailureLedger;

// available(s) \ explored(s) \ ledger-blocked edges, canonical order.
std::vector<ActionSpec> unexplored_actions(const SearchTree& tree, const FailureLedger& ledger,
                                           const StateFingerprint& s);

}  // namespace beap

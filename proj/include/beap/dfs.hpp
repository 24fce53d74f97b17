#pragma once

#include <optional>
#include <vector>

#include "beap/ledger.hpp"
#include "beap/tree.hpp"

namespace beap {

// One step of the DFS recurrence: Finish when done, Descend into the
// canonically-first unexplored action, else Backtrack to the nearest viable
// ancestor, or Exhausted when no ancestor has anything left.
struct DfsDecision {
    enum class Kind { Finish, Descend, Backtrack, Exhausted };

    Kind kind = Kind::Exhausted;
    ActionSpec action;                   // Descend
    StateFingerprint target;             // Backtrack
    std::vector<TransitionEdge> reverse; // Backtrack: edges current -> target, upward order
};

// Nearest strict ancestor of `current` with a nonempty unexplored set.
std::optional<StateFingerprint> backtrack_target(const SearchTree& tree,
                                                 const FailureLedger& ledger,
                                                 const StateFingerprint& current);

// Tree edges from current up to target, upward order; target must be an ancestor.
std::vector<TransitionEdge> reverse_path(const SearchTree& tree, const StateFingerprint& current,
                                         const StateFingerprint& target);

DfsDecision dfs_decide(const SearchTree& tree, const FailureLedger& ledger,
                       const StateFingerprint& current, bool done);

}  // namespace beap

#include "beap/dfs.hpp"

namespace beap {

std::optional<StateFingerprint> backtrack_target(const SearchTree& tree,
                                                 const FailureLedger& ledger,
                                                 const StateFingerprint& current) {
    const NodeRecord* rec = &tree.node(current);
    while (rec->parent) {
        const StateFingerprint& ancestor = rec->parent->first;
        if (!unexplored_actions(tree, ledger, ancestor).empty()) return ancestor;
        rec = &tree.node(ancestor);
    }
    return std::nullopt;
}

std::vector<TransitionEdge> reverse_path(const SearchTree& tree, const StateFingerprint& current,
                                         const StateFingerprint& target) {
    return tree.path_up(current, target);
}

DfsDecision dfs_decide(const SearchTree& tree, const FailureLedger& ledger,
                       const StateFingerprint& current, bool done) {
    DfsDecision d;
    if (done) {
        d.kind = DfsDecision::Kind::Finish;
        return d;
    }
    auto unexplored = unexplored_actions(tree, ledger, current);
    if (!unexplored.empty()) {
        d.kind = DfsDecision::Kind::Descend;
        d.action = unexplored.front();
        return d;
    }
    auto target = backtrack_target(tree, ledger, current);
    if (target) {
        d.kind = DfsDecision::Kind::Backtrack;
        d.target = *target;
        d.reverse = reverse_path(tree, current, *target);
        return d;
    }
    d.kind = DfsDecision::Kind::Exhausted;
    return d;
}

}  // namespace beap

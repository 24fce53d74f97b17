#pragma once

#include <set>
#include <utility>
#include <vector>

#include "beap/action.hpp"
#include "beap/fingerprint.hpp"

namespace beap {

using FailPath = std::vector<std::pair<StateFingerprint, ActionSpec>>;

// Per-episode record of abandoned exploration paths. Each recorded path
// contributes its first edge beyond the prefix tree of previously recorded
// paths to `failed_edges`, which unexplored_actions then excludes; entries are
// never removed within an episode.
class FailureLedger {
public:
    // Returns true when the path was new.
    bool record_failure(const FailPath& path);

    bool is_failed_edge(const StateFingerprint& s, const ActionSpec& a) const;

    size_t path_count() const { return paths_.size(); }
    size_t edge_count() const { return edges_.size(); }
    const std::vector<FailPath>& paths() const { return paths_; }
    const std::set<std::pair<StateFingerprint, ActionSpec>>& failed_edges() const {
        return edges_;
    }

private:
    std::vector<FailPath> paths_;
    std::set<std::pair<StateFingerprint, ActionSpec>> edges_;
};

}  // namespace beap

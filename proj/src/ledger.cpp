#include "beap/ledger.hpp"

#include <algorithm>

#include "beap/errors.hpp"

namespace beap {

bool FailureLedger::record_failure(const FailPath& path) {
    if (path.empty()) throw EmptyFailurePath("cannot record an empty failure path");
    if (std::find(paths_.begin(), paths_.end(), path) != paths_.end()) return false;

    // First edge beyond the prefix tree of everything recorded so far.
    size_t lcp = 0;
    for (const auto& prior : paths_) {
        size_t k = 0;
        while (k < prior.size() && k < path.size() && prior[k] == path[k]) ++k;
        lcp = std::max(lcp, k);
    }
    if (lcp < path.size()) edges_.insert(path[lcp]);
    paths_.push_back(path);
    return true;
}

bool FailureLedger::is_failed_edge(const StateFingerprint& s, const ActionSpec& a) const {
    return edges_.count({s, a}) > 0;
}

}  // namespace beap

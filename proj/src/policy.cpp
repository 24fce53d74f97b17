#include "beap/policy.hpp"

namespace beap {

BacktrackAction Executor::backtrack_act(const PolicyContext&, const TransitionEdge&,
                                        int traj_index) {
    return {BacktrackAction::Kind::InverseStep, ActionSpec::inverse(traj_index)};
}

BackStatus Tracker::verify_backtrack(const PolicyContext& ctx, const StateFingerprint& target) {
    const NodeRecord& rec = ctx.tree->node(target);
    return fingerprint(ctx.obs) == fingerprint(rec.obs) ? BackStatus::Recovered
                                                        : BackStatus::NotRecovered;
}

}  // namespace beap

#pragma once

#include "beap/policy.hpp"
#include "beap/world.hpp"

namespace beap {

// Fully informed reference policies: the planner reads the world's shortest goal
// path (avoiding failed edges), the executor follows the plan exactly, and the
// tracker detects a dead branch the moment it is entered. Equivalent to scripted
// policies with knowledge=1, wrong_branch_bias=0, detection_depth=1, and no
// plan-horizon fog.
Policies make_oracle_policies(const WorldSpec& world);

}  // namespace beap

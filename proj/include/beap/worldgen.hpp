#pragma once

#include <cstdint>
#include <string>

#include "beap/world.hpp"

namespace beap {

// A: solvable chain, no wrong branch reachable before the goal.
// B: unique goal path plus a decoy branch whose wrongness shows only
//    detection_depth steps in; recovery needs >= 2 upward edges.
// C: solvable, but the plan horizon forces a mid-course plan revision.
// U: goal unreachable.
enum class ScenarioClass { A, B, C, U };

std::string to_string(ScenarioClass c);
ScenarioClass scenario_from_string(const std::string& s);

struct GenParams {
    int depth = 4;
    int branching = 1;
    int n_traps = 0;
    double irreversible_fraction = 0.3;
    int detection_depth = 2;
    uint64_t seed = 0;
};

// Deterministic per (params, cls). Throws GenParamError on contradictory
// parameters (e.g. class B with depth < detection_depth + 1).
WorldSpec generate_world(const GenParams& params, ScenarioClass cls);

}  // namespace beap

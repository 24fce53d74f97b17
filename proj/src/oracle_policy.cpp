#include "beap/oracle_policy.hpp"

#include "beap/scripted_policy.hpp"

namespace beap {

Policies make_oracle_policies(const WorldSpec& world) {
    ScriptedPolicyParams params;  // knowledge 1, bias 0, immediate detection
    return {std::make_shared<ScriptedPlanner>(world, params, /*respect_horizon=*/false),
            std::make_shared<ScriptedExecutor>(world, params),
            std::make_shared<ScriptedTracker>(world, params)};
}

}  // namespace beap

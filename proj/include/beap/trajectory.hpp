#pragma once

#include <vector>

#include "beap/status.hpp"
#include "beap/tree.hpp"

namespace beap {

struct TrajStep {
    int index = 0;  // contiguous from 0
    Mode mode = Mode::Normal;
    TransitionEdge edge;
    int plan_revision = 0;
};

// Ordered record of executed environment steps (the history H).
struct Trajectory {
    std::vector<TrajStep> steps;

    int size() const { return static_cast<int>(steps.size()); }
    bool empty() const { return steps.empty(); }

    void append(Mode mode, const TransitionEdge& edge, int plan_revision) {
        steps.push_back({static_cast<int>(steps.size()), mode, edge, plan_revision});
    }
};

}  // namespace beap

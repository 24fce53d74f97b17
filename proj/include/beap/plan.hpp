#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace beap {

enum class SubtaskStatus { Pending, Completed };

struct Subtask {
    std::string text;
    SubtaskStatus status = SubtaskStatus::Pending;

    friend bool operator==(const Subtask&, const Subtask&) = default;
};

// Ordered subtasks with monotone statuses. revision 0 = freshly planned, all
// PENDING; each accepted update bumps the revision.
struct Plan {
    std::vector<Subtask> subtasks;
    int revision = 0;

    static Plan fresh(std::vector<std::string> texts);

    int completed_count() const;
    // Index of the first pending subtask, or -1 when everything is done.
    int next_pending() const;
    bool all_completed() const;
};

// Validates an updated plan against the current one: COMPLETED subtasks keep
// their position, text, and status; pending rewrites are accepted verbatim.
// Returns the accepted plan with revision = plan.revision + 1; throws
// PlanMonotonicityViolation otherwise.
Plan apply_tracker_update(const Plan& plan, const Plan& update);

nlohmann::json plan_to_json(const Plan& p);
Plan plan_from_json(const nlohmann::json& j);

}  // namespace beap

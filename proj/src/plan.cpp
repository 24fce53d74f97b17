#include "beap/plan.hpp"

#include "beap/errors.hpp"

namespace beap {

Plan Plan::fresh(std::vector<std::string> texts) {
    Plan p;
    for (auto& t : texts) p.subtasks.push_back({std::move(t), SubtaskStatus::Pending});
    return p;
}

int Plan::completed_count() const {
    int n = 0;
    for (const auto& s : subtasks) {
        if (s.status == SubtaskStatus::Completed) ++n;
    }
    return n;
}

int Plan::next_pending() const {
    for (size_t i = 0; i < subtasks.size(); ++i) {
        if (subtasks[i].status == SubtaskStatus::Pending) return static_cast<int>(i);
    }
    return -1;
}

bool Plan::all_completed() const { return next_pending() == -1; }

Plan apply_tracker_update(const Plan& plan, const Plan& update) {
    for (size_t i = 0; i < plan.subtasks.size(); ++i) {
        if (plan.subtasks[i].status != SubtaskStatus::Completed) continue;
        if (i >= update.subtasks.size()) {
            throw PlanMonotonicityViolation("update drops completed subtask " +
                                            std::to_string(i));
        }
        if (update.subtasks[i].status != SubtaskStatus::Completed) {
            throw PlanMonotonicityViolation("update reverts completed subtask " +
                                            std::to_string(i) + " to PENDING");
        }
        if (update.subtasks[i].text != plan.subtasks[i].text) {
            throw PlanMonotonicityViolation("update rewrites completed subtask " +
                                            std::to_string(i));
        }
    }
    for (const auto& s : update.subtasks) {
        if (s.text.empty()) throw PlanMonotonicityViolation("update contains an empty subtask");
    }
    Plan accepted = update;
    accepted.revision = plan.revision + 1;
    return accepted;
}

nlohmann::json plan_to_json(const Plan& p) {
    nlohmann::json subtasks = nlohmann::json::array();
    for (const auto& s : p.subtasks) {
        subtasks.push_back({{"status", s.status == SubtaskStatus::Completed ? "COMPLETED" : "PENDING"},
                            {"text", s.text}});
    }
    return {{"revision", p.revision}, {"subtasks", subtasks}};
}

Plan plan_from_json(const nlohmann::json& j) {
    Plan p;
    p.revision = j.value("revision", 0);
    for (const auto& sj : j.at("subtasks")) {
        Subtask s;
        s.text = sj.at("text").get<std::string>();
        std::string status = sj.at("status").get<std::string>();
        if (status == "COMPLETED") {
            s.status = SubtaskStatus::Completed;
        } else if (status == "PENDING") {
            s.status = SubtaskStatus::Pending;
        } else {
            throw PolicyProtocolError("unknown subtask status: " + status);
        }
        p.subtasks.push_back(std::move(s));
    }
    return p;
}

}  // namespace beap

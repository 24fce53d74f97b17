#include "beap/metrics.hpp"

#include <iomanip>
#include <sstream>

namespace beap {

namespace {

nlohmann::json opt_to_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string fmt_ratio(const std::optional<double>& v) {
    if (!v) return "null";
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << *v;
    return out.str();
}

}  // namespace

Metrics compute_metrics(const std::vector<EpisodeStats>& episodes) {
    Metrics m;
    m.episodes = static_cast<int>(episodes.size());
    int done = 0;
    int with_backtracking = 0;
    long long attempts = 0;
    long long successes = 0;
    long long backtrack_steps = 0;
    for (const auto& e : episodes) {
        m.category_episodes[e.category] += 1;
        if (e.outcome == Outcome::Done) {
            ++done;
            m.category_done[e.category] += 1;
        }
        if (e.backtrack_attempts >= 1) ++with_backtracking;
        attempts += e.backtrack_attempts;
        successes += e.backtrack_successes;
        backtrack_steps += e.backtrack_steps_total;
    }
    if (m.episodes > 0) {
        m.accuracy = double(done) / m.episodes;
        m.backtracking_task_rate = double(with_backtracking) / m.episodes;
    }
    if (attempts > 0) {
        m.backtrack_success_rate = double(successes) / double(attempts);
        m.avg_backtrack_steps = double(backtrack_steps) / double(attempts);
    }
    for (const auto& [cat, total] : m.category_episodes) {
        int cat_done = m.category_done.count(cat) ? m.category_done.at(cat) : 0;
        m.per_category_accuracy[cat] =
            total > 0 ? std::optional<double>(double(cat_done) / total) : std::nullopt;
        m.category_done.try_emplace(cat, 0);
    }
    return m;
}

nlohmann::json metrics_to_json(const Metrics& m) {
    nlohmann::json j;
    j["accuracy"] = opt_to_json(m.accuracy);
    j["avg_backtrack_steps"] = opt_to_json(m.avg_backtrack_steps);
    j["backtrack_success_rate"] = opt_to_json(m.backtrack_success_rate);
    j["backtracking_task_rate"] = opt_to_json(m.backtracking_task_rate);
    j["episodes"] = m.episodes;
    nlohmann::json per_cat = nlohmann::json::object();
    for (const auto& [cat, acc] : m.per_category_accuracy) {
        per_cat[cat] = {{"accuracy", opt_to_json(acc)},
                        {"done", m.category_done.at(cat)},
                        {"episodes", m.category_episodes.at(cat)}};
    }
    j["per_category"] = per_cat;
    return j;
}

std::string metrics_table(const Metrics& m) {
    std::ostringstream out;
    out << std::left;
    out << std::setw(26) << "Episodes" << m.episodes << "\n";
    out << std::setw(26) << "Accuracy" << fmt_ratio(m.accuracy) << "\n";
    out << std::setw(26) << "Backtracking Task Rate" << fmt_ratio(m.backtracking_task_rate)
        << "\n";
    out << std::setw(26) << "Backtrack Success Rate" << fmt_ratio(m.backtrack_success_rate)
        << "\n";
    out << std::setw(26) << "Average Backtrack Steps" << fmt_ratio(m.avg_backtrack_steps) << "\n";
    if (!m.per_category_accuracy.empty()) {
        out << "\n";
        out << std::setw(10) << "Category" << std::setw(10) << "Episodes" << std::setw(8) << "Done"
            << "Accuracy\n";
        for (const auto& [cat, acc] : m.per_category_accuracy) {
            out << std::setw(10) << cat << std::setw(10) << m.category_episodes.at(cat)
                << std::setw(8) << m.category_done.at(cat) << fmt_ratio(acc) << "\n";
        }
    }
    return out.str();
}

std::string per_category_csv(const Metrics& m) {
    std::ostringstream out;
    out << "category,episodes,done,accuracy\n";
    for (const auto& [cat, acc] : m.per_category_accuracy) {
        out << cat << "," << m.category_episodes.at(cat) << "," << m.category_done.at(cat) << ","
            << fmt_ratio(acc) << "\n";
    }
    return out.str();
}

}  // namespace beap

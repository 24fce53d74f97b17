#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "beap/jsonl.hpp"

namespace beap {

// Suite-level aggregates. Ratios with a zero denominator are reported as null
// (absent optional), never 0/0.
struct Metrics {
    int episodes = 0;
    std::optional<double> accuracy;
    std::optional<double> backtracking_task_rate;
    std::optional<double> backtrack_success_rate;
    std::optional<double> avg_backtrack_steps;
    std::map<std::string, int> category_episodes;
    std::map<std::string, int> category_done;
    std::map<std::string, std::optional<double>> per_category_accuracy;
};

Metrics compute_metrics(const std::vector<EpisodeStats>& episodes);

nlohmann::json metrics_to_json(const Metrics& m);
std::string metrics_table(const Metrics& m);       // aligned plain text
std::string per_category_csv(const Metrics& m);    // plot-ready accuracy breakdown

}  // namespace beap

#pragma once

#include <string>
#include <vector>

#include "beap/episode.hpp"

namespace beap {

nlohmann::ordered_json row_to_json(const LogRow& row);
LogRow row_from_json(const nlohmann::ordered_json& j);

std::string rows_to_jsonl(const std::vector<LogRow>& rows);
std::vector<LogRow> rows_from_jsonl_file(const std::string& path);
void write_jsonl_file(const std::string& path, const std::vector<LogRow>& rows);

// Per-episode counters recomputed purely from a log: outcome from the terminal
// row, attempts as maximal runs of backtrack-mode rows, successes as RECOVERED
// markers, step counts from non-restore action rows.
struct EpisodeStats {
    std::string episode_id;
    std::string category;
    Outcome outcome = Outcome::Fail;
    int steps_used = 0;
    int backtrack_attempts = 0;
    int backtrack_successes = 0;
    int backtrack_steps_total = 0;
};

EpisodeStats stats_from_rows(const std::vector<LogRow>& rows);
EpisodeStats stats_from_result(const std::string& episode_id, const std::string& category,
                               const EpisodeResult& result);

// Category label embedded in an episode id ("B-s17-full@ab12..." -> "B").
std::string category_from_episode_id(const std::string& id);
// World digest prefix embedded after '@', empty if none.
std::string digest_from_episode_id(const std::string& id);

}  // namespace beap

#include "beap/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "beap/errors.hpp"

namespace beap {

namespace {

nlohmann::ordered_json opt_string(const std::optional<std::string>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::optional<std::string> string_or_null(const nlohmann::ordered_json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<std::string>();
}

bool is_restore(const LogRow& row) {
    return row.action && row.action->contains("kind") && (*row.action)["kind"] == "restore";
}

}  // namespace

nlohmann::ordered_json row_to_json(const LogRow& row) {
    nlohmann::ordered_json j;
    j["episode_id"] = row.episode_id;
    j["step"] = row.step;
    j["mode"] = row.mode;
    j["state_from"] = opt_string(row.state_from);
    j["action"] = row.action ? *row.action : nlohmann::ordered_json(nullptr);
    j["state_to"] = opt_string(row.state_to);
    j["exec_status"] = opt_string(row.exec_status);
    j["back_status"] = opt_string(row.back_status);
    j["plan_revision"] = row.plan_revision;
    return j;
}

LogRow row_from_json(const nlohmann::ordered_json& j) {
    LogRow row;
    row.episode_id = j.at("episode_id").get<std::string>();
    row.step = j.at("step").get<int>();
    row.mode = j.at("mode").get<std::string>();
    row.state_from = string_or_null(j, "state_from");
    if (!j.at("action").is_null()) row.action = j["action"];
    row.state_to = string_or_null(j, "state_to");
    row.exec_status = string_or_null(j, "exec_status");
    row.back_status = string_or_null(j, "back_status");
    row.plan_revision = j.at("plan_revision").get<int>();
    return row;
}

std::string rows_to_jsonl(const std::vector<LogRow>& rows) {
    std::ostringstream out;
    for (const auto& row : rows) out << row_to_json(row).dump() << "\n";
    return out.str();
}

std::vector<LogRow> rows_from_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open log file: " + path);
    std::vector<LogRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            rows.push_back(row_from_json(nlohmann::ordered_json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": bad log row: " + e.what());
        }
    }
    return rows;
}

void write_jsonl_file(const std::string& path, const std::vector<LogRow>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write log file: " + path);
    out << rows_to_jsonl(rows);
}

std::string category_from_episode_id(const std::string& id) {
    auto dash = id.find('-');
    return dash == std::string::npos ? id : id.substr(0, dash);
}

std::string digest_from_episode_id(const std::string& id) {
    auto at = id.find('@');
    return at == std::string::npos ? "" : id.substr(at + 1);
}

EpisodeStats stats_from_rows(const std::vector<LogRow>& rows) {
    if (rows.empty()) throw ConfigError("empty episode log");
    EpisodeStats stats;
    stats.episode_id = rows.front().episode_id;
    stats.category = category_from_episode_id(stats.episode_id);

    const LogRow& last = rows.back();
    if (last.action || !last.exec_status) {
        throw ConfigError("episode log does not end with a terminal row");
    }
    stats.outcome = outcome_from_string(*last.exec_status);

    // A terminal row in backtrack mode marks an attempt that died mid-recovery,
    // so it participates in the run counting like any other backtrack row.
    bool in_backtrack_run = false;
    for (const auto& row : rows) {
        bool backtrack_mode = row.mode == "BACKTRACK";
        if (backtrack_mode) {
            if (!in_backtrack_run) {
                in_backtrack_run = true;
                stats.backtrack_attempts += 1;
            }
        } else {
            in_backtrack_run = false;
        }
        if (row.back_status && *row.back_status == "RECOVERED") stats.backtrack_successes += 1;
        if (row.action && !is_restore(row)) {
            stats.steps_used += 1;
            if (backtrack_mode) stats.backtrack_steps_total += 1;
        }
    }
    return stats;
}

EpisodeStats stats_from_result(const std::string& episode_id, const std::string& category,
                               const EpisodeResult& result) {
    EpisodeStats stats;
    stats.episode_id = episode_id;
    stats.category = category;
    stats.outcome = result.outcome;
    stats.steps_used = result.steps_used;
    stats.backtrack_attempts = result.backtrack_attempts;
    stats.backtrack_successes = result.backtrack_successes;
    stats.backtrack_steps_total = result.backtrack_steps_total;
    return stats;
}

}  // namespace beap

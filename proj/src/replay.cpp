#include "beap/replay.hpp"

#include <unordered_map>

#include "beap/env.hpp"
#include "beap/errors.hpp"
#include "beap/fingerprint.hpp"

namespace beap {

namespace {

struct Mirror {
    Environment env;
    StateFingerprint root;
    StateFingerprint cur;
    // State identity -> canonical observation digest seen when it was reached.
    std::unordered_map<std::string, std::string> obs_digest;
    // State identity -> live checkpoint token (invalidated by reset).
    std::unordered_map<std::string, uint64_t> checkpoints;

    explicit Mirror(const WorldSpec& world) : env(world) {
        Observation obs = env.reset();
        root = fingerprint(obs);
        cur = root;
        obs_digest[root.digest] = root.digest;
        checkpoints[root.digest] = env.checkpoint();
    }
};

ReplayReport diverge(int line, std::string detail) {
    return ReplayReport{false, line, std::move(detail)};
}

bool is_terminal_status(const std::string& s) {
    return s == "DONE" || s == "FAIL" || s == "BUDGET_EXHAUSTED";
}

}  // namespace

ReplayReport replay_log(const std::vector<LogRow>& rows, const WorldSpec& world) {
    if (rows.empty()) throw ConfigError("log has no rows");
    const std::string& episode_id = rows.front().episode_id;
    std::string claimed = digest_from_episode_id(episode_id);
    if (claimed.empty() || world_digest(world).substr(0, claimed.size()) != claimed) {
        throw ReplayWorldMismatch("episode " + episode_id +
                                  " was not recorded against this world");
    }

    Mirror m(world);
    bool saw_terminal = false;

    for (size_t i = 0; i < rows.size(); ++i) {
        const LogRow& row = rows[i];
        int line = static_cast<int>(i) + 1;
        if (row.episode_id != episode_id) {
            return diverge(line, "row belongs to a different episode");
        }
        if (saw_terminal) {
            return diverge(line, "row after terminal row");
        }
        if (row.state_from && *row.state_from != m.cur.digest) {
            return diverge(line, "state_from " + *row.state_from + " but replay is at " +
                                     m.cur.digest);
        }

        if (!row.action) {
            if (row.back_status) continue;  // recovery marker, no transition
            if (!row.exec_status) return diverge(line, "row carries no action or status");
            if (is_terminal_status(*row.exec_status)) saw_terminal = true;
            continue;  // status-only row
        }

        const nlohmann::json& aj = *row.action;
        if (!row.state_to) return diverge(line, "action row without state_to");
        const std::string& to = *row.state_to;

        if (aj.value("kind", "") == "restore") {
            auto known = m.obs_digest.find(to);
            if (known == m.obs_digest.end()) {
                return diverge(line, "restore to never-visited state " + to);
            }
            Observation obs;
            if (auto ck = m.checkpoints.find(to); ck != m.checkpoints.end()) {
                obs = m.env.restore(ck->second);
            } else if (to == m.root.digest) {
                obs = m.env.reset();
                m.checkpoints.clear();
                m.checkpoints[m.root.digest] = m.env.checkpoint();
            } else {
                return diverge(line, "restore to state with no live checkpoint: " + to);
            }
            if (fingerprint(obs).digest != known->second) {
                return diverge(line, "restored observation differs from the recorded one");
            }
            m.cur = StateFingerprint{to};
            continue;
        }

        ActionSpec action;
        try {
            action = action_from_json(aj);
        } catch (const Error& e) {
            return diverge(line, std::string("unparseable action: ") + e.what());
        }

        Observation obs;
        try {
            obs = m.env.step(action);
        } catch (const Error& e) {
            return diverge(line, std::string("world rejects ") + action_key(action) + ": " +
                                     e.what());
        }

        if (action.kind == ActionKind::Inverse) {
            auto known = m.obs_digest.find(to);
            if (known == m.obs_digest.end() || fingerprint(obs).digest != known->second) {
                return diverge(line, "inverse step did not land on the recorded state " + to);
            }
            m.cur = StateFingerprint{to};
            continue;
        }

        StateFingerprint expected = child_fingerprint(m.cur, action, fingerprint(obs));
        if (expected.digest != to) {
            return diverge(line, "recorded state_to " + to + " but world produced " +
                                     expected.digest);
        }
        m.obs_digest[to] = fingerprint(obs).digest;
        m.checkpoints[to] = m.env.checkpoint();
        m.cur = expected;
    }

    if (!saw_terminal) {
        return diverge(static_cast<int>(rows.size()), "log ends without a terminal row");
    }
    return ReplayReport{true, 0, "CLEAN"};
}

ReplayReport replay_log_file(const std::string& log_path, const WorldSpec& world) {
    return replay_log(rows_from_jsonl_file(log_path), world);
}

}  // namespace beap

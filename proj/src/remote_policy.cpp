#include "beap/remote_policy.hpp"

#include <httplib.h>

#include <algorithm>
#include <semaphore>

#include "beap/errors.hpp"

namespace beap {

namespace {

constexpr const char* kWireVersion = "beap/1";
constexpr const char* kPolicyPath = "/v1/policy";
constexpr int kTrajectoryTail = 8;

nlohmann::json observation_json(const Observation& obs) {
    auto elements = obs.elements;
    std::sort(elements.begin(), elements.end());
    return {{"elements", elements}, {"page", obs.page}, {"typed", obs.typed}};
}

nlohmann::json action_json_sorted(const ActionSpec& a) {
    return nlohmann::json::parse(action_to_json(a).dump());
}

}  // namespace

struct RemoteClient::Impl {
    explicit Impl(int max_in_flight) : slots(max_in_flight) {}
    std::counting_semaphore<64> slots;
};

RemoteClient::RemoteClient(RemoteConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) throw ConfigError("remote policy endpoint not configured");
    if (config_.max_in_flight < 1 || config_.max_in_flight > 64) {
        throw ConfigError("max_in_flight must be in [1,64]");
    }
    impl_ = std::make_unique<Impl>(config_.max_in_flight);
}

RemoteClient::~RemoteClient() = default;

nlohmann::json RemoteClient::call(const std::string& role, const std::string& mode,
                                  nlohmann::json payload) {
    payload["mode"] = mode;
    payload["role"] = role;
    payload["version"] = kWireVersion;

    impl_->slots.acquire();
    struct Release {
        std::counting_semaphore<64>& s;
        ~Release() { s.release(); }
    } release{impl_->slots};

    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(0, config_.timeout_ms * 1000);
    client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);

    auto result = client.Post(kPolicyPath, payload.dump(), "application/json");
    if (!result) {
        auto err = result.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
            throw PolicyTimeout("policy endpoint timed out: " + httplib::to_string(err));
        }
        throw PolicyEndpointError("policy endpoint unreachable: " + httplib::to_string(err));
    }
    if (result->status < 200 || result->status >= 300) {
        throw PolicyEndpointError("policy endpoint returned HTTP " +
                                  std::to_string(result->status));
    }
    try {
        return nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::parse_error& e) {
        throw PolicyProtocolError(std::string("malformed policy response: ") + e.what());
    }
}

nlohmann::json wire_request(const PolicyContext& ctx, const TaskSpec& task,
                            const std::string& role, const std::string& mode) {
    nlohmann::json j;
    j["role"] = role;
    j["mode"] = mode;
    j["observation"] = observation_json(ctx.obs);
    j["state"] = ctx.state.digest;
    j["task"] = {{"goal",
                  {{"pages", task.goal.pages},
                   {"typed", task.goal.typed ? nlohmann::json(*task.goal.typed)
                                             : nlohmann::json(nullptr)}}},
                 {"instruction", task.instruction}};
    j["plan"] = ctx.plan ? plan_to_json(*ctx.plan) : nlohmann::json(nullptr);

    nlohmann::json tail = nlohmann::json::array();
    if (ctx.history) {
        int n = ctx.history->size();
        for (int i = std::max(0, n - kTrajectoryTail); i < n; ++i) {
            const auto& s = ctx.history->steps[i];
            tail.push_back({{"action", action_json_sorted(s.edge.action)},
                            {"from", s.edge.from.digest},
                            {"index", s.index},
                            {"mode", to_string(s.mode)},
                            {"to", s.edge.to.digest}});
        }
    }
    j["trajectory_tail"] = tail;

    nlohmann::json failures = nlohmann::json::array();
    if (ctx.ledger) {
        for (const auto& [state, action] : ctx.ledger->failed_edges()) {
            failures.push_back({{"action", action_json_sorted(action)}, {"state", state.digest}});
        }
    }
    j["failures"] = failures;

    nlohmann::json available = nlohmann::json::array();
    for (const auto& a : ctx.available) available.push_back(action_json_sorted(a));
    j["available"] = available;
    return j;
}

namespace {

class RemotePlanner : public Planner {
public:
    explicit RemotePlanner(std::shared_ptr<RemoteClient> client) : client_(std::move(client)) {}

    Plan plan(const PolicyContext& ctx, const TaskSpec& task) override {
        auto response = client_->call("planner", "normal", wire_request(ctx, task, "planner", "normal"));
        try {
            return plan_from_json(response.at("plan"));
        } catch (const nlohmann::json::exception& e) {
            throw PolicyProtocolError(std::string("bad planner response: ") + e.what());
        }
    }

private:
    std::shared_ptr<RemoteClient> client_;
};

class RemoteExecutor : public Executor {
public:
    explicit RemoteExecutor(std::shared_ptr<RemoteClient> client) : client_(std::move(client)) {}

    ActionSpec act(const PolicyContext& ctx, const TaskSpec& task) override {
        auto response =
            client_->call("executor", "normal", wire_request(ctx, task, "executor", "normal"));
        try {
            return action_from_json(response.at("action"));
        } catch (const nlohmann::json::exception& e) {
            throw PolicyProtocolError(std::string("bad executor response: ") + e.what());
        }
    }

    BacktrackAction backtrack_act(const PolicyContext& ctx, const TransitionEdge& edge,
                                  int traj_index) override {
        auto body = wire_request(ctx, TaskSpec{}, "executor", "backtrack");
        body["edge"] = {{"action", nlohmann::json::parse(action_to_json(edge.action).dump())},
                        {"from", edge.from.digest},
                        {"to", edge.to.digest}};
        body["traj_index"] = traj_index;
        auto response = client_->call("executor", "backtrack", body);
        try {
            std::string kind = response.at("backtrack").get<std::string>();
            if (kind == "inverse") {
                return {BacktrackAction::Kind::InverseStep, ActionSpec::inverse(traj_index)};
            }
            if (kind == "restore") return {BacktrackAction::Kind::RestoreCheckpoint, {}};
            throw PolicyProtocolError("bad backtrack kind: " + kind);
        } catch (const nlohmann::json::exception& e) {
            throw PolicyProtocolError(std::string("bad executor response: ") + e.what());
        }
    }

private:
    std::shared_ptr<RemoteClient> client_;
};

class RemoteTracker : public Tracker {
public:
    explicit RemoteTracker(std::shared_ptr<RemoteClient> client) : client_(std::move(client)) {}

    std::pair<Plan, ExecStatus> track(const PolicyContext& ctx, const TaskSpec& task) override {
        auto response =
            client_->call("tracker", "normal", wire_request(ctx, task, "tracker", "normal"));
        try {
            return {plan_from_json(response.at("plan")),
                    exec_status_from_string(response.at("status").get<std::string>())};
        } catch (const nlohmann::json::exception& e) {
            throw PolicyProtocolError(std::string("bad tracker response: ") + e.what());
        }
    }

    BackStatus verify_backtrack(const PolicyContext& ctx, const StateFingerprint& target) override {
        auto body = wire_request(ctx, TaskSpec{}, "tracker", "backtrack");
        body["target"] = target.digest;
        auto response = client_->call("tracker", "backtrack", body);
        try {
            std::string status = response.at("back_status").get<std::string>();
            if (status == "RECOVERED") return BackStatus::Recovered;
            if (status == "NOT_RECOVERED") return BackStatus::NotRecovered;
            throw PolicyProtocolError("bad back_status: " + status);
        } catch (const nlohmann::json::exception& e) {
            throw PolicyProtocolError(std::string("bad tracker response: ") + e.what());
        }
    }

private:
    std::shared_ptr<RemoteClient> client_;
};

}  // namespace

Policies make_remote_policies(const RemoteConfig& config) {
    auto client = std::make_shared<RemoteClient>(config);
    return {std::make_shared<RemotePlanner>(client), std::make_shared<RemoteExecutor>(client),
            std::make_shared<RemoteTracker>(client)};
}

}  // namespace beap

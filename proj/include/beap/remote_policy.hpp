#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "beap/policy.hpp"

namespace beap {

// Synchronous JSON-over-HTTP policy host. Requests go to POST /v1/policy with a
// key-sorted body carrying {version:"beap/1", role, mode, task, observation,
// plan, trajectory_tail, failures, ...}; responses are parsed strictly and
// never fabricated: timeouts raise PolicyTimeout, malformed bodies raise
// PolicyProtocolError, non-2xx raises PolicyEndpointError.
struct RemoteConfig {
    std::string endpoint;       // "http://host:port"
    int timeout_ms = 30000;
    int max_in_flight = 4;      // per endpoint
};

class RemoteClient {
public:
    explicit RemoteClient(RemoteConfig config);
    ~RemoteClient();

    nlohmann::json call(const std::string& role, const std::string& mode,
                        nlohmann::json payload);

    const RemoteConfig& config() const { return config_; }

private:
    struct Impl;
    RemoteConfig config_;
    std::unique_ptr<Impl> impl_;
};

// Builds the shared request body for a policy call.
nlohmann::json wire_request(const PolicyContext& ctx, const TaskSpec& task,
                            const std::string& role, const std::string& mode);

Policies make_remote_policies(const RemoteConfig& config);

}  // namespace beap

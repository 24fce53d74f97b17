#include "beap/observation.hpp"

#include <algorithm>

#include <json.hpp>

#include "beap/errors.hpp"

namespace beap {

std::string canonical_serialization(const Observation& obs) {
    auto elements = obs.elements;
    std::sort(elements.begin(), elements.end());
    nlohmann::json j;
    j["elements"] = elements;
    j["page"] = obs.page;
    j["typed"] = obs.typed;
    return j.dump();
}

Observation observation_from_canonical(const std::string& bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw FingerprintError(std::string("malformed observation: ") + e.what());
    }
    if (!j.is_object() || !j.contains("page") || !j.contains("elements") || !j.contains("typed")) {
        throw FingerprintError("malformed observation: missing field");
    }
    Observation obs;
    try {
        obs.page = j["page"].get<std::string>();
        obs.elements = j["elements"].get<std::vector<std::string>>();
        obs.typed = j["typed"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw FingerprintError(std::string("malformed observation: ") + e.what());
    }
    if (canonical_serialization(obs) != bytes) {
        throw FingerprintError("observation bytes are not canonical");
    }
    return obs;
}

}  // namespace beap

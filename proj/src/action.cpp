#include "beap/action.hpp"

#include <array>
#include <tuple>

#include "beap/errors.hpp"

namespace beap {

namespace {

const std::array<std::string, 5> kKindNames = {"click", "drag", "scroll", "type", "inverse"};

}  // namespace

int kind_rank(ActionKind k) { return static_cast<int>(k); }

std::string kind_name(ActionKind k) { return kKindNames.at(static_cast<size_t>(k)); }

ActionKind kind_from_name(const std::string& name) {
    for (size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) return static_cast<ActionKind>(i);
    }
    throw IllegalAction("unknown action kind: " + name);
}

std::strong_ordering operator<=>(const ActionSpec& a, const ActionSpec& b) {
    if (auto c = kind_rank(a.kind) <=> kind_rank(b.kind); c != 0) return c;
    if (auto c = a.target <=> b.target; c != 0) return c;
    if (auto c = a.payload <=> b.payload; c != 0) return c;
    return a.inverse_of.value_or(-1) <=> b.inverse_of.value_or(-1);
}

bool operator==(const ActionSpec& a, const ActionSpec& b) {
    return (a <=> b) == std::strong_ordering::equal;
}

std::string action_key(const ActionSpec& a) {
    switch (a.kind) {
        case ActionKind::Type:
            return "type:" + a.target + ":" + a.payload;
        case ActionKind::Inverse:
            return "inverse:" + std::to_string(a.inverse_of.value_or(-1));
        default:
            return kind_name(a.kind) + ":" + a.target;
    }
}

ActionSpec action_from_key(const std::string& key) {
    auto colon = key.find(':');
    if (colon == std::string::npos) throw IllegalAction("malformed action key: " + key);
    auto kind = kind_from_name(key.substr(0, colon));
    std::string rest = key.substr(colon + 1);
    switch (kind) {
        case ActionKind::Type: {
            auto second = rest.find(':');
            if (second == std::string::npos) throw IllegalAction("malformed type key: " + key);
            return ActionSpec::type(rest.substr(0, second), rest.substr(second + 1));
        }
        case ActionKind::Inverse:
            return ActionSpec::inverse(std::stoi(rest));
        default:
            return {kind, rest, "", {}};
    }
}

nlohmann::ordered_json action_to_json(const ActionSpec& a) {
    nlohmann::ordered_json j;
    if (a.kind == ActionKind::Inverse) {
        j["inverse_of"] = a.inverse_of.value_or(-1);
        j["kind"] = kind_name(a.kind);
        return j;
    }
    j["kind"] = kind_name(a.kind);
    if (a.kind == ActionKind::Type) j["payload"] = a.payload;
    j["target"] = a.target;
    return j;
}

ActionSpec action_from_json(const nlohmann::json& j) {
    ActionSpec a;
    a.kind = kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("target")) a.target = j["target"].get<std::string>();
    if (j.contains("payload")) a.payload = j["payload"].get<std::string>();
    if (j.contains("inverse_of")) a.inverse_of = j["inverse_of"].get<int>();
    return a;
}

}  // namespace beap

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace beap {

enum class ActionKind { Click, Drag, Scroll, Type, Inverse };

int kind_rank(ActionKind k);
std::string kind_name(ActionKind k);
ActionKind kind_from_name(const std::string& name);

// One concrete interaction. `target` is the element id for Click/Drag/Scroll/Type,
// `payload` is the text for Type, `inverse_of` is the trajectory index of the step
// being undone (Inverse only, emitted exclusively in backtrack mode).
struct ActionSpec {
    ActionKind kind = ActionKind::Click;
    std::string target;
    std::string payload;
    std::optional<int> inverse_of;

    static ActionSpec click(std::string t) { return {ActionKind::Click, std::move(t), "", {}}; }
    static ActionSpec drag(std::string t) { return {ActionKind::Drag, std::move(t), "", {}}; }
    static ActionSpec scroll(std::string t) { return {ActionKind::Scroll, std::move(t), "", {}}; }
    static ActionSpec type(std::string t, std::string text) {
        return {ActionKind::Type, std::move(t), std::move(text), {}};
    }
    static ActionSpec inverse(int step_index) { return {ActionKind::Inverse, "", "", step_index}; }

    // Canonical ordering: (kind rank, target, payload, inverse_of). Used wherever
    // deterministic iteration over action sets is required.
    friend std::strong_ordering operator<=>(const ActionSpec& a, const ActionSpec& b);
    friend bool operator==(const ActionSpec& a, const ActionSpec& b);
};

// Compact stable key, e.g. "click:#btn", "type:#field:hello", "inverse:3".
std::string action_key(const ActionSpec& a);
ActionSpec action_from_key(const std::string& key);

nlohmann::ordered_json action_to_json(const ActionSpec& a);
ActionSpec action_from_json(const nlohmann::json& j);

}  // namespace beap

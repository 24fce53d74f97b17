#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "beap/action.hpp"
#include "beap/observation.hpp"
#include "beap/world.hpp"

namespace beap {

// Deterministic environment runtime over a WorldSpec. Single-owner; one instance
// per episode. Inverse actions undo the most recent not-yet-undone step (LIFO),
// and only when that step's edge is reversible. Checkpoints snapshot the full
// runtime state; reset invalidates all outstanding tokens.
class Environment {
public:
    explicit Environment(WorldSpec spec);

    const WorldSpec& spec() const { return spec_; }

    Observation reset();
    Observation observe() const;
    const std::string& page() const { return page_; }
    const std::string& typed() const { return typed_; }

    // Declared (non-Inverse) actions of the current page, canonical order.
    std::vector<ActionSpec> available() const;

    Observation step(const ActionSpec& a);

    // Number of applied, not-yet-undone steps; Inverse must reference the last.
    size_t history_size() const { return applied_.size(); }

    uint64_t checkpoint();
    Observation restore(uint64_t token);

private:
    struct Applied {
        std::string page_before;
        ActionSpec action;
        size_t typed_len_before = 0;
    };
    struct Snapshot {
        std::string page;
        std::string typed;
        std::vector<Applied> applied;
    };

    Observation observe_page(const std::string& page) const;

    WorldSpec spec_;
    std::string page_;
    std::string typed_;
    std::vector<Applied> applied_;
    std::map<uint64_t, Snapshot> checkpoints_;
    uint64_t next_token_ = 1;
};

}  // namespace beap

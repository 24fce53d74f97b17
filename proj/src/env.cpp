#include "beap/env.hpp"

#include <algorithm>

#include "beap/errors.hpp"

namespace beap {

Environment::Environment(WorldSpec spec) : spec_(std::move(spec)) {
    validate_world(spec_);
    reset();
}

Observation Environment::reset() {
    page_ = spec_.start;
    typed_.clear();
    applied_.clear();
    checkpoints_.clear();
    return observe();
}

Observation Environment::observe_page(const std::string& page) const {
    Observation obs;
    obs.page = page;
    obs.elements = spec_.pages.at(page).elements;
    std::sort(obs.elements.begin(), obs.elements.end());
    obs.typed = typed_;
    return obs;
}

Observation Environment::observe() const { return observe_page(page_); }

std::vector<ActionSpec> Environment::available() const {
    auto actions = spec_.pages.at(page_).actions;
    std::sort(actions.begin(), actions.end());
    return actions;
}

Observation Environment::step(const ActionSpec& a) {
    if (a.kind == ActionKind::Inverse) {
        if (applied_.empty()) throw IllegalAction("nothing to invert");
        int idx = a.inverse_of.value_or(-1);
        if (idx != static_cast<int>(applied_.size()) - 1) {
            throw IllegalAction("Inverse must reference the most recent step, got index " +
                                std::to_string(idx));
        }
        const Applied& last = applied_.back();
        if (spec_.edge_irreversible(last.page_before, last.action)) {
            throw IrreversibleAction("edge " + edge_key(last.page_before, last.action) +
                                     " has no inverse");
        }
        page_ = last.page_before;
        typed_.resize(last.typed_len_before);
        applied_.pop_back();
        return observe();
    }

    const auto& actions = spec_.pages.at(page_).actions;
    if (std::find(actions.begin(), actions.end(), a) == actions.end()) {
        throw IllegalAction("action " + action_key(a) + " not available on page " + page_);
    }
    Applied record{page_, a, typed_.size()};
    page_ = spec_.transitions.at(page_).at(action_key(a));
    if (a.kind == ActionKind::Type) typed_ += a.payload;
    applied_.push_back(std::move(record));
    return observe();
}

uint64_t Environment::checkpoint() {
    uint64_t token = next_token_++;
    checkpoints_[token] = Snapshot{page_, typed_, applied_};
    return token;
}

Observation Environment::restore(uint64_t token) {
    auto it = checkpoints_.find(token);
    if (it == checkpoints_.end()) throw CheckpointError("unknown or expired checkpoint token");
    page_ = it->second.page;
    typed_ = it->second.typed;
    applied_ = it->second.applied;
    return observe();
}

}  // namespace beap

#include "beap/world.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "beap/errors.hpp"
#include "beap/fingerprint.hpp"

namespace beap {

namespace {

struct SearchState {
    std::string page;
    std::string typed;
    friend auto operator<=>(const SearchState&, const SearchState&) = default;
};

constexpr size_t kSearchStateCap = 200000;

// Applies one declared action to a (page, typed) pair.
SearchState apply(const WorldSpec& w, const SearchState& s, const ActionSpec& a) {
    SearchState next = s;
    next.page = w.transitions.at(s.page).at(action_key(a));
    if (a.kind == ActionKind::Type) next.typed += a.payload;
    return next;
}

}  // namespace

std::string edge_key(const std::string& page, const ActionSpec& a) {
    return page + "|" + action_key(a);
}

std::string edge_key(const std::string& page, const std::string& akey) {
    return page + "|" + akey;
}

bool WorldSpec::goal_satisfied(const std::string& page, const std::string& typed) const {
    if (goal.pages.count(page) == 0) return false;
    return !goal.typed || typed == *goal.typed;
}

bool WorldSpec::edge_irreversible(const std::string& page, const ActionSpec& a) const {
    return irreversible.count(edge_key(page, a)) > 0;
}

bool WorldSpec::edge_decoy(const std::string& page, const ActionSpec& a) const {
    return decoys.count(edge_key(page, a)) > 0;
}

nlohmann::json world_to_json(const WorldSpec& w) {
    nlohmann::json j;
    j["category"] = w.category;
    j["decoys"] = w.decoys;
    j["goal"]["pages"] = w.goal.pages;
    j["goal"]["typed"] = w.goal.typed ? nlohmann::json(*w.goal.typed) : nlohmann::json(nullptr);
    j["irreversible"] = w.irreversible;
    nlohmann::json pages = nlohmann::json::object();
    for (const auto& [id, page] : w.pages) {
        nlohmann::json actions = nlohmann::json::array();
        for (const auto& a : page.actions) actions.push_back(nlohmann::json::parse(action_to_json(a).dump()));
        pages[id] = {{"actions", actions}, {"elements", page.elements}};
    }
    j["pages"] = pages;
    j["plan_horizon"] = w.plan_horizon ? nlohmann::json(*w.plan_horizon) : nlohmann::json(nullptr);
    j["solution_paths"] = w.solution_paths;
    j["start"] = w.start;
    j["transitions"] = w.transitions;
    j["traps"] = w.traps;
    return j;
}

WorldSpec world_from_json(const nlohmann::json& j) {
    WorldSpec w;
    w.category = j.at("category").get<std::string>();
    w.decoys = j.at("decoys").get<std::set<std::string>>();
    w.goal.pages = j.at("goal").at("pages").get<std::set<std::string>>();
    if (!j.at("goal").at("typed").is_null()) w.goal.typed = j["goal"]["typed"].get<std::string>();
    w.irreversible = j.at("irreversible").get<std::set<std::string>>();
    for (const auto& [id, pj] : j.at("pages").items()) {
        PageSpec page;
        page.elements = pj.at("elements").get<std::vector<std::string>>();
        for (const auto& aj : pj.at("actions")) page.actions.push_back(action_from_json(aj));
        std::sort(page.actions.begin(), page.actions.end());
        w.pages[id] = std::move(page);
    }
    if (!j.at("plan_horizon").is_null()) w.plan_horizon = j["plan_horizon"].get<int>();
    w.solution_paths = j.at("solution_paths").get<std::vector<std::vector<std::string>>>();
    w.start = j.at("start").get<std::string>();
    w.transitions =
        j.at("transitions").get<std::map<std::string, std::map<std::string, std::string>>>();
    w.traps = j.at("traps").get<std::set<std::string>>();
    return w;
}

std::string world_digest(const WorldSpec& w) { return sha256_hex(world_to_json(w).dump()); }

void validate_world(const WorldSpec& w) {
    if (!w.has_page(w.start)) throw EnvError("start page missing: " + w.start);
    for (const auto& [id, page] : w.pages) {
        for (const auto& a : page.actions) {
            if (a.kind == ActionKind::Inverse) {
                throw EnvError("declared action sets may not contain Inverse");
            }
            auto it = w.transitions.find(id);
            if (it == w.transitions.end() || it->second.count(action_key(a)) == 0) {
                throw EnvError("transition missing for " + edge_key(id, a));
            }
            if (!w.has_page(it->second.at(action_key(a)))) {
                throw EnvError("transition target page missing for " + edge_key(id, a));
            }
        }
    }
    for (const auto& g : w.goal.pages) {
        if (w.traps.count(g) > 0) throw EnvError("trap page marked as goal: " + g);
    }
    auto regenerated = minimal_goal_paths(w);
    if (regenerated != w.solution_paths) {
        throw EnvError("recorded solution paths disagree with the transition table");
    }
}

std::optional<std::vector<std::string>> shortest_goal_path(const WorldSpec& w,
                                                           const std::string& page,
                                                           const std::string& typed,
                                                           const std::set<std::string>& blocked) {
    SearchState start{page, typed};
    if (w.goal_satisfied(page, typed)) return std::vector<std::string>{};
    std::map<SearchState, std::pair<SearchState, std::string>> came_from;
    std::set<SearchState> seen{start};
    std::deque<SearchState> frontier{start};
    while (!frontier.empty()) {
        SearchState cur = frontier.front();
        frontier.pop_front();
        for (const auto& a : w.pages.at(cur.page).actions) {
            if (blocked.count(edge_key(cur.page, a)) > 0) continue;
            SearchState next = apply(w, cur, a);
            if (seen.count(next) > 0) continue;
            if (seen.size() >= kSearchStateCap) throw EnvError("world search state cap exceeded");
            seen.insert(next);
            came_from[next] = {cur, action_key(a)};
            if (w.goal_satisfied(next.page, next.typed)) {
                std::vector<std::string> path;
                SearchState at = next;
                while (!(at == start)) {
                    auto& [prev, key] = came_from.at(at);
                    path.push_back(key);
                    at = prev;
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            frontier.push_back(next);
        }
    }
    return std::nullopt;
}

bool goal_reachable(const WorldSpec& w, const std::string& page, const std::string& typed,
                    const std::set<std::string>& blocked) {
    return shortest_goal_path(w, page, typed, blocked).has_value();
}

std::vector<std::vector<std::string>> minimal_goal_paths(const WorldSpec& w) {
    auto one = shortest_goal_path(w, w.start, "", {});
    if (!one) return {};
    size_t target_len = one->size();

    // Enumerate every path of exactly the minimal length (worlds are desk-scale).
    std::vector<std::vector<std::string>> out;
    struct Frame {
        SearchState state;
        std::vector<std::string> path;
    };
    std::deque<Frame> stack{{SearchState{w.start, ""}, {}}};
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (w.goal_satisfied(f.state.page, f.state.typed)) {
            if (f.path.size() == target_len) out.push_back(f.path);
            continue;
        }
        if (f.path.size() >= target_len) continue;
        const auto& actions = w.pages.at(f.state.page).actions;
        for (auto it = actions.rbegin(); it != actions.rend(); ++it) {
            Frame next{apply(w, f.state, *it), f.path};
            next.path.push_back(action_key(*it));
            stack.push_back(std::move(next));
        }
        if (out.size() > 64) throw EnvError("too many minimal goal paths");
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace beap

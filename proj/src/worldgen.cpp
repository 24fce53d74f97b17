#include "beap/worldgen.hpp"

#include <algorithm>
#include <random>

#include "beap/errors.hpp"

namespace beap {

namespace {

ActionKind pick_forward_kind(std::mt19937_64& rng) {
    switch (rng() % 3) {
        case 0: return ActionKind::Click;
        case 1: return ActionKind::Drag;
        default: return ActionKind::Scroll;
    }
}

struct Builder {
    WorldSpec w;
    std::mt19937_64 rng;
    double irreversible_fraction;

    Builder(uint64_t seed, double frac) : rng(seed), irreversible_fraction(frac) {}

    void add_page(const std::string& id) {
        if (!w.pages.count(id)) w.pages[id] = PageSpec{};
    }

    void add_edge(const std::string& from, const std::string& to, const ActionSpec& a,
                  bool roll_irreversible = true) {
        add_page(from);
        add_page(to);
        auto& page = w.pages[from];
        page.actions.push_back(a);
        if (std::find(page.elements.begin(), page.elements.end(), a.target) ==
            page.elements.end()) {
            page.elements.push_back(a.target);
        }
        w.transitions[from][action_key(a)] = to;
        if (roll_irreversible &&
            std::uniform_real_distribution<double>(0.0, 1.0)(rng) < irreversible_fraction) {
            w.irreversible.insert(edge_key(from, a));
        }
    }

    void finish() {
        for (auto& [id, page] : w.pages) {
            std::sort(page.actions.begin(), page.actions.end());
            std::sort(page.elements.begin(), page.elements.end());
            (void)id;
        }
        w.solution_paths = minimal_goal_paths(w);
        validate_world(w);
    }
};

void check_common(const GenParams& p) {
    if (p.depth < 1) throw GenParamError("depth must be >= 1");
    if (p.branching < 1) throw GenParamError("branching must be >= 1");
    if (p.n_traps < 0) throw GenParamError("n_traps must be >= 0");
    if (p.irreversible_fraction < 0.0 || p.irreversible_fraction > 1.0) {
        throw GenParamError("irreversible_fraction must be in [0,1]");
    }
    if (p.detection_depth < 1) throw GenParamError("detection_depth must be >= 1");
}

// Goal chain p0 -> p1 -> ... -> p<depth>. When depth >= 3 one mid-chain edge is a
// Type action and the goal requires its text. Returns the chain page names.
std::vector<std::string> build_chain(Builder& b, const GenParams& p) {
    std::vector<std::string> pages;
    for (int i = 0; i <= p.depth; ++i) pages.push_back("p" + std::to_string(i));
    int type_at = -1;
    if (p.depth >= 3) {
        type_at = 1 + static_cast<int>(b.rng() % static_cast<uint64_t>(p.depth - 1));
    }
    for (int i = 0; i < p.depth; ++i) {
        ActionSpec a;
        if (i == type_at) {
            a = ActionSpec::type("#input", "ok");
            b.w.goal.typed = "ok";
        } else {
            a = ActionSpec{pick_forward_kind(b.rng), "#go" + std::to_string(i), "", {}};
        }
        b.add_edge(pages[i], pages[i + 1], a);
    }
    return pages;
}

// One-step dead ends on interior chain pages, (branching - 1) per page.
void add_fillers(Builder& b, const std::vector<std::string>& chain, const GenParams& p) {
    for (int i = 2; i + 1 < static_cast<int>(chain.size()); ++i) {
        for (int j = 1; j < p.branching; ++j) {
            std::string leaf = chain[i] + "x" + std::to_string(j);
            b.add_edge(chain[i], leaf,
                       ActionSpec::click("#x" + std::to_string(i) + "_" + std::to_string(j)));
        }
    }
}

void add_traps(Builder& b, const std::vector<std::string>& hosts, int n) {
    for (int j = 0; j < n; ++j) {
        const std::string& host = hosts[1 + (j % std::max<size_t>(1, hosts.size() - 1))];
        std::string trap = "t" + std::to_string(j);
        b.add_edge(host, trap, ActionSpec::click("#t" + std::to_string(j)));
        b.w.traps.insert(trap);
    }
}

}  // namespace

std::string to_string(ScenarioClass c) {
    switch (c) {
        case ScenarioClass::A: return "A";
        case ScenarioClass::B: return "B";
        case ScenarioClass::C: return "C";
        case ScenarioClass::U: return "U";
    }
    return "?";
}

ScenarioClass scenario_from_string(const std::string& s) {
    if (s == "A") return ScenarioClass::A;
    if (s == "B") return ScenarioClass::B;
    if (s == "C") return ScenarioClass::C;
    if (s == "U") return ScenarioClass::U;
    throw GenParamError("unknown scenario class: " + s);
}

WorldSpec generate_world(const GenParams& p, ScenarioClass cls) {
    check_common(p);
    Builder b(p.seed, p.irreversible_fraction);
    b.w.category = to_string(cls);
    b.w.start = "p0";

    switch (cls) {
        case ScenarioClass::A: {
            auto chain = build_chain(b, p);
            b.w.goal.pages = {chain.back()};
            break;
        }
        case ScenarioClass::B: {
            if (p.detection_depth < 2) {
                throw GenParamError("class B needs detection_depth >= 2 for multi-level recovery");
            }
            if (p.depth < p.detection_depth + 1) {
                throw GenParamError("class B needs depth >= detection_depth + 1");
            }
            auto chain = build_chain(b, p);
            b.w.goal.pages = {chain.back()};
            // Decoy chain off the depth-1 node; the entry edge is the tempting one.
            std::string prev = chain[1];
            for (int i = 1; i <= p.detection_depth; ++i) {
                std::string d = "d" + std::to_string(i);
                ActionSpec a = (i == 1) ? ActionSpec::click("#menu")
                                        : ActionSpec::click("#d" + std::to_string(i));
                b.add_edge(prev, d, a);
                if (i == 1) b.w.decoys.insert(edge_key(prev, a));
                prev = d;
            }
            add_fillers(b, chain, p);
            break;
        }
        case ScenarioClass::C: {
            if (p.depth < 2) throw GenParamError("class C needs depth >= 2");
            auto chain = build_chain(b, p);
            b.w.goal.pages = {chain.back()};
            b.w.plan_horizon = std::max(1, p.depth / 2);
            add_fillers(b, chain, p);
            break;
        }
        case ScenarioClass::U: {
            std::vector<std::string> pages;
            for (int i = 0; i < std::max(2, p.depth); ++i) pages.push_back("p" + std::to_string(i));
            for (size_t i = 0; i + 1 < pages.size(); ++i) {
                b.add_edge(pages[i], pages[i + 1],
                           ActionSpec{pick_forward_kind(b.rng), "#go" + std::to_string(i), "", {}});
            }
            b.add_page("g");
            b.w.goal.pages = {"g"};
            add_traps(b, pages, p.n_traps);
            add_fillers(b, pages, p);
            break;
        }
    }
    b.finish();
    return b.w;
}

}  // namespace beap

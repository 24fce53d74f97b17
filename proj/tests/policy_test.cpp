#include <doctest.h>

#include <algorithm>
#include <array>

#include "beap/episode.hpp"
#include "beap/errors.hpp"
#include "beap/oracle_policy.hpp"
#include "beap/scripted_policy.hpp"
#include "beap/worldgen.hpp"
#include "support/helpers.hpp"

using namespace beap;

namespace {

struct Bench {
    Environment env;
    SearchTree tree;
    FailureLedger ledger;
    Trajectory history;
    StateFingerprint cur;

    explicit Bench(const WorldSpec& world)
        : env(world),
          tree((env.reset(), fingerprint(env.observe())), env.observe(), env.available()),
          cur(tree.root()) {}

    // Steps the env, grows the tree, and moves the cursor.
    void advance(const ActionSpec& a, int plan_revision = 0) {
        Observation obs = env.step(a);
        StateFingerprint to = child_fingerprint(cur, a, fingerprint(obs));
        tree.add_transition({cur, a, to}, obs, env.available());
        history.append(Mode::Normal, {cur, a, to}, plan_revision);
        cur = to;
    }

    PolicyContext ctx(const Plan* plan = nullptr) const {
        PolicyContext c;
        c.state = cur;
        c.obs = env.observe();
        c.tree = &tree;
        c.ledger = &ledger;
        c.history = &history;
        c.plan = plan;
        c.available = env.available();
        return c;
    }

    ActionSpec by_key(const std::string& key) const {
        for (const auto& a : env.available()) {
            if (action_key(a) == key) return a;
        }
        throw std::logic_error("no such action: " + key);
    }
};

TaskSpec task_for(const WorldSpec& w) { return {"reach the goal page", w.goal}; }

std::vector<std::string> executed_actions(const EpisodeResult& r) {
    std::vector<std::string> keys;
    for (const auto& row : r.log) {
        if (row.mode == "NORMAL" && row.action && row.action->contains("target")) {
            keys.push_back(action_key(action_from_json(*row.action)));
        }
    }
    return keys;
}

}  // namespace

TEST_CASE("planner emits the concrete solution route") {
    GenParams p;
    p.depth = 3;
    p.branching = 1;
    p.seed = 4;
    WorldSpec world = generate_world(p, ScenarioClass::A);
    Bench b(world);
    auto planner = make_oracle_policies(world).planner;

    Plan plan = planner->plan(b.ctx(), task_for(world));
    CHECK(plan.revision == 0);
    REQUIRE(plan.subtasks.size() == 3);
    std::string page = "p0";
    for (size_t i = 0; i < plan.subtasks.size(); ++i) {
        CHECK(plan.subtasks[i].status == SubtaskStatus::Pending);
        SubtaskRef ref = parse_subtask(plan.subtasks[i].text);
        CHECK(ref.kind == SubtaskRef::Kind::Concrete);
        CHECK(ref.page == page);
        CHECK(ref.action_key == world.solution_paths.front()[i]);
        page = world.transitions.at(page).at(ref.action_key);
    }
}

TEST_CASE("planner reroutes around ledger-blocked edges") {
    WorldSpec world = testsupport::reroute_world();
    Bench b(world);
    auto planner = make_oracle_policies(world).planner;

    Plan first = planner->plan(b.ctx(), task_for(world));
    REQUIRE(!first.subtasks.empty());
    CHECK(parse_subtask(first.subtasks[0].text).action_key == "click:#a");

    b.ledger.record_failure({{b.tree.root(), ActionSpec::click("#a")}});
    Plan rerouted = planner->plan(b.ctx(), task_for(world));
    REQUIRE(rerouted.subtasks.size() == 2);
    CHECK(rerouted.subtasks[0].text == "click:#b @ p0");
    CHECK(rerouted.subtasks[1].text == "click:#d @ p2");

    b.ledger.record_failure({{b.tree.root(), ActionSpec::click("#b")}});
    Plan stuck = planner->plan(b.ctx(), task_for(world));
    REQUIRE(stuck.subtasks.size() == 1);
    CHECK(parse_subtask(stuck.subtasks[0].text).kind == SubtaskRef::Kind::Explore);
}

TEST_CASE("replanning keeps the completed prefix verbatim") {
    GenParams p;
    p.depth = 3;
    p.branching = 1;
    p.seed = 4;
    WorldSpec world = generate_world(p, ScenarioClass::A);
    Bench b(world);
    auto planner = make_oracle_policies(world).planner;

    Plan plan = planner->plan(b.ctx(), task_for(world));
    b.advance(b.by_key(parse_subtask(plan.subtasks[0].text).action_key));
    plan.subtasks[0].status = SubtaskStatus::Completed;
    plan.revision = 1;

    Plan replanned = planner->plan(b.ctx(&plan), task_for(world));
    REQUIRE(replanned.subtasks.size() == 3);
    CHECK(replanned.subtasks[0] == plan.subtasks[0]);
    CHECK(parse_subtask(replanned.subtasks[1].text).page == b.env.page());
}

TEST_CASE("tracker raises BACKTRACK only once the dead run reaches detection_depth") {
    WorldSpec world = testsupport::irreversible_middle_world();
    ScriptedPolicyParams params;
    params.detection_depth = 3;
    auto tracker = make_scripted_policies(world, params).tracker;

    Bench b(world);
    Plan plan = Plan::fresh({"click:#go @ p0", "click:#win @ p1"});

    b.advance(b.by_key("click:#go"));
    auto [p1_plan, p1_status] = tracker->track(b.ctx(&plan), task_for(world));
    CHECK(p1_status == ExecStatus::Continue);
    CHECK(p1_plan.subtasks[0].status == SubtaskStatus::Completed);  // matched branch promoted

    b.advance(b.by_key("click:#menu"));
    CHECK(tracker->track(b.ctx(&plan), task_for(world)).second == ExecStatus::Continue);
    b.advance(b.by_key("click:#d2"));
    CHECK(tracker->track(b.ctx(&plan), task_for(world)).second == ExecStatus::Continue);
    b.advance(b.by_key("click:#d3"));
    CHECK(tracker->track(b.ctx(&plan), task_for(world)).second == ExecStatus::Backtrack);
}

TEST_CASE("tracker reports DONE at the goal and FAIL in a trap") {
    GenParams p;
    p.depth = 3;
    p.branching = 2;
    p.n_traps = 1;
    p.seed = 2;
    WorldSpec world = generate_world(p, ScenarioClass::U);
    auto tracker = make_oracle_policies(world).tracker;
    Bench b(world);
    Plan plan = Plan::fresh({"explore: survey"});

    b.advance(b.env.available().front());  // the single chain edge p0 -> p1
    b.advance(b.by_key("click:#t0"));
    REQUIRE(world.is_trap(b.env.page()));
    CHECK(tracker->track(b.ctx(&plan), task_for(world)).second == ExecStatus::Fail);

    WorldSpec goal_world = testsupport::diamond_world();
    auto goal_tracker = make_oracle_policies(goal_world).tracker;
    Bench g(goal_world);
    Plan gplan = Plan::fresh({"click:#a @ p0", "click:#c @ p1"});
    g.advance(g.by_key("click:#a"));
    g.advance(g.by_key("click:#c"));
    auto [done_plan, done_status] = goal_tracker->track(g.ctx(&gplan), task_for(goal_world));
    CHECK(done_status == ExecStatus::Done);
    CHECK(done_plan.all_completed());
}

TEST_CASE("a faithful scripted agent reproduces the oracle action sequence") {
    for (uint64_t seed = 0; seed < 6; ++seed) {
        for (auto cls : {ScenarioClass::A, ScenarioClass::B, ScenarioClass::C}) {
            GenParams p;
            p.depth = 4;
            p.branching = 2;
            p.detection_depth = 2;
            p.seed = seed;
            WorldSpec world = generate_world(p, cls);
            TaskSpec task = task_for(world);
            EpisodeConfig config;

            Environment oracle_env(world);
            EpisodeResult oracle =
                run_episode(oracle_env, make_oracle_policies(world), task, config, "oracle");
            REQUIRE(oracle.outcome == Outcome::Done);

            ScriptedPolicyParams params;  // knowledge 1, bias 0, detection 1
            Environment scripted_env(world);
            EpisodeResult scripted = run_episode(
                scripted_env, make_scripted_policies(world, params), task, config, "scripted");
            REQUIRE(scripted.outcome == Outcome::Done);
            CHECK(executed_actions(scripted) == executed_actions(oracle));
        }
    }
}

TEST_CASE("scripted runs with a fixed seed are bit-identical") {
    GenParams p;
    p.depth = 4;
    p.branching = 2;
    p.detection_depth = 2;
    p.seed = 7;
    WorldSpec world = generate_world(p, ScenarioClass::B);
    ScriptedPolicyParams params;
    params.wrong_branch_bias = 1.0;
    params.detection_depth = 2;
    params.seed = 99;
    EpisodeConfig config;

    Environment env1(world);
    EpisodeResult r1 =
        run_episode(env1, make_scripted_policies(world, params), task_for(world), config, "e");
    Environment env2(world);
    EpisodeResult r2 =
        run_episode(env2, make_scripted_policies(world, params), task_for(world), config, "e");
    CHECK(r1.outcome == r2.outcome);
    CHECK(r1.log == r2.log);
    CHECK(r1.backtrack_attempts == r2.backtrack_attempts);
    CHECK(r1.backtrack_attempts > 0);  // the bias actually pulled it into the decoy
}

TEST_CASE("policy calls over fuzzed contexts either answer or raise a policy error") {
    int calls = 0;
    for (uint64_t seed = 0; seed < 150; ++seed) {
        auto cls = std::array{ScenarioClass::A, ScenarioClass::B, ScenarioClass::C,
                              ScenarioClass::U}[seed % 4];
        GenParams gp;
        gp.depth = 3 + static_cast<int>(seed % 4);
        gp.branching = 2;
        gp.detection_depth = 2;
        gp.n_traps = cls == ScenarioClass::U ? 2 : 0;
        gp.seed = seed;
        WorldSpec world = generate_world(gp, cls);
        ScriptedPolicyParams params;
        params.knowledge = static_cast<double>(seed % 5) / 4.0;
        params.wrong_branch_bias = static_cast<double>(seed % 3) / 2.0;
        params.detection_depth = 1 + static_cast<int>(seed % 3);
        params.seed = seed;
        Policies policies = make_scripted_policies(world, params);
        TaskSpec task = task_for(world);

        Bench b(world);
        Plan plan;
        for (int step = 0; step < 60; ++step) {
            try {
                plan = policies.planner->plan(b.ctx(plan.subtasks.empty() ? nullptr : &plan), task);
                ++calls;
                auto [updated, status] = policies.tracker->track(b.ctx(&plan), task);
                ++calls;
                (void)updated;
                (void)status;
                ActionSpec a = policies.executor->act(b.ctx(&plan), task);
                ++calls;
                auto avail = b.env.available();
                CHECK(std::find(avail.begin(), avail.end(), a) != avail.end());
                b.advance(a);

                // Defaults: exact-arrival verification and inverse proposals.
                CHECK(policies.tracker->verify_backtrack(b.ctx(&plan), b.cur) ==
                      BackStatus::Recovered);
                ++calls;
                int last = b.history.size() - 1;
                BacktrackAction prop = policies.executor->backtrack_act(
                    b.ctx(&plan), b.history.steps.back().edge, last);
                CHECK(prop.kind == BacktrackAction::Kind::InverseStep);
                CHECK(prop.inverse.inverse_of == last);
                ++calls;
            } catch (const EpisodePolicyError&) {
                ++calls;
                break;  // an explicit refusal is a valid contract outcome
            }
        }
    }
    CHECK(calls >= 2000);
}

TEST_CASE("subtask text convention round trips and rejects garbage") {
    SubtaskRef ref = parse_subtask(concrete_subtask("type:#in:ok", "p2"));
    CHECK(ref.kind == SubtaskRef::Kind::Concrete);
    CHECK(ref.action_key == "type:#in:ok");
    CHECK(ref.page == "p2");
    CHECK(parse_subtask("pending: resolve remaining 2 steps").kind == SubtaskRef::Kind::Pending);
    CHECK(parse_subtask("explore: survey branches").kind == SubtaskRef::Kind::Explore);
    CHECK_THROWS_AS(parse_subtask("do something nice"), EpisodePolicyError);
}

TEST_CASE("scripted parameter validation") {
    ScriptedPolicyParams p;
    p.knowledge = -0.1;
    CHECK_THROWS_AS(validate_params(p), ConfigError);
    p.knowledge = 1.1;
    CHECK_THROWS_AS(validate_params(p), ConfigError);
    p = {};
    p.wrong_branch_bias = 2.0;
    CHECK_THROWS_AS(validate_params(p), ConfigError);
    p = {};
    p.detection_depth = 0;
    WorldSpec world = testsupport::diamond_world();
    CHECK_THROWS_AS(make_scripted_policies(world, p), ConfigError);
}

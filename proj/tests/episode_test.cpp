#include <doctest.h>

#include "beap/episode.hpp"
#include "beap/errors.hpp"
#include "beap/jsonl.hpp"
#include "beap/metrics.hpp"
#include "beap/oracle_policy.hpp"
#include "beap/scripted_policy.hpp"
#include "beap/worldgen.hpp"
#include "support/helpers.hpp"

using namespace beap;

namespace {

// p1 offers the decoy and the winning edge; the decoy dead-ends one step in and
// is fully invertible.
WorldSpec single_decoy_world() {
    WorldSpec w;
    w.category = "B";
    w.start = "p0";
    w.goal.pages = {"g"};
    testsupport::add_page(w, "p0", {{ActionSpec::click("#go"), "p1"}});
    testsupport::add_page(w, "p1", {{ActionSpec::click("#menu"), "d1"}, {ActionSpec::click("#win"), "g"}});
    testsupport::add_page(w, "d1", {});
    testsupport::add_page(w, "g", {});
    w.decoys = {edge_key("p1", "click:#menu")};
    return testsupport::finish_world(std::move(w));
}

TaskSpec task_for(const WorldSpec& w) { return {"reach the goal page", w.goal}; }

EpisodeResult run_once(const WorldSpec& world, const Policies& policies, EpisodeConfig config = {},
                       const std::string& id = "ep") {
    Environment env(world);
    return run_episode(env, policies, task_for(world), config, id);
}

Policies biased(const WorldSpec& world, int detection_depth) {
    ScriptedPolicyParams params;
    params.wrong_branch_bias = 1.0;
    params.detection_depth = detection_depth;
    return make_scripted_policies(world, params);
}

bool is_action_row(const LogRow& row) { return row.action.has_value(); }

bool is_restore_row(const LogRow& row) {
    return row.action && row.action->value("kind", "") == "restore";
}

// Backtrack-mode rows may appear only between a BACKTRACK verdict and the
// recovery marker (or episode end); terminal rows must close the log.
void check_mode_machine(const std::vector<LogRow>& log) {
    bool in_recovery = false;
    for (size_t i = 0; i < log.size(); ++i) {
        const LogRow& row = log[i];
        bool terminal_row = !row.action && row.exec_status &&
                            (*row.exec_status == "DONE" || *row.exec_status == "FAIL" ||
                             *row.exec_status == "BUDGET_EXHAUSTED");
        if (terminal_row) {
            CHECK(i + 1 == log.size());
            continue;
        }
        if (row.mode == "BACKTRACK") CHECK(in_recovery);
        if (row.exec_status && *row.exec_status == "BACKTRACK") in_recovery = true;
        if (row.back_status && *row.back_status == "RECOVERED") in_recovery = false;
    }
}

}  // namespace

TEST_CASE("an episode that starts on the goal ends immediately") {
    WorldSpec w;
    w.category = "A";
    w.start = "p0";
    w.goal.pages = {"p0"};
    testsupport::add_page(w, "p0", {});
    w = testsupport::finish_world(std::move(w));

    EpisodeResult r = run_once(w, make_oracle_policies(w));
    CHECK(r.outcome == Outcome::Done);
    CHECK(r.steps_used == 0);
    CHECK(r.backtrack_attempts == 0);
    REQUIRE(r.log.size() == 1);  // terminal row only
    CHECK(*r.log.front().exec_status == "DONE");
}

TEST_CASE("the step budget caps long chains") {
    GenParams p;
    p.depth = 60;
    p.branching = 1;
    p.seed = 1;
    WorldSpec world = generate_world(p, ScenarioClass::A);
    EpisodeResult r = run_once(world, make_oracle_policies(world));
    CHECK(r.outcome == Outcome::BudgetExhausted);
    CHECK(r.steps_used == 50);
    CHECK(r.diagnostic == "step budget exhausted");
}

TEST_CASE("a single invertible wrong turn costs one backtrack attempt") {
    WorldSpec world = single_decoy_world();
    EpisodeResult r = run_once(world, biased(world, 1));
    CHECK(r.outcome == Outcome::Done);
    CHECK(r.backtrack_attempts == 1);
    CHECK(r.backtrack_successes == 1);
    CHECK(r.backtrack_steps_total == 1);
    CHECK(r.steps_used == 4);  // #go, #menu, inverse, #win

    // One inverse row, one RECOVERED marker, no restores.
    int inverse_rows = 0, recovered = 0, not_recovered = 0;
    for (const auto& row : r.log) {
        if (row.mode == "BACKTRACK" && is_action_row(row)) {
            CHECK(!is_restore_row(row));
            CHECK(row.action->value("kind", "") == "inverse");
            ++inverse_rows;
        }
        if (row.back_status && *row.back_status == "RECOVERED") ++recovered;
        if (row.back_status && *row.back_status == "NOT_RECOVERED") ++not_recovered;
    }
    CHECK(inverse_rows == 1);
    CHECK(recovered == 1);
    CHECK(not_recovered == 0);
    check_mode_machine(r.log);

    // The abandoned path landed in the ledger as its first diverging edge.
    CHECK(r.final_plan.all_completed());
}

TEST_CASE("an irreversible decoy falls back to a checkpoint restore") {
    WorldSpec world = testsupport::irreversible_middle_world();
    EpisodeResult r = run_once(world, biased(world, 3));
    CHECK(r.outcome == Outcome::Done);
    CHECK(r.backtrack_attempts == 1);
    CHECK(r.backtrack_successes == 1);
    CHECK(r.backtrack_steps_total == 1);  // the single d3 -> d2 inverse

    std::vector<std::string> markers;
    int restore_at = -1, recovered_at = -1;
    for (size_t i = 0; i < r.log.size(); ++i) {
        const LogRow& row = r.log[i];
        if (row.back_status) markers.push_back(*row.back_status);
        if (is_restore_row(row)) restore_at = static_cast<int>(i);
        if (row.back_status && *row.back_status == "RECOVERED") recovered_at = static_cast<int>(i);
    }
    CHECK(markers == std::vector<std::string>{"NOT_RECOVERED", "NOT_RECOVERED", "NOT_RECOVERED",
                                              "RECOVERED"});
    REQUIRE(restore_at >= 0);
    CHECK(restore_at < recovered_at);  // ladder: retries, then restore, then the marker
    check_mode_machine(r.log);
}

TEST_CASE("a recovery is followed by a replan at a higher revision") {
    WorldSpec world = testsupport::irreversible_middle_world();
    EpisodeResult r = run_once(world, biased(world, 3));
    REQUIRE(r.outcome == Outcome::Done);

    int revision_at_recovery = -1;
    for (const auto& row : r.log) {
        if (row.back_status && *row.back_status == "RECOVERED") {
            revision_at_recovery = row.plan_revision;
        } else if (revision_at_recovery >= 0 && row.mode == "NORMAL" && is_action_row(row)) {
            CHECK(row.plan_revision > revision_at_recovery);
            break;
        }
    }
    REQUIRE(revision_at_recovery >= 0);
}

TEST_CASE("disabling the tracker freezes the plan at revision zero") {
    GenParams p;
    p.depth = 4;
    p.branching = 2;
    p.seed = 6;
    WorldSpec world = generate_world(p, ScenarioClass::A);
    EpisodeConfig config;
    config.ablation.enable_tracker = false;
    EpisodeResult r = run_once(world, make_oracle_policies(world), config);
    CHECK(r.outcome == Outcome::Done);
    CHECK(r.final_plan.revision == 0);
    for (const auto& row : r.log) CHECK(row.plan_revision == 0);
}

TEST_CASE("disabling backtracking turns the first dead branch fatal") {
    GenParams p;
    p.depth = 4;
    p.branching = 2;
    p.detection_depth = 2;
    p.seed = 3;
    WorldSpec world = generate_world(p, ScenarioClass::B);
    ScriptedPolicyParams params;
    params.wrong_branch_bias = 1.0;
    params.detection_depth = 2;
    EpisodeConfig config;
    config.ablation.enable_backtrack = false;
    Environment env(world);
    EpisodeResult r =
        run_episode(env, make_scripted_policies(world, params), task_for(world), config, "ep");
    CHECK(r.outcome == Outcome::Fail);
    CHECK(r.diagnostic == "backtracking disabled by ablation");
    CHECK(r.backtrack_attempts == 0);
}

TEST_CASE("single-step backtracking cannot escape a deep decoy") {
    WorldSpec world = testsupport::irreversible_middle_world();
    EpisodeConfig config;
    config.ablation.single_step_backtrack = true;
    Environment env(world);
    EpisodeResult r =
        run_episode(env, biased(world, 3), task_for(world), config, "ep");
    CHECK(r.outcome == Outcome::Fail);
    CHECK(r.backtrack_attempts >= 1);
    CHECK(r.backtrack_successes >= 1);  // it does reach the parent, just the wrong one
}

TEST_CASE("an exhausted search space fails without counting an attempt") {
    GenParams p;
    p.depth = 3;
    p.branching = 2;
    p.n_traps = 0;
    p.seed = 9;
    WorldSpec world = generate_world(p, ScenarioClass::U);
    EpisodeResult r = run_once(world, make_oracle_policies(world));
    CHECK(r.outcome == Outcome::Fail);
    CHECK(r.diagnostic == "search space exhausted, no viable ancestor");
    CHECK(r.backtrack_attempts == 0);
    CHECK(r.backtrack_successes == 0);
}

TEST_CASE("backtrack success rate over a mixed suite lands at exactly 0.8") {
    std::vector<EpisodeStats> stats;
    for (uint64_t seed = 0; seed < 4; ++seed) {
        GenParams p;
        p.depth = 4;
        p.branching = 2;
        p.detection_depth = 2;
        p.irreversible_fraction = 0.0;
        p.seed = seed;
        WorldSpec world = generate_world(p, ScenarioClass::B);
        ScriptedPolicyParams params;
        params.wrong_branch_bias = 1.0;
        params.detection_depth = 2;
        EpisodeResult r = run_once(world, make_scripted_policies(world, params));
        REQUIRE(r.outcome == Outcome::Done);
        REQUIRE(r.backtrack_attempts == 1);
        REQUIRE(r.backtrack_successes == 1);
        stats.push_back(stats_from_result("B-s" + std::to_string(seed) + "-full@x", "B", r));
    }

    // Budget dies inside the recovery ladder: one counted attempt, no success.
    WorldSpec world = testsupport::irreversible_middle_world();
    EpisodeConfig starving;
    starving.max_steps = 4;
    EpisodeResult r = run_once(world, biased(world, 3), starving);
    REQUIRE(r.outcome == Outcome::BudgetExhausted);
    REQUIRE(r.backtrack_attempts == 1);
    REQUIRE(r.backtrack_successes == 0);
    stats.push_back(stats_from_result("B-s9-full@x", "B", r));

    Metrics m = compute_metrics(stats);
    CHECK(m.episodes == 5);
    REQUIRE(m.backtrack_success_rate.has_value());
    CHECK(*m.backtrack_success_rate == 0.8);
}

TEST_CASE("configuration bounds are enforced") {
    WorldSpec world = single_decoy_world();
    Environment env(world);
    EpisodeConfig config;
    config.max_steps = 0;
    CHECK_THROWS_AS(run_episode(env, make_oracle_policies(world), task_for(world), config, "ep"),
                    ConfigError);
    config = {};
    config.snapshot_window = 0;
    CHECK_THROWS_AS(run_episode(env, make_oracle_policies(world), task_for(world), config, "ep"),
                    ConfigError);
}

namespace {

struct PokePlanner : Planner {
    Plan plan(const PolicyContext&, const TaskSpec&) override {
        return Plan::fresh({"explore: poke around"});
    }
};

// Ignores the explored set on purpose.
struct FrontExecutor : Executor {
    ActionSpec act(const PolicyContext& ctx, const TaskSpec&) override {
        if (ctx.available.empty()) throw EpisodePolicyError("nowhere to go");
        return ctx.available.front();
    }
};

struct DeadEndTracker : Tracker {
    std::pair<Plan, ExecStatus> track(const PolicyContext& ctx, const TaskSpec& task) override {
        Plan copy = ctx.plan ? *ctx.plan : Plan{};
        if (goal_reachable_page(task, ctx.obs)) return {copy, ExecStatus::Done};
        if (ctx.available.empty()) return {copy, ExecStatus::Backtrack};
        return {copy, ExecStatus::Continue};
    }

    static bool goal_reachable_page(const TaskSpec& task, const Observation& obs) {
        return task.goal.pages.count(obs.page) > 0 &&
               (!task.goal.typed || obs.typed == *task.goal.typed);
    }
};

}  // namespace

TEST_CASE("re-proposing an explored action fails the episode explicitly") {
    WorldSpec w;
    w.category = "A";
    w.start = "p0";
    w.goal.pages = {"g"};
    testsupport::add_page(w, "p0", {{ActionSpec::click("#x"), "d"}, {ActionSpec::click("#y"), "e"}});
    testsupport::add_page(w, "d", {});
    testsupport::add_page(w, "e", {{ActionSpec::click("#z"), "g"}});
    testsupport::add_page(w, "g", {});
    w = testsupport::finish_world(std::move(w));

    Policies policies{std::make_shared<PokePlanner>(), std::make_shared<FrontExecutor>(),
                      std::make_shared<DeadEndTracker>()};
    EpisodeResult r = run_once(w, policies);
    CHECK(r.outcome == Outcome::Fail);
    CHECK(r.diagnostic == "executor proposed an explored or blocked action: click:#x");
    CHECK(r.backtrack_attempts == 1);  // the recovery itself worked
    CHECK(r.backtrack_successes == 1);
}

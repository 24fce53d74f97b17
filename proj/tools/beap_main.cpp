#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beap/errors.hpp"
#include "beap/replay.hpp"
#include "beap/suite.hpp"

namespace fs = std::filesystem;

namespace {

struct GenOptions {
    beap::GenParams params;
    std::string classes = "A,B,C";
    int count = 10;
    std::string out = "worlds";
};

struct RunOptions {
    beap::SuiteConfig config;
    std::string policy = "oracle";
    std::string endpoint;
    double knowledge = 1.0;
    double wrong_branch_bias = 0.0;
    int detection_depth = 1;
    uint64_t policy_seed = 0;
    bool no_backtrack = false;
    bool no_tracker = false;
    bool single_step = false;
};

struct ReplayOptions {
    std::string log_path;
    std::string world_file;
    std::string worlds_dir = ".";
};

struct MetricsOptions {
    std::vector<std::string> logs;
    std::string out_json;
};

std::vector<beap::ScenarioClass> parse_classes(const std::string& csv) {
    std::vector<beap::ScenarioClass> classes;
    std::string token;
    std::istringstream in(csv);
    while (std::getline(in, token, ',')) {
        if (!token.empty()) classes.push_back(beap::scenario_from_string(token));
    }
    if (classes.empty()) throw beap::ConfigError("--classes selects no scenario class");
    return classes;
}

beap::PolicySelection make_selection(const RunOptions& opt) {
    beap::PolicySelection sel;
    if (opt.policy == "oracle") {
        sel.kind = beap::PolicySelection::Kind::Oracle;
    } else if (opt.policy == "scripted") {
        sel.kind = beap::PolicySelection::Kind::Scripted;
        sel.scripted.knowledge = opt.knowledge;
        sel.scripted.wrong_branch_bias = opt.wrong_branch_bias;
        sel.scripted.detection_depth = opt.detection_depth;
        sel.scripted.seed = opt.policy_seed;
        beap::validate_params(sel.scripted);
    } else if (opt.policy == "remote") {
        sel.kind = beap::PolicySelection::Kind::Remote;
        std::string endpoint = opt.endpoint;
        if (const char* env = std::getenv("BEAP_POLICY_ENDPOINT"); env && *env) {
            endpoint = env;
        }
        if (endpoint.empty()) {
            throw beap::ConfigError("remote policy needs --endpoint or BEAP_POLICY_ENDPOINT");
        }
        sel.remote.endpoint = endpoint;
    } else {
        throw beap::ConfigError("unknown policy: " + opt.policy);
    }
    return sel;
}

int cmd_gen(const GenOptions& opt) {
    auto entries = beap::generate_worlds(opt.params, parse_classes(opt.classes), opt.count,
                                         opt.out);
    std::cout << "wrote " << entries.size() << " worlds and manifest.json to " << opt.out << "\n";
    return 0;
}

int cmd_run(RunOptions opt) {
    opt.config.policy = make_selection(opt);
    opt.config.episode.ablation.enable_backtrack = !opt.no_backtrack;
    opt.config.episode.ablation.enable_tracker = !opt.no_tracker;
    opt.config.episode.ablation.single_step_backtrack = opt.single_step;
    beap::SuiteResult result = beap::run_suite(opt.config);
    std::cout << beap::metrics_table(result.metrics);
    for (const auto& e : result.episodes) {
        if (e.stats.outcome != beap::Outcome::Done && !e.diagnostic.empty()) {
            std::cout << e.stats.episode_id << ": " << e.diagnostic << "\n";
        }
    }
    return 0;
}

int cmd_ablate(RunOptions opt) {
    opt.config.policy = make_selection(opt);
    beap::AblationResult result = beap::run_ablations(opt.config);
    std::cout << beap::ablation_table(result);
    return 0;
}

int cmd_replay(const ReplayOptions& opt) {
    auto rows = beap::rows_from_jsonl_file(opt.log_path);
    if (rows.empty()) throw beap::ConfigError("log has no rows: " + opt.log_path);

    fs::path world_path;
    if (!opt.world_file.empty()) {
        world_path = opt.world_file;
    } else {
        std::string digest = beap::digest_from_episode_id(rows.front().episode_id);
        if (digest.empty()) {
            throw beap::ConfigError("episode id carries no world digest; pass --world");
        }
        world_path = fs::path(opt.worlds_dir) / ("world-" + digest + ".json");
    }
    std::ifstream in(world_path);
    if (!in) throw beap::ConfigError("cannot open world file: " + world_path.string());
    nlohmann::json wj;
    in >> wj;
    beap::WorldSpec world = beap::world_from_json(wj);

    beap::ReplayReport report = beap::replay_log(rows, world);
    if (report.clean) {
        std::cout << "CLEAN\n";
        return 0;
    }
    std::cout << "DIVERGENCE at line " << report.divergence_line << ": " << report.detail << "\n";
    return 3;
}

int cmd_metrics(const MetricsOptions& opt) {
    std::vector<std::string> files;
    for (const auto& arg : opt.logs) {
        if (fs::is_directory(arg)) {
            for (const auto& entry : fs::directory_iterator(arg)) {
                if (entry.path().extension() == ".jsonl") files.push_back(entry.path().string());
            }
        } else {
            files.push_back(arg);
        }
    }
    if (files.empty()) throw beap::ConfigError("no JSONL logs found");
    std::sort(files.begin(), files.end());

    std::vector<beap::EpisodeStats> stats;
    for (const auto& file : files) {
        stats.push_back(beap::stats_from_rows(beap::rows_from_jsonl_file(file)));
    }
    beap::Metrics metrics = beap::compute_metrics(stats);
    std::cout << beap::metrics_table(metrics);
    if (!opt.out_json.empty()) {
        std::ofstream out(opt.out_json, std::ios::binary | std::ios::trunc);
        if (!out) throw beap::ConfigError("cannot write " + opt.out_json);
        out << beap::metrics_to_json(metrics).dump(2) << "\n";
    }
    return 0;
}

void add_run_flags(CLI::App* cmd, RunOptions& opt, bool with_ablation_flags) {
    cmd->add_option("--manifest", opt.config.manifest_path, "world manifest path")->required();
    cmd->add_option("--out", opt.config.out_dir, "output directory")->required();
    cmd->add_option("--seed", opt.config.episode.seed, "episode seed");
    cmd->add_option("--max-steps", opt.config.episode.max_steps, "step budget per episode");
    cmd->add_option("--retries", opt.config.episode.max_backtrack_retries,
                    "inverse-walk retries per backtrack");
    cmd->add_option("--snapshot-window", opt.config.episode.snapshot_window,
                    "checkpoint sliding-window size");
    cmd->add_option("--parallelism", opt.config.parallelism, "worker threads");
    cmd->add_option("--policy", opt.policy, "oracle | scripted | remote");
    cmd->add_option("--endpoint", opt.endpoint, "remote policy endpoint URL");
    cmd->add_option("--knowledge", opt.knowledge, "scripted: revealed fraction of the route");
    cmd->add_option("--wrong-branch-bias", opt.wrong_branch_bias,
                    "scripted: probability of taking a decoy edge");
    cmd->add_option("--detection-depth", opt.detection_depth,
                    "scripted: dead-branch detection delay k");
    cmd->add_option("--policy-seed", opt.policy_seed, "scripted: RNG seed");
    if (with_ablation_flags) {
        cmd->add_flag("--no-backtrack", opt.no_backtrack, "disable backtracking");
        cmd->add_flag("--no-tracker", opt.no_tracker, "disable the tracker");
        cmd->add_flag("--single-step", opt.single_step,
                      "backtrack only to the immediate parent");
        cmd->add_option("--arm", opt.config.arm, "label baked into episode ids");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DFS-backtracking GUI-task simulator"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate seeded worlds and a manifest");
    gen_cmd->add_option("--classes", gen.classes, "comma-separated scenario classes (A,B,C,U)");
    gen_cmd->add_option("--count", gen.count, "worlds per class");
    gen_cmd->add_option("--out", gen.out, "output directory");
    gen_cmd->add_option("--seed", gen.params.seed, "base seed (world i uses seed+i)");
    gen_cmd->add_option("--depth", gen.params.depth, "solution path length");
    gen_cmd->add_option("--branching", gen.params.branching, "dead-end branches per page");
    gen_cmd->add_option("--n-traps", gen.params.n_traps, "trap pages");
    gen_cmd->add_option("--irreversible-fraction", gen.params.irreversible_fraction,
                        "fraction of edges without an inverse");
    gen_cmd->add_option("--detection-depth", gen.params.detection_depth,
                        "class B decoy length k");

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "run the suite over a manifest");
    add_run_flags(run_cmd, run, true);

    RunOptions ablate;
    auto* ablate_cmd = app.add_subcommand("ablate", "run full / no-backtrack / no-tracker arms");
    add_run_flags(ablate_cmd, ablate, false);

    ReplayOptions replay;
    auto* replay_cmd = app.add_subcommand("replay", "re-execute a log and verify it");
    replay_cmd->add_option("log", replay.log_path, "JSONL trajectory log")->required();
    replay_cmd->add_option("--world", replay.world_file, "world file (overrides --worlds)");
    replay_cmd->add_option("--worlds", replay.worlds_dir,
                           "directory with content-addressed world files");

    MetricsOptions metrics;
    auto* metrics_cmd = app.add_subcommand("metrics", "recompute metrics from JSONL logs");
    metrics_cmd->add_option("logs", metrics.logs, "log files or directories")->required();
    metrics_cmd->add_option("--out", metrics.out_json, "also write metrics JSON here");

    try {
        app.parse(argc, argv);
        if (gen_cmd->parsed()) return cmd_gen(gen);
        if (run_cmd->parsed()) return cmd_run(run);
        if (ablate_cmd->parsed()) return cmd_ablate(ablate);
        if (replay_cmd->parsed()) return cmd_replay(replay);
        if (metrics_cmd->parsed()) return cmd_metrics(metrics);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const beap::ReplayWorldMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const beap::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const beap::GenParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const beap::Error& e) {
        std::cerr << "suite failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

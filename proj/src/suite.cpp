#include "beap/suite.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "beap/errors.hpp"
#include "beap/oracle_policy.hpp"

namespace fs = std::filesystem;

namespace beap {

namespace {

nlohmann::json params_to_json(const GenParams& p) {
    return {{"branching", p.branching},
            {"depth", p.depth},
            {"detection_depth", p.detection_depth},
            {"irreversible_fraction", p.irreversible_fraction},
            {"n_traps", p.n_traps},
            {"seed", p.seed}};
}

GenParams params_from_json(const nlohmann::json& j) {
    GenParams p;
    p.branching = j.at("branching").get<int>();
    p.depth = j.at("depth").get<int>();
    p.detection_depth = j.at("detection_depth").get<int>();
    p.irreversible_fraction = j.at("irreversible_fraction").get<double>();
    p.n_traps = j.at("n_traps").get<int>();
    p.seed = j.at("seed").get<uint64_t>();
    return p;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
}

Policies make_policies(const PolicySelection& selection, const WorldSpec& world,
                       uint64_t episode_seed) {
    switch (selection.kind) {
        case PolicySelection::Kind::Oracle:
            return make_oracle_policies(world);
        case PolicySelection::Kind::Scripted: {
            ScriptedPolicyParams params = selection.scripted;
            params.seed ^= episode_seed * 0x9e3779b97f4a7c15ull;
            return make_scripted_policies(world, params);
        }
        case PolicySelection::Kind::Remote:
            return make_remote_policies(selection.remote);
    }
    throw ConfigError("unknown policy selection");
}

}  // namespace

std::vector<ManifestEntry> generate_worlds(const GenParams& base,
                                           const std::vector<ScenarioClass>& classes, int count,
                                           const std::string& out_dir) {
    if (count < 1) throw ConfigError("world count must be >= 1");
    fs::create_directories(out_dir);
    std::vector<ManifestEntry> entries;
    for (auto cls : classes) {
        for (int i = 0; i < count; ++i) {
            GenParams params = base;
            params.seed = base.seed + static_cast<uint64_t>(i);
            WorldSpec world = generate_world(params, cls);
            std::string digest = world_digest(world);
            std::string file = "world-" + digest.substr(0, 16) + ".json";
            write_text_file(fs::path(out_dir) / file, world_to_json(world).dump(2) + "\n");
            entries.push_back({to_string(cls), digest, file, params.seed, params});
        }
    }
    nlohmann::json manifest;
    nlohmann::json worlds = nlohmann::json::array();
    for (const auto& e : entries) {
        worlds.push_back({{"class", e.cls},
                          {"digest", e.digest},
                          {"file", e.file},
                          {"params", params_to_json(e.params)},
                          {"seed", e.seed}});
    }
    manifest["worlds"] = worlds;
    write_text_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    return entries;
}

std::vector<ManifestEntry> read_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("cannot open manifest: " + manifest_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad manifest: " + std::string(e.what()));
    }
    std::vector<ManifestEntry> entries;
    for (const auto& wj : j.at("worlds")) {
        ManifestEntry e;
        e.cls = wj.at("class").get<std::string>();
        e.digest = wj.at("digest").get<std::string>();
        e.file = wj.at("file").get<std::string>();
        e.seed = wj.at("seed").get<uint64_t>();
        e.params = params_from_json(wj.at("params"));
        entries.push_back(std::move(e));
    }
    return entries;
}

WorldSpec load_world(const std::string& manifest_path, const ManifestEntry& entry) {
    fs::path dir = fs::path(manifest_path).parent_path();
    std::ifstream in(dir / entry.file);
    if (!in) throw ConfigError("cannot open world file: " + (dir / entry.file).string());
    nlohmann::json j;
    in >> j;
    WorldSpec world = world_from_json(j);
    if (world_digest(world) != entry.digest) {
        throw ConfigError("world file " + entry.file + " does not match its manifest digest");
    }
    return world;
}

SuiteResult run_suite(const SuiteConfig& config) {
    auto entries = read_manifest(config.manifest_path);
    if (entries.empty()) throw ConfigError("manifest lists no worlds");
    if (config.parallelism < 1 || config.parallelism > 256) {
        throw ConfigError("parallelism must be in [1,256]");
    }
    fs::create_directories(config.out_dir);

    std::vector<SuiteEpisode> episodes(entries.size());
    std::atomic<size_t> next{0};

    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= entries.size()) return;
            const ManifestEntry& entry = entries[i];
            std::string episode_id = entry.cls + "-s" + std::to_string(entry.seed) + "-" +
                                     config.arm + "@" + entry.digest.substr(0, 16);
            SuiteEpisode& out = episodes[i];
            out.log_file = episode_id + ".jsonl";
            try {
                WorldSpec world = load_world(config.manifest_path, entry);
                Environment env(world);
                Policies policies =
                    make_policies(config.policy, world, entry.seed ^ config.episode.seed);
                TaskSpec task{"reach the goal page" +
                                  std::string(world.goal.typed ? " with the required text" : ""),
                              world.goal};
                EpisodeResult result = run_episode(env, policies, task, config.episode, episode_id);
                write_jsonl_file((fs::path(config.out_dir) / out.log_file).string(), result.log);
                out.stats = stats_from_result(episode_id, entry.cls, result);
                out.diagnostic = result.diagnostic;
            } catch (const std::exception& e) {
                // Crashed episodes are failures, the suite keeps going.
                out.stats.episode_id = episode_id;
                out.stats.category = entry.cls;
                out.stats.outcome = Outcome::Fail;
                out.diagnostic = std::string("episode crashed: ") + e.what();
                LogRow row;
                row.episode_id = episode_id;
                row.mode = to_string(Mode::Normal);
                row.exec_status = to_string(Outcome::Fail);
                write_jsonl_file((fs::path(config.out_dir) / out.log_file).string(), {row});
            }
        }
    };

    std::vector<std::thread> pool;
    int n_workers = std::min<int>(config.parallelism, static_cast<int>(entries.size()));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    SuiteResult result;
    result.episodes = std::move(episodes);
    std::vector<EpisodeStats> stats;
    for (const auto& e : result.episodes) stats.push_back(e.stats);
    result.metrics = compute_metrics(stats);

    nlohmann::json summary;
    summary["arm"] = config.arm;
    summary["manifest"] = config.manifest_path;
    summary["metrics"] = metrics_to_json(result.metrics);
    nlohmann::json eps = nlohmann::json::array();
    for (const auto& e : result.episodes) {
        eps.push_back({{"backtrack_attempts", e.stats.backtrack_attempts},
                       {"backtrack_steps_total", e.stats.backtrack_steps_total},
                       {"backtrack_successes", e.stats.backtrack_successes},
                       {"category", e.stats.category},
                       {"diagnostic", e.diagnostic},
                       {"episode_id", e.stats.episode_id},
                       {"log", e.log_file},
                       {"outcome", to_string(e.stats.outcome)},
                       {"steps_used", e.stats.steps_used}});
    }
    summary["episodes"] = eps;
    write_text_file(fs::path(config.out_dir) / ("summary-" + config.arm + ".json"),
                    summary.dump(2) + "\n");
    write_text_file(fs::path(config.out_dir) / ("summary-" + config.arm + ".txt"),
                    metrics_table(result.metrics));
    write_text_file(fs::path(config.out_dir) / ("per_category-" + config.arm + ".csv"),
                    per_category_csv(result.metrics));
    return result;
}

AblationResult run_ablations(const SuiteConfig& base) {
    AblationResult r;
    SuiteConfig cfg = base;

    cfg.arm = "full";
    cfg.episode.ablation = AblationFlags{};
    r.full = run_suite(cfg);

    cfg.arm = "no-backtrack";
    cfg.episode.ablation = AblationFlags{};
    cfg.episode.ablation.enable_backtrack = false;
    r.no_backtrack = run_suite(cfg);

    cfg.arm = "no-tracker";
    cfg.episode.ablation = AblationFlags{};
    cfg.episode.ablation.enable_tracker = false;
    r.no_tracker = run_suite(cfg);

    write_text_file(fs::path(base.out_dir) / "ablation.txt", ablation_table(r));
    write_text_file(fs::path(base.out_dir) / "ablation.json", ablation_json(r).dump(2) + "\n");
    return r;
}

namespace {

std::string fmt_opt(const std::optional<double>& v) {
    if (!v) return "null";
    std::ostringstream out;
    out.precision(4);
    out << std::fixed << *v;
    return out.str();
}

int done_count(const SuiteResult& r) {
    int done = 0;
    for (const auto& e : r.episodes) {
        if (e.stats.outcome == Outcome::Done) ++done;
    }
    return done;
}

}  // namespace

std::string ablation_table(const AblationResult& r) {
    std::ostringstream out;
    auto row = [&](const std::string& name, const SuiteResult& s) {
        out << name;
        for (size_t i = name.size(); i < 16; ++i) out << ' ';
        out << done_count(s) << "/" << s.metrics.episodes
            << "  accuracy=" << fmt_opt(s.metrics.accuracy)
            << "  task_rate=" << fmt_opt(s.metrics.backtracking_task_rate)
            << "  success_rate=" << fmt_opt(s.metrics.backtrack_success_rate)
            << "  avg_steps=" << fmt_opt(s.metrics.avg_backtrack_steps) << "\n";
    };
    row("full", r.full);
    row("w/o Backtrack", r.no_backtrack);
    row("w/o Tracker", r.no_tracker);
    return out.str();
}

nlohmann::json ablation_json(const AblationResult& r) {
    return {{"full", metrics_to_json(r.full.metrics)},
            {"no_backtrack", metrics_to_json(r.no_backtrack.metrics)},
            {"no_tracker", metrics_to_json(r.no_tracker.metrics)}};
}

}  // namespace beap

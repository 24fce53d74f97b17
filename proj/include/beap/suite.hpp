#pragma once

#include <string>
#include <vector>

#include "beap/episode.hpp"
#include "beap/metrics.hpp"
#include "beap/remote_policy.hpp"
#include "beap/scripted_policy.hpp"
#include "beap/worldgen.hpp"

namespace beap {

struct PolicySelection {
    enum class Kind { Oracle, Scripted, Remote };
    Kind kind = Kind::Scripted;
    ScriptedPolicyParams scripted;
    RemoteConfig remote;
};

struct ManifestEntry {
    std::string cls;
    std::string digest;
    std::string file;  // relative to the manifest directory
    uint64_t seed = 0;
    GenParams params;
};

struct SuiteConfig {
    std::string manifest_path;
    EpisodeConfig episode;
    PolicySelection policy;
    int parallelism = 1;
    std::string out_dir;       // per-episode logs + summaries land here
    std::string arm = "full";  // label baked into episode ids and file names
};

struct SuiteEpisode {
    EpisodeStats stats;
    std::string log_file;
    std::string diagnostic;
};

struct SuiteResult {
    Metrics metrics;
    std::vector<SuiteEpisode> episodes;
};

// Generates `count` worlds per class into out_dir and writes manifest.json.
// World files are content-addressed (world-<digest16>.json).
std::vector<ManifestEntry> generate_worlds(const GenParams& base,
                                           const std::vector<ScenarioClass>& classes, int count,
                                           const std::string& out_dir);

std::vector<ManifestEntry> read_manifest(const std::string& manifest_path);
WorldSpec load_world(const std::string& manifest_path, const ManifestEntry& entry);

// Runs every manifest world under the configured policy, writes one JSONL log
// per episode plus summary.json / summary.txt / per_category.csv, and returns
// the aggregate. Episode crashes are recorded as FAIL; the suite continues.
SuiteResult run_suite(const SuiteConfig& config);

// Full pipeline vs the two ablations, same worlds and seeds; emits
// ablation.json and ablation.txt comparison tables into out_dir.
struct AblationResult {
    SuiteResult full;
    SuiteResult no_backtrack;
    SuiteResult no_tracker;
};
AblationResult run_ablations(const SuiteConfig& base);

std::string ablation_table(const AblationResult& r);
nlohmann::json ablation_json(const AblationResult& r);

}  // namespace beap

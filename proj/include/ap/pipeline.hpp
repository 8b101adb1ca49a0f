#pragma once
// Experiment orchestration: the three-step training pipeline, artifact
// persistence, and loaders that verify config-hash compatibility.

#include "ap/config.hpp"
#include "ap/detector.hpp"
#include "ap/explorer.hpp"
#include "ap/graph.hpp"
#include "ap/policy.hpp"

#include <filesystem>
#include <optional>

namespace ap {

struct PipelineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace artifact_files {
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kSchema = "schema.json";
inline constexpr const char* kDetector = "detector.json";
inline constexpr const char* kGraph = "graph.json";
inline constexpr const char* kPolicy = "policy.json";
inline constexpr const char* kExplorerPolicy = "explorer_policy.json";
inline constexpr const char* kBaseline = "baseline.json";
inline constexpr const char* kAttempts = "attempts.csv";
inline constexpr const char* kTraces = "traces.jsonl";
inline constexpr const char* kGraphStats = "graph_stats.json";
}  // namespace artifact_files

struct PipelineSummary {
    std::string config_hash;
    int graph_nodes = 0;
    int explore_edges = 0;
    int attempt_edges = 0;
    int64_t explore_transitions = 0;
    double detector_holdout_error = 0.0;
};

// Steps 1-3: detector, exploration, policy + transition statistics. Writes
// schema, detector, graph, policy, attempt log, optional traces, manifest.
PipelineSummary run_pipeline(const ExperimentConfig& cfg, const std::filesystem::path& dir);

// individual stages (the CLI verbs call these)
Detector stage_fit_detector(const ExperimentConfig& cfg, const Env& env);
ExploreSummary stage_explore(const ExperimentConfig& cfg, const Env& env, const Detector& det,
                             TransitionGraph& graph);
GoalPolicy stage_phase3(const ExperimentConfig& cfg, const Env& env, const Detector& det,
                        TransitionGraph& graph, const std::filesystem::path& dir);

// reactive baseline training, saved alongside the pipeline artifacts
void train_and_save_baseline(const ExperimentConfig& cfg, const std::filesystem::path& dir);

// artifact IO
void write_text(const std::filesystem::path& p, const std::string& text);
std::string read_text(const std::filesystem::path& p);
TransitionGraph load_graph(const ExperimentConfig& cfg, const std::filesystem::path& dir);
Detector load_detector(const ExperimentConfig& cfg, const Env& env,
                       const std::filesystem::path& dir);
GoalPolicy load_policy(const ExperimentConfig& cfg, const Env& env,
                       const std::filesystem::path& dir, const char* file, const char* name);
std::vector<EpisodeTrace> load_traces(const Env& env, const std::filesystem::path& dir);

}  // namespace ap

#pragma once
// Metrics export: per-task CSV rows, aggregate summaries, graph statistics.

#include "ap/config.hpp"
#include "ap/evaluate.hpp"
#include "ap/graph.hpp"

#include <filesystem>

namespace ap {

struct MetricsFiles {
    std::filesystem::path csv;
    std::filesystem::path summary;
};

MetricsFiles export_metrics(const EvalResult& result, const std::filesystem::path& dir);

// parse a results CSV back (config hash from the header comment)
std::vector<TaskOutcome> read_results_csv(const std::filesystem::path& csv,
                                          std::string* config_hash);

// node/edge counts and the per-edge probability histogram
std::string graph_stats_json(const TransitionGraph& g, const ExperimentConfig& cfg);

}  // namespace ap

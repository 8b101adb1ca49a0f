#pragma once
// Evaluation suites: run tasks with the planner (full or ablated edge
// probabilities) or the reactive baseline under a fixed step budget.

#include "ap/config.hpp"
#include "ap/tasks.hpp"

#include <filesystem>

namespace ap {

struct TaskOutcome {
    int index = 0;
    uint64_t env_seed = 0;
    bool success = false;       // agent's detector verdict
    bool true_success = false;  // ground-truth goal satisfaction at the final state
    int steps = 0;
    int replans = 0;
    double plan_cost = 0.0;
    double plan_prob = 0.0;
    std::string reason;
};

struct EvalResult {
    std::string mode;  // ap | ap-ablated | baseline
    std::string kind;
    std::string config_hash;
    uint64_t seed = 0;
    std::vector<TaskOutcome> outcomes;
    int excluded_presolved = 0;
    double success_rate = 0.0;           // mean of true_success
    double detected_success_rate = 0.0;  // mean of success
    double mean_steps = 0.0;
    double mean_replans = 0.0;

    void finalize();
};

EvalResult evaluate(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                    const std::string& kind, const std::string& mode);

// evaluation over explicit tasks (acceptance suites reuse task sets)
EvalResult evaluate_tasks(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                          const std::vector<Task>& tasks, const std::string& kind,
                          const std::string& mode);

}  // namespace ap

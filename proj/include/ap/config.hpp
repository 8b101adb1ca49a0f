#pragma once
// Experiment configuration: versioned JSON document, strict about unknown
// keys, hashed for artifact compatibility checks.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ap {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    uint64_t seed = 1;

    struct EnvCfg {
        std::string name = "switches";
        int grid = 6;
    } env;

    struct DetectorCfg {
        std::string mode = "exact";  // exact | learned | noisy
        double epsilon = 0.0;
        int labeled_examples = 10000;
        int epochs = 8;
        double lr = 0.5;
    } detector;

    struct ExploreCfg {
        int64_t steps = 100000;  // N1
        std::string policy = "count";  // count | random
        std::string bonus = "smoothed";  // smoothed | sqrt
        int episode_horizon = 80;
        double lr = 0.01;
        double entropy_coef = 0.02;
    } explore;

    struct Phase3Cfg {
        int64_t steps = 400000;  // N2
        int t_max = 80;
        int attempt_t_max = 0;  // 0: same as t_max; blocks uses 1
        int max_legs = 1;       // goal attempts chained per episode
        double gamma = 0.9;
        int64_t epoch_attempts = 2000;
        double min_attempts = 3.0;
        double lr = 0.05;
        double entropy_coef = 0.01;  // annealed to 0 over training
        int64_t inverse_examples = 400000;  // blocks only
        int inverse_epochs = 3;
        double inverse_lr = 0.001;  // Adam step size
        bool log_traces = false;
    } phase3;

    struct PolicyCfg {
        int hidden1 = 100;
        int hidden2 = 100;
    } policy;

    struct RewardsCfg {
        double success = 1.0;
        double step = -0.1;
    } rewards;

    struct BaselineCfg {
        int64_t steps = 400000;
        std::string mode = "curriculum";  // curriculum | test-tasks
        double lr = 0.05;
        double entropy_coef = 0.01;
    } baseline;

    struct EvalCfg {
        int tasks = 1000;
        int budget_factor = 10;  // budget = budget_factor * t_max
    } eval;

    int attempt_t_max_effective() const {
        return phase3.attempt_t_max > 0 ? phase3.attempt_t_max : phase3.t_max;
    }
    int eval_budget() const { return eval.budget_factor * phase3.t_max; }

    void validate() const;
    std::string to_json() const;  // canonical, key-sorted
    std::string hash() const;     // hex fnv1a64 of the canonical form
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::string& path);
};

}  // namespace ap

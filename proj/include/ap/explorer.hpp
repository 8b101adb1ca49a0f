#pragma once
// Phase-2 exploration: random or count-based exploratory policies populating
// the exploration transition counts.

#include "ap/detector.hpp"
#include "ap/graph.hpp"
#include "ap/policy.hpp"

#include <optional>

namespace ap {

enum class BonusKind { kSmoothed, kSqrt };
enum class ExplorePolicyKind { kRandom, kCount };

// (count/total + 0.001)^-0.5, with count/total taken as 0 when total is 0.
// Evaluated on pre-increment counts so the first traversal earns the maximum.
double smoothed_bonus(int64_t count, int64_t total);
// (count+1)^-0.5 on the pre-increment count; first traversal earns 1.
double sqrt_bonus(int64_t count);

struct ExploreConfig {
    int64_t steps = 100000;  // N1, total environment steps
    int episode_horizon = 80;
    ExplorePolicyKind policy = ExplorePolicyKind::kCount;
    BonusKind bonus = BonusKind::kSmoothed;
    double lr = 0.01;
    // keeps the pure-exploration policy stochastic; with intrinsic-only
    // rewards a plain Reinforce learner collapses to a deterministic loop
    double entropy_coef = 0.02;
    int hidden1 = 100;
    int hidden2 = 100;
    uint64_t seed = 0;
};

struct ExploreSummary {
    int64_t steps = 0;
    int64_t transitions = 0;
    int distinct_edges = 0;
    std::optional<GoalPolicy> exploratory_policy;
};

// Runs episodes for cfg.steps total env steps; every observed attribute
// change increments the graph's exploration counts. The count-based policy is
// updated online with the intrinsic bonus (0 reward elsewhere).
ExploreSummary explore(const Env& env, const Detector& detector, const ExploreConfig& cfg,
                       TransitionGraph& graph);

}  // namespace ap

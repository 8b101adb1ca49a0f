#pragma once
// Replanning executor (inference loop): detect attributes, plan, follow the
// low-level policy toward the first plan node, recompute on deviation.

#include "ap/detector.hpp"
#include "ap/graph.hpp"
#include "ap/planner.hpp"
#include "ap/policy.hpp"

namespace ap {

struct ExecOutcome {
    bool success = false;  // detector-judged: detect(final) satisfies the goal
    std::string reason;    // "", "unreachable", "budget"
    int steps = 0;
    int replans = 0;
    double first_plan_cost = 0.0;
    double first_plan_prob = 0.0;
    AttributeVector final_detected;
    EnvState final_state;
    EpisodeTrace trace;  // filled when log_trace
};

ExecOutcome execute(const Env& env, const Detector& detector, const GoalPolicy& policy,
                    const PlannerIndex& index, const EnvState& start, const GoalSpec& goal,
                    int budget, int leg_t_max, Rng& rng, bool log_trace = false);

}  // namespace ap

#pragma once
// Evaluation task generators and the curriculum samplers used to train the
// reactive baseline. Task goals are ground-truth properties (the task
// specification comes from the user, not the agent's detector).

#include "ap/env.hpp"
#include "ap/policy.hpp"

namespace ap {

struct Task {
    uint64_t env_seed = 0;
    GoalSpec goal;
};

// kinds: multi-step (all envs), 4-stack and underspecified (blocks),
// unit-goal (crafting). Pre-solved tasks (goal already satisfied at reset,
// judged on true attributes) are rejected at generation.
std::vector<Task> generate_tasks(const Env& env, const std::string& kind, int count,
                                 uint64_t seed);

// number of attribute transitions the task needs (curriculum difficulty)
int task_difficulty(const Env& env, const EnvState& start, const GoalSpec& goal);
int max_task_difficulty(const Env& env, const std::string& kind);

// sampler over fresh worlds for baseline training; curriculum mode caps the
// sampled difficulty linearly in training progress
TaskSampler make_task_sampler(const Env& env, const std::string& kind, bool curriculum);

// fixed goal of the 4-stack task: red on green on blue on yellow, one column
GoalSpec four_stack_goal(const Env& blocks_env);

}  // namespace ap

#pragma once
// Goal-conditional low-level policy and its Reinforce learner, the supervised
// inverse model used for the blocks world, and the reactive baseline trained
// directly on evaluation tasks.

#include "ap/core.hpp"
#include "ap/detector.hpp"
#include "ap/env.hpp"
#include "ap/mlp.hpp"

#include <functional>

namespace ap {

struct RewardConfig {
    double success = 1.0;
    double step = -0.1;
    int t_max = 80;
};

// Input assembly: env indicator features (sparse) ++ dense tail. The tail is
// [current attributes | goal mask | goal values] with the first two sections
// optional; the inverse model sees only the goal values.
struct PolicyLayout {
    bool use_current = true;
    bool use_goal_mask = true;

    int tail_dim(int attr_len) const {
        return attr_len * (1 + (use_current ? 1 : 0) + (use_goal_mask ? 1 : 0));
    }
};

class GoalPolicy {
public:
    GoalPolicy() = default;
    GoalPolicy(const Env& env, PolicyLayout layout, int hidden1, int hidden2, Rng& rng);

    const PolicyLayout& layout() const { return layout_; }
    const Mlp& net() const { return net_; }
    Mlp& net() { return net_; }
    int attr_len() const { return attr_len_; }

    void assemble_tail(const AttributeVector& current, const GoalSpec& goal,
                       std::vector<double>& tail) const;

    int act(std::span<const int> active, const AttributeVector& current, const GoalSpec& goal,
            Rng& rng, bool greedy = false) const;

    std::vector<double> action_probs(std::span<const int> active, const AttributeVector& current,
                                     const GoalSpec& goal) const;

    std::string to_json(const std::string& name, const std::string& config_hash) const;
    static GoalPolicy from_json(const Env& env, const std::string& text, const std::string& name,
                                const std::string& config_hash);

private:
    Mlp net_;
    PolicyLayout layout_;
    int attr_len_ = 0;
};

// one acted step of a goal attempt, with the forward pass cached for backprop
struct LegStep {
    std::vector<int> active;
    std::vector<double> tail;
    Mlp::Forward fwd;
    int action = 0;
    double reward = 0.0;
};

struct EmaBaseline {
    double decay = 0.99;
    double value = 0.0;
    bool initialized = false;

    void observe(double g) {
        if (!initialized) {
            value = g;
            initialized = true;
        } else {
            value = decay * value + (1.0 - decay) * g;
        }
    }
};

// theta += lr * sum_t [(G_t - baseline) d log pi(a_t) + entropy_coef dH(pi)];
// G_t is the undiscounted return-to-go. Returns the episode return G_0. The
// entropy term is used only by the pure-exploration learner (0 elsewhere).
double reinforce_apply(Mlp& net, const std::vector<LegStep>& steps, double baseline, double lr,
                       Mlp::Grad& scratch, double entropy_coef = 0.0);

// Spec-level wrapper over an EpisodeTrace (reconstructs features via the env).
void reinforce_update(GoalPolicy& policy, const Env& env, const EpisodeTrace& episode,
                      double baseline, double lr);

// Per-leg Reinforce step used by the training loops. Plain per-step
// advantages against the running return baseline collapse the softmax within
// a few hundred legs at these reward scales, so advantages are normalized by
// a running magnitude, clipped, and averaged over the leg; an entropy bonus
// (annealed by the caller) keeps the policy stochastic while it learns.
class LegUpdater {
public:
    LegUpdater(Mlp& net, double lr) : net_(&net), lr_(lr), scratch_(net.shape()) {}

    // lr_scale lets the caller anneal the step size over training
    void update(const std::vector<LegStep>& steps, double entropy_coef, double lr_scale = 1.0);
    double baseline() const { return ema_.value; }

private:
    Mlp* net_;
    double lr_;
    Mlp::Grad scratch_;
    EmaBaseline ema_;
    double adv_scale_ = 1.0;
};

// --- inverse model ---------------------------------------------------------

struct InverseExample {
    std::vector<int> active;     // features of the initial state
    AttributeVector next_attrs;  // attributes after the action
    int action = 0;
};

struct InverseTrainConfig {
    int epochs = 3;
    double lr = 0.05;
    int hidden1 = 100;
    int hidden2 = 100;
    uint64_t seed = 0;
};

struct InverseTrainResult {
    GoalPolicy policy;
    std::vector<double> epoch_nll;  // mean cross-entropy per epoch
};

InverseTrainResult train_inverse_model(const Env& env, const std::vector<InverseExample>& data,
                                       const InverseTrainConfig& cfg);

// --- reactive baseline ------------------------------------------------------

struct TrainTask {
    EnvState start;
    GoalSpec goal;
};

// progress in [0,1]; curriculum samplers raise difficulty with progress
using TaskSampler = std::function<TrainTask(Rng&, double progress)>;

struct BaselineTrainConfig {
    int64_t steps = 500000;
    double lr = 0.05;
    double entropy_coef = 0.01;  // annealed to 0 over training
    int hidden1 = 100;
    int hidden2 = 100;
    RewardConfig rewards;
    uint64_t seed = 0;
};

GoalPolicy train_reactive_baseline(const Env& env, const Detector& detector,
                                   const TaskSampler& sampler, const BaselineTrainConfig& cfg);

}  // namespace ap

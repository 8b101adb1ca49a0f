#include "ap/policy.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace ap {

GoalPolicy::GoalPolicy(const Env& env, PolicyLayout layout, int hidden1, int hidden2, Rng& rng)
    : layout_(layout), attr_len_(static_cast<int>(env.schema().length())) {
    MlpShape shape;
    shape.vocab = env.feature_dim();
    shape.tail = layout.tail_dim(attr_len_);
    shape.hidden1 = hidden1;
    shape.hidden2 = hidden2;
    shape.outputs = env.action_count();
    net_ = Mlp(shape);
    net_.init_weights(rng);
}

void GoalPolicy::assemble_tail(const AttributeVector& current, const GoalSpec& goal,
                               std::vector<double>& tail) const {
    const auto len = static_cast<std::size_t>(attr_len_);
    tail.assign(static_cast<std::size_t>(layout_.tail_dim(attr_len_)), 0.0);
    std::size_t off = 0;
    if (layout_.use_current) {
        for (std::size_t i = 0; i < len; ++i) tail[off + i] = current[i];
        off += len;
    }
    if (layout_.use_goal_mask) {
        for (std::size_t i = 0; i < len; ++i) tail[off + i] = goal.mask()[i];
        off += len;
    }
    for (std::size_t i = 0; i < len; ++i) tail[off + i] = goal.values()[i];
}

int GoalPolicy::act(std::span<const int> active, const AttributeVector& current,
                    const GoalSpec& goal, Rng& rng, bool greedy) const {
    std::vector<double> tail;
    assemble_tail(current, goal, tail);
    Mlp::Forward f;
    net_.forward(active, tail, f);
    if (greedy) {
        return static_cast<int>(std::max_element(f.probs.begin(), f.probs.end()) -
                                f.probs.begin());
    }
    const double r = rng.next_double();
    double acc = 0.0;
    for (std::size_t a = 0; a < f.probs.size(); ++a) {
        acc += f.probs[a];
        if (r < acc) return static_cast<int>(a);
    }
    return static_cast<int>(f.probs.size()) - 1;
}

std::vector<double> GoalPolicy::action_probs(std::span<const int> active,
                                             const AttributeVector& current,
                                             const GoalSpec& goal) const {
    std::vector<double> tail;
    assemble_tail(current, goal, tail);
    Mlp::Forward f;
    net_.forward(active, tail, f);
    return f.probs;
}

std::string GoalPolicy::to_json(const std::string& name, const std::string& config_hash) const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["config_hash"] = config_hash;
    j["layout"] = {{"use_current", layout_.use_current}, {"use_goal_mask", layout_.use_goal_mask}};
    j["attr_len"] = attr_len_;
    j["net"] = nlohmann::ordered_json::parse(net_.to_json(name));
    return j.dump() + "\n";
}

GoalPolicy GoalPolicy::from_json(const Env& env, const std::string& text, const std::string& name,
                                 const std::string& config_hash) {
    auto j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1) throw std::runtime_error("policy: unsupported version");
    if (j.at("config_hash").get<std::string>() != config_hash) {
        throw std::runtime_error("policy: config hash mismatch");
    }
    GoalPolicy p;
    p.layout_.use_current = j.at("layout").at("use_current").get<bool>();
    p.layout_.use_goal_mask = j.at("layout").at("use_goal_mask").get<bool>();
    p.attr_len_ = j.at("attr_len").get<int>();
    p.net_ = Mlp::from_json(j.at("net").dump(), name);
    if (p.net_.shape().vocab != env.feature_dim() ||
        p.net_.shape().outputs != env.action_count() ||
        p.net_.shape().tail != p.layout_.tail_dim(p.attr_len_)) {
        throw std::runtime_error("policy: shape does not match environment");
    }
    return p;
}

double reinforce_apply(Mlp& net, const std::vector<LegStep>& steps, double baseline, double lr,
                       Mlp::Grad& scratch, double entropy_coef) {
    if (steps.empty()) throw ContractViolation("reinforce: empty episode");
    double g = 0.0;
    for (const auto& s : steps) g += s.reward;
    const double episode_return = g;
    if (lr != 0.0) {
        scratch.clear();
        double tail_return = 0.0;
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
            tail_return += it->reward;
            const double adv = tail_return - baseline;
            if (adv != 0.0) {
                net.accumulate_log_prob_grad(it->active, it->tail, it->fwd, it->action, adv,
                                             scratch);
            }
            if (entropy_coef != 0.0) {
                net.accumulate_entropy_grad(it->active, it->tail, it->fwd, entropy_coef,
                                            scratch);
            }
        }
        net.apply(scratch, lr);
    }
    return episode_return;
}

void LegUpdater::update(const std::vector<LegStep>& steps, double entropy_coef,
                        double lr_scale) {
    if (steps.empty()) return;
    double g = 0.0;
    for (const auto& s : steps) g += s.reward;
    adv_scale_ = 0.97 * adv_scale_ + 0.03 * std::abs(g - ema_.value);
    if (lr_scale > 0.0) {
        scratch_.clear();
        double tail_return = 0.0;
        const double inv_len = 1.0 / static_cast<double>(steps.size());
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
            tail_return += it->reward;
            const double adv = std::clamp((tail_return - ema_.value) / std::max(adv_scale_, 1.0),
                                          -3.0, 3.0);
            net_->accumulate_log_prob_grad(it->active, it->tail, it->fwd, it->action,
                                           adv * inv_len, scratch_);
            if (entropy_coef != 0.0) {
                net_->accumulate_entropy_grad(it->active, it->tail, it->fwd,
                                              entropy_coef * inv_len, scratch_);
            }
        }
        net_->apply(scratch_, lr_ * lr_scale);
    }
    ema_.observe(g);
}

void reinforce_update(GoalPolicy& policy, const Env& env, const EpisodeTrace& episode,
                      double baseline, double lr) {
    std::vector<LegStep> steps;
    for (const auto& rec : episode.records) {
        if (rec.action < 0) continue;  // terminal marker
        LegStep s;
        s.active = env.active_features(env.parse(rec.state));
        policy.assemble_tail(rec.attrs, rec.goal, s.tail);
        policy.net().forward(s.active, s.tail, s.fwd);
        s.action = rec.action;
        s.reward = rec.reward;
        steps.push_back(std::move(s));
    }
    if (steps.empty()) return;
    Mlp::Grad scratch(policy.net().shape());
    reinforce_apply(policy.net(), steps, baseline, lr, scratch);
}

InverseTrainResult train_inverse_model(const Env& env, const std::vector<InverseExample>& data,
                                       const InverseTrainConfig& cfg) {
    if (data.empty()) throw ContractViolation("inverse model: empty dataset");
    Rng rng(cfg.seed);
    PolicyLayout layout;
    layout.use_current = false;
    layout.use_goal_mask = false;
    InverseTrainResult result{GoalPolicy(env, layout, cfg.hidden1, cfg.hidden2, rng), {}};
    Mlp& net = result.policy.net();
    Mlp::Grad grad(net.shape());

    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<double> tail;
    Mlp::Forward f;
    Mlp::Adam adam;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.below(i)]);
        }
        double nll = 0.0;
        for (std::size_t oi : order) {
            const auto& ex = data[oi];
            result.policy.assemble_tail(ex.next_attrs, GoalSpec::exact(ex.next_attrs), tail);
            net.forward(ex.active, tail, f);
            nll -= net.log_prob(f, ex.action);
            grad.clear();
            net.accumulate_log_prob_grad(ex.active, tail, f, ex.action, 1.0, grad);
            net.apply_adam(grad, adam, cfg.lr);
        }
        result.epoch_nll.push_back(nll / static_cast<double>(data.size()));
    }
    return result;
}

GoalPolicy train_reactive_baseline(const Env& env, const Detector& detector,
                                   const TaskSampler& sampler, const BaselineTrainConfig& cfg) {
    Rng rng(cfg.seed);
    GoalPolicy policy(env, PolicyLayout{}, cfg.hidden1, cfg.hidden2, rng);
    LegUpdater updater(policy.net(), cfg.lr);

    int64_t steps_done = 0;
    std::vector<LegStep> leg;
    while (steps_done < cfg.steps) {
        const double progress =
            static_cast<double>(steps_done) / static_cast<double>(cfg.steps);
        TrainTask task = sampler(rng, progress);
        EnvState state = task.start;
        AttributeVector rho = detector.detect(state);
        if (satisfies(rho, task.goal)) continue;  // pre-solved tasks have no effect

        leg.clear();
        for (int t = 0; t < cfg.rewards.t_max && steps_done < cfg.steps; ++t) {
            LegStep s;
            s.active = env.active_features(state);
            policy.assemble_tail(rho, task.goal, s.tail);
            policy.net().forward(s.active, s.tail, s.fwd);
            const double r = rng.next_double();
            double acc = 0.0;
            s.action = static_cast<int>(s.fwd.probs.size()) - 1;
            for (std::size_t a = 0; a < s.fwd.probs.size(); ++a) {
                acc += s.fwd.probs[a];
                if (r < acc) {
                    s.action = static_cast<int>(a);
                    break;
                }
            }
            state = env.step(state, s.action);
            ++steps_done;
            rho = detector.detect(state);
            s.reward = cfg.rewards.step;
            const bool done = satisfies(rho, task.goal);
            if (done) s.reward += cfg.rewards.success;
            leg.push_back(std::move(s));
            if (done) break;
        }
        if (leg.empty()) continue;
        const double entropy = cfg.entropy_coef * std::max(0.3, 1.0 - 1.5 * progress);
        updater.update(leg, entropy, std::max(0.0, 1.0 - progress));
    }
    return policy;
}

}  // namespace ap

#include "ap/explorer.hpp"

#include <cmath>

namespace ap {

double smoothed_bonus(int64_t count, int64_t total) {
    const double ratio =
        total > 0 ? static_cast<double>(count) / static_cast<double>(total) : 0.0;
    return std::pow(ratio + 0.001, -0.5);
}

double sqrt_bonus(int64_t count) { return std::pow(static_cast<double>(count) + 1.0, -0.5); }

ExploreSummary explore(const Env& env, const Detector& detector, const ExploreConfig& cfg,
                       TransitionGraph& graph) {
    if (cfg.steps <= 0) throw ContractViolation("explore: step budget must be positive");
    Rng rng(cfg.seed);
    ExploreSummary summary;

    const std::size_t len = env.schema().length();
    const GoalSpec zero_goal(env.schema(), std::vector<uint8_t>(len, 0),
                             std::vector<uint8_t>(len, 0));

    std::optional<GoalPolicy> pol;
    std::optional<Mlp::Grad> scratch;
    if (cfg.policy == ExplorePolicyKind::kCount) {
        pol.emplace(env, PolicyLayout{}, cfg.hidden1, cfg.hidden2, rng);
        scratch.emplace(pol->net().shape());
    }

    // The learner updates once per segment (the actions since the previous
    // attribute change, credited with that segment's terminal bonus). The
    // intrinsic bonus spans a 30x dynamic range, so raw advantages saturate a
    // plain Reinforce step; they are normalized by a running scale and capped
    // before the gradient is applied.
    EmaBaseline ema;
    double adv_scale = 1.0;
    std::vector<LegStep> segment;
    auto flush_segment = [&](double bonus) {
        if (!pol || segment.empty()) {
            segment.clear();
            return;
        }
        segment.back().reward = bonus;
        const double raw_adv = bonus - ema.value;
        adv_scale = 0.97 * adv_scale + 0.03 * std::abs(raw_adv);
        double adv = raw_adv / std::max(adv_scale, 1e-3);
        adv = std::clamp(adv, -3.0, 3.0);
        scratch->clear();
        for (const auto& s : segment) {
            if (adv != 0.0) {
                pol->net().accumulate_log_prob_grad(s.active, s.tail, s.fwd, s.action, adv,
                                                    *scratch);
            }
            if (cfg.entropy_coef != 0.0) {
                pol->net().accumulate_entropy_grad(s.active, s.tail, s.fwd, cfg.entropy_coef,
                                                   *scratch);
            }
        }
        pol->net().apply(*scratch, cfg.lr);
        ema.observe(bonus);
        segment.clear();
    };

    while (summary.steps < cfg.steps) {
        EnvState state = env.reset(rng.next_u64());
        AttributeVector rho = detector.detect(state);
        graph.intern(rho);
        for (int t = 0; t < cfg.episode_horizon && summary.steps < cfg.steps; ++t) {
            int action;
            if (pol) {
                LegStep s;
                s.active = env.active_features(state);
                pol->assemble_tail(rho, zero_goal, s.tail);
                pol->net().forward(s.active, s.tail, s.fwd);
                const double r = rng.next_double();
                double acc = 0.0;
                action = static_cast<int>(s.fwd.probs.size()) - 1;
                for (std::size_t a = 0; a < s.fwd.probs.size(); ++a) {
                    acc += s.fwd.probs[a];
                    if (r < acc) {
                        action = static_cast<int>(a);
                        break;
                    }
                }
                s.action = action;
                segment.push_back(std::move(s));
            } else {
                action = rng.below_int(env.action_count());
            }
            state = env.step(state, action);
            ++summary.steps;
            const AttributeVector next = detector.detect(state);
            if (next != rho) {
                const NodeId from = *graph.find(rho);
                const NodeId to = graph.intern(next);
                const int64_t count = graph.explore_count(from, to);
                const double reward = cfg.bonus == BonusKind::kSmoothed
                                          ? smoothed_bonus(count, graph.explore_total())
                                          : sqrt_bonus(count);
                graph.record_explore(from, to);
                ++summary.transitions;
                rho = next;
                flush_segment(reward);
            }
        }
        flush_segment(0.0);  // unrewarded trailing segment
    }
    summary.distinct_edges = graph.explore_edge_count();
    summary.exploratory_policy = std::move(pol);
    return summary;
}

}  // namespace ap

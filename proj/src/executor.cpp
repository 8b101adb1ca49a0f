#include "ap/executor.hpp"

namespace ap {

ExecOutcome execute(const Env& env, const Detector& detector, const GoalPolicy& policy,
                    const PlannerIndex& index, const EnvState& start, const GoalSpec& goal,
                    int budget, int leg_t_max, Rng& rng, bool log_trace) {
    if (budget <= 0) throw ContractViolation("execute: budget must be positive");
    const TransitionGraph& graph = index.graph();

    ExecOutcome out;
    EnvState state = start;
    AttributeVector rho = detector.detect(state);

    auto log_step = [&](int action, double reward, const GoalSpec& leg_goal) {
        if (!log_trace) return;
        out.trace.records.push_back({env.canonical(state), rho, action, reward, leg_goal});
    };

    if (satisfies(rho, goal)) {
        out.success = true;
        out.final_detected = rho;
        out.final_state = state;
        log_step(-1, 0.0, goal);
        return out;
    }

    Plan plan;
    std::size_t pos = 0;
    bool have_plan = false;
    int plans_computed = 0;

    while (true) {
        if (!have_plan) {
            const auto id = graph.find(rho);
            if (!id) {
                out.reason = "unreachable";  // novel node, absent from the graph
                break;
            }
            auto pr = index.plan(*id, goal);
            ++plans_computed;
            if (pr.status != PlanStatus::kOk) {
                out.reason = "unreachable";
                break;
            }
            plan = std::move(pr.plan);
            pos = 0;
            have_plan = true;
            if (plans_computed == 1) {
                out.first_plan_cost = plan.total_cost;
                out.first_plan_prob = plan.success_prob;
            }
        }

        const NodeId target = plan.nodes[pos + 1];
        const GoalSpec leg_goal = GoalSpec::exact(graph.node(target));

        bool changed = false;
        for (int t = 0; t < leg_t_max; ++t) {
            if (out.steps >= budget) {
                out.reason = "budget";
                out.final_detected = rho;
                out.final_state = state;
                out.replans = plans_computed - 1;
                log_step(-1, 0.0, leg_goal);
                return out;
            }
            const auto active = env.active_features(state);
            const int action = policy.act(active, rho, leg_goal, rng);
            log_step(action, 0.0, leg_goal);
            state = env.step(state, action);
            ++out.steps;
            const AttributeVector next = detector.detect(state);
            if (next != rho) {
                rho = next;
                changed = true;
                break;
            }
        }

        if (satisfies(rho, goal)) {
            out.success = true;
            break;
        }
        if (changed && rho == graph.node(target)) {
            ++pos;  // on the planned path; keep following it
        } else {
            have_plan = false;  // deviation or leg timeout: recompute
        }
    }

    out.final_detected = rho;
    out.final_state = state;
    out.replans = std::max(0, plans_computed - 1);
    log_step(-1, 0.0, goal);
    return out;
}

}  // namespace ap

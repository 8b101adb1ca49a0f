#include "ap/planner.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace ap {

namespace {

std::vector<NodeId> path_of(NodeId v, const std::vector<NodeId>& parent) {
    std::vector<NodeId> path;
    for (NodeId u = v; u >= 0; u = parent[static_cast<std::size_t>(u)]) path.push_back(u);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

PlannerIndex::PlannerIndex(const TransitionGraph& g, ProbMode mode, double min_attempts)
    : graph_(&g) {
    out_.resize(static_cast<std::size_t>(g.node_count()));
    for (NodeId from = 0; from < g.node_count(); ++from) {
        if (mode == ProbMode::kDecayed) {
            for (const auto& [to, rows] : g.attempt_neighbors(from)) {
                if (g.decayed_attempts(from, to) < min_attempts) continue;
                if (auto p = g.edge_probability(from, to)) {
                    out_[static_cast<std::size_t>(from)].emplace_back(to, *p);
                }
            }
        } else {
            for (const auto& [to, count] : g.explore_neighbors(from)) {
                if (auto p = g.edge_probability_ablated(from, to)) {
                    out_[static_cast<std::size_t>(from)].emplace_back(to, *p);
                }
            }
        }
    }
}

PlannerIndex::PlannerIndex(const TransitionGraph& g, const EdgeProbFn& fn) : graph_(&g) {
    out_.resize(static_cast<std::size_t>(g.node_count()));
    for (NodeId from = 0; from < g.node_count(); ++from) {
        std::map<NodeId, bool> candidates;
        for (const auto& [to, count] : g.explore_neighbors(from)) candidates[to] = true;
        for (const auto& [to, rows] : g.attempt_neighbors(from)) candidates[to] = true;
        for (const auto& [to, unused] : candidates) {
            if (auto p = fn(from, to)) {
                out_[static_cast<std::size_t>(from)].emplace_back(to, *p);
            }
        }
    }
}

int PlannerIndex::edge_count() const {
    int n = 0;
    for (const auto& o : out_) n += static_cast<int>(o.size());
    return n;
}

PlanResult PlannerIndex::run(NodeId start, const std::function<bool(NodeId)>& is_goal) const {
    const auto n = static_cast<std::size_t>(graph_->node_count());
    PlanResult result;
    if (start < 0 || static_cast<std::size_t>(start) >= n) {
        result.status = PlanStatus::kUnknownStart;
        return result;
    }
    if (is_goal(start)) {
        result.status = PlanStatus::kOk;
        result.plan.nodes = {start};
        return result;
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<NodeId> parent(n, -1);
    std::vector<uint8_t> settled(n, 0);

    using Entry = std::pair<double, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;
    dist[static_cast<std::size_t>(start)] = 0.0;
    pq.push({0.0, start});

    while (!pq.empty()) {
        const auto [cost, u] = pq.top();
        pq.pop();
        if (settled[static_cast<std::size_t>(u)]) continue;
        if (cost > dist[static_cast<std::size_t>(u)]) continue;
        settled[static_cast<std::size_t>(u)] = 1;
        if (is_goal(u)) {
            result.status = PlanStatus::kOk;
            result.plan.nodes = path_of(u, parent);
            result.plan.total_cost = cost;
            for (std::size_t i = 0; i + 1 < result.plan.nodes.size(); ++i) {
                const NodeId a = result.plan.nodes[i];
                const NodeId b = result.plan.nodes[i + 1];
                double p = 0.0;
                for (const auto& [to, prob] : out_[static_cast<std::size_t>(a)]) {
                    if (to == b) {
                        p = prob;
                        break;
                    }
                }
                result.plan.probs.push_back(p);
                result.plan.success_prob *= p;
            }
            return result;
        }
        for (const auto& [v, p] : out_[static_cast<std::size_t>(u)]) {
            if (settled[static_cast<std::size_t>(v)]) continue;
            const double w = -std::log(std::max(p, kProbFloor));
            const double cand = cost + w;
            auto& dv = dist[static_cast<std::size_t>(v)];
            if (cand < dv) {
                dv = cand;
                parent[static_cast<std::size_t>(v)] = u;
                pq.push({cand, v});
            } else if (cand == dv && parent[static_cast<std::size_t>(v)] != u &&
                       parent[static_cast<std::size_t>(v)] >= 0) {
                // exact cost tie: prefer the lexicographically smaller node-id
                // sequence from the start
                auto cand_path = path_of(u, parent);
                cand_path.push_back(v);
                const auto cur_path = path_of(v, parent);
                if (cand_path < cur_path) {
                    parent[static_cast<std::size_t>(v)] = u;
                    pq.push({cand, v});
                }
            }
        }
    }
    result.status = PlanStatus::kUnreachable;
    return result;
}

PlanResult PlannerIndex::plan(NodeId start, const GoalSpec& goal) const {
    return run(start, [&](NodeId id) { return satisfies(graph_->node(id), goal); });
}

PlanResult PlannerIndex::plan_to_node(NodeId start, NodeId goal) const {
    return run(start, [&](NodeId id) { return id == goal; });
}

PlanResult plan(const TransitionGraph& g, const AttributeVector& start, const GoalSpec& goal,
                ProbMode mode, double min_attempts) {
    const auto id = g.find(start);
    if (!id) return PlanResult{PlanStatus::kUnknownStart, {}};
    return PlannerIndex(g, mode, min_attempts).plan(*id, goal);
}

PlanResult plan(const TransitionGraph& g, const AttributeVector& start, const GoalSpec& goal,
                const EdgeProbFn& fn) {
    const auto id = g.find(start);
    if (!id) return PlanResult{PlanStatus::kUnknownStart, {}};
    return PlannerIndex(g, fn).plan(*id, goal);
}

}  // namespace ap

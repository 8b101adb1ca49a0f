#pragma once
// Dijkstra over -log edge probabilities (multi-target for underspecified
// goals), with deterministic lexicographic tie-breaking on node-id sequences.

#include "ap/graph.hpp"

#include <functional>

namespace ap {

enum class PlanStatus { kOk, kUnreachable, kUnknownStart };

struct Plan {
    std::vector<NodeId> nodes;  // [start, ..., satisfying node]
    std::vector<double> probs;  // per edge, unclamped
    double total_cost = 0.0;    // sum of -log(max(p, floor)) in path order
    double success_prob = 1.0;  // product of edge probabilities
};

struct PlanResult {
    PlanStatus status = PlanStatus::kUnreachable;
    Plan plan;
};

using EdgeProbFn = std::function<std::optional<double>(NodeId, NodeId)>;

enum class ProbMode { kDecayed, kAblated };

inline constexpr double kProbFloor = 1e-6;
inline constexpr double kDefaultMinAttempts = 3.0;

// Frozen adjacency with per-edge probabilities, built once per evaluation.
class PlannerIndex {
public:
    PlannerIndex(const TransitionGraph& g, ProbMode mode,
                 double min_attempts = kDefaultMinAttempts);
    // custom probability selector; adjacency is the union of exploration and
    // attempted edges, keeping edges where fn yields a value
    PlannerIndex(const TransitionGraph& g, const EdgeProbFn& fn);

    const TransitionGraph& graph() const { return *graph_; }
    PlanResult plan(NodeId start, const GoalSpec& goal) const;
    PlanResult plan_to_node(NodeId start, NodeId goal) const;

    int edge_count() const;
    const std::vector<std::pair<NodeId, double>>& out(NodeId id) const {
        return out_[static_cast<std::size_t>(id)];
    }

private:
    PlanResult run(NodeId start, const std::function<bool(NodeId)>& is_goal) const;

    const TransitionGraph* graph_;
    std::vector<std::vector<std::pair<NodeId, double>>> out_;  // (to, probability)
};

// Single-shot planning over attribute-vector endpoints.
PlanResult plan(const TransitionGraph& g, const AttributeVector& start, const GoalSpec& goal,
                ProbMode mode, double min_attempts = kDefaultMinAttempts);
PlanResult plan(const TransitionGraph& g, const AttributeVector& start, const GoalSpec& goal,
                const EdgeProbFn& fn);

}  // namespace ap

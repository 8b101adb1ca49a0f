#pragma once
// The attribute-transition graph: interned nodes, exploration counts, and
// per-epoch attempt/success statistics with exponential decay.

#include "ap/core.hpp"

#include <map>
#include <optional>
#include <unordered_map>

namespace ap {

using NodeId = int32_t;

struct EpochRow {
    int epoch = 0;
    int64_t attempts = 0;
    int64_t successes = 0;
};

class TransitionGraph {
public:
    TransitionGraph() = default;
    TransitionGraph(AttributeSchema schema, double gamma);

    const AttributeSchema& schema() const { return schema_; }
    double gamma() const { return gamma_; }
    int epoch() const { return epoch_; }
    void advance_epoch() { ++epoch_; }

    NodeId intern(const AttributeVector& v);
    std::optional<NodeId> find(const AttributeVector& v) const;
    const AttributeVector& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
    int node_count() const { return static_cast<int>(nodes_.size()); }

    // --- exploration counts c_{pi_e} ---------------------------------------
    void record_explore(NodeId from, NodeId to);
    int64_t explore_count(NodeId from, NodeId to) const;
    int64_t explore_total() const { return explore_total_; }
    int64_t explore_outflow(NodeId from) const;
    // neighbors with nonzero exploration count, ordered by node id
    const std::map<NodeId, int64_t>& explore_neighbors(NodeId from) const;
    int explore_edge_count() const;

    // --- policy-phase statistics A/S ----------------------------------------
    void record_attempt(const AttributeVector& from, const AttributeVector& reached,
                        const AttributeVector& goal);
    void record_attempt(NodeId from, NodeId reached, NodeId goal);

    // decayed success ratio sum_t gamma^{T-t} S_t / sum_t gamma^{T-t} A_t;
    // nullopt when no attempts were ever recorded
    std::optional<double> edge_probability(NodeId from, NodeId to) const;
    // fraction of exploration transitions out of `from` that ended in `to`
    std::optional<double> edge_probability_ablated(NodeId from, NodeId to) const;
    double decayed_attempts(NodeId from, NodeId to) const;
    const std::map<NodeId, std::vector<EpochRow>>& attempt_neighbors(NodeId from) const;
    int attempt_edge_count() const;

    // neighbor of `current` sampled proportionally to exploration counts;
    // nullopt when current is unknown or has no outgoing exploration edge
    std::optional<NodeId> sample_goal(const AttributeVector& current, Rng& rng) const;

    std::string to_json(const std::string& config_hash) const;
    static TransitionGraph from_json(const std::string& text, const std::string& config_hash);

private:
    AttributeSchema schema_;
    double gamma_ = 0.9;
    int epoch_ = 0;

    std::vector<AttributeVector> nodes_;
    std::unordered_map<AttributeVector, NodeId, AttributeVectorHash> intern_;

    // adjacency keyed by source node; ordered maps keep serialization and
    // iteration deterministic
    std::vector<std::map<NodeId, int64_t>> explore_out_;
    std::vector<int64_t> explore_outflow_;
    int64_t explore_total_ = 0;

    std::vector<std::map<NodeId, std::vector<EpochRow>>> attempts_out_;

    void ensure_node_storage();
};

}  // namespace ap

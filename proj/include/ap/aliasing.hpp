#pragma once
// Aliasing diagnostic: per-edge success rates grouped by a coarse
// source-state key. A large spread between groups on one edge means states
// with different transition feasibility share the same attributes.

#include "ap/core.hpp"
#include "ap/graph.hpp"

#include <functional>

namespace ap {

struct AliasingGroup {
    std::string key;
    int64_t attempts = 0;
    int64_t successes = 0;

    double rate() const {
        return attempts ? static_cast<double>(successes) / static_cast<double>(attempts) : 0.0;
    }
};

struct AliasingEdgeReport {
    AttributeVector from;
    AttributeVector goal;
    std::vector<AliasingGroup> groups;  // ordered by key
    double spread = 0.0;                // max group rate - min group rate
    int64_t attempts = 0;
};

// key_fn maps a canonical state snapshot to its grouping key. Traces are the
// phase-3 episode traces: legs are runs of records sharing a goal, terminated
// by an action < 0 marker whose attrs are the reached attributes.
std::vector<AliasingEdgeReport> aliasing_report(
    const TransitionGraph& graph, const std::vector<EpisodeTrace>& traces,
    const std::function<std::string(const std::string&)>& key_fn);

}  // namespace ap

#include "ap/aliasing.hpp"

#include <map>

namespace ap {

std::vector<AliasingEdgeReport> aliasing_report(
    const TransitionGraph& graph, const std::vector<EpisodeTrace>& traces,
    const std::function<std::string(const std::string&)>& key_fn) {
    struct EdgeKey {
        std::string from, goal;
        bool operator<(const EdgeKey& o) const {
            return from != o.from ? from < o.from : goal < o.goal;
        }
    };
    std::map<EdgeKey, std::map<std::string, AliasingGroup>> acc;

    for (const auto& trace : traces) {
        std::size_t leg_start = 0;
        for (std::size_t i = 0; i < trace.records.size(); ++i) {
            if (trace.records[i].action >= 0) continue;
            // marker at i closes the leg [leg_start, i)
            if (i > leg_start) {
                const auto& first = trace.records[leg_start];
                const auto& marker = trace.records[i];
                if (first.goal.fully_specified()) {
                    const std::string goal_bits = [&] {
                        std::string s(first.goal.values().size(), '0');
                        for (std::size_t b = 0; b < first.goal.values().size(); ++b) {
                            if (first.goal.values()[b]) s[b] = '1';
                        }
                        return s;
                    }();
                    EdgeKey key{first.attrs.to_string(), goal_bits};
                    auto& group = acc[key][key_fn(first.state)];
                    ++group.attempts;
                    if (marker.attrs.to_string() == goal_bits) ++group.successes;
                }
            }
            leg_start = i + 1;
        }
    }

    std::vector<AliasingEdgeReport> report;
    for (auto& [edge, groups] : acc) {
        AliasingEdgeReport r;
        r.from = AttributeVector::from_string(graph.schema(), edge.from);
        r.goal = AttributeVector::from_string(graph.schema(), edge.goal);
        double lo = 1.0, hi = 0.0;
        for (auto& [key, g] : groups) {
            g.key = key;
            lo = std::min(lo, g.rate());
            hi = std::max(hi, g.rate());
            r.attempts += g.attempts;
            r.groups.push_back(g);
        }
        r.spread = r.groups.empty() ? 0.0 : hi - lo;
        report.push_back(std::move(r));
    }
    return report;
}

}  // namespace ap

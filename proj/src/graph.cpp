#include "ap/graph.hpp"

#include <json.hpp>

#include <cmath>

namespace ap {

namespace {
const std::map<NodeId, int64_t> kEmptyExplore;
const std::map<NodeId, std::vector<EpochRow>> kEmptyAttempts;
}  // namespace

TransitionGraph::TransitionGraph(AttributeSchema schema, double gamma)
    : schema_(std::move(schema)), gamma_(gamma) {
    if (gamma_ <= 0.0 || gamma_ > 1.0) throw ContractViolation("graph: gamma out of range");
}

void TransitionGraph::ensure_node_storage() {
    explore_out_.resize(nodes_.size());
    explore_outflow_.resize(nodes_.size(), 0);
    attempts_out_.resize(nodes_.size());
}

NodeId TransitionGraph::intern(const AttributeVector& v) {
    if (v.schema_tag() != schema_.tag()) throw ContractViolation("graph: schema mismatch");
    auto it = intern_.find(v);
    if (it != intern_.end()) return it->second;
    const NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(v);
    intern_.emplace(v, id);
    ensure_node_storage();
    return id;
}

std::optional<NodeId> TransitionGraph::find(const AttributeVector& v) const {
    auto it = intern_.find(v);
    if (it == intern_.end()) return std::nullopt;
    return it->second;
}

void TransitionGraph::record_explore(NodeId from, NodeId to) {
    if (from == to) throw ContractViolation("graph: self-loop explore transition");
    ++explore_out_[static_cast<std::size_t>(from)][to];
    ++explore_outflow_[static_cast<std::size_t>(from)];
    ++explore_total_;
}

int64_t TransitionGraph::explore_count(NodeId from, NodeId to) const {
    const auto& out = explore_out_[static_cast<std::size_t>(from)];
    auto it = out.find(to);
    return it == out.end() ? 0 : it->second;
}

int64_t TransitionGraph::explore_outflow(NodeId from) const {
    return explore_outflow_[static_cast<std::size_t>(from)];
}

const std::map<NodeId, int64_t>& TransitionGraph::explore_neighbors(NodeId from) const {
    if (from < 0 || from >= node_count()) return kEmptyExplore;
    return explore_out_[static_cast<std::size_t>(from)];
}

int TransitionGraph::explore_edge_count() const {
    int n = 0;
    for (const auto& out : explore_out_) n += static_cast<int>(out.size());
    return n;
}

void TransitionGraph::record_attempt(const AttributeVector& from, const AttributeVector& reached,
                                     const AttributeVector& goal) {
    record_attempt(intern(from), intern(reached), intern(goal));
}

void TransitionGraph::record_attempt(NodeId from, NodeId reached, NodeId goal) {
    if (from == goal) throw ContractViolation("graph: attempt with from == goal");
    auto& rows = attempts_out_[static_cast<std::size_t>(from)][goal];
    if (rows.empty() || rows.back().epoch != epoch_) {
        rows.push_back({epoch_, 0, 0});
    }
    ++rows.back().attempts;
    if (reached == goal) ++rows.back().successes;
}

std::optional<double> TransitionGraph::edge_probability(NodeId from, NodeId to) const {
    const auto& out = attempts_out_[static_cast<std::size_t>(from)];
    auto it = out.find(to);
    if (it == out.end()) return std::nullopt;
    double a = 0.0, s = 0.0;
    for (const auto& row : it->second) {
        const double w = std::pow(gamma_, static_cast<double>(epoch_ - row.epoch));
        a += w * static_cast<double>(row.attempts);
        s += w * static_cast<double>(row.successes);
    }
    if (a <= 0.0) return std::nullopt;
    return s / a;
}

std::optional<double> TransitionGraph::edge_probability_ablated(NodeId from, NodeId to) const {
    const int64_t outflow = explore_outflow_[static_cast<std::size_t>(from)];
    if (outflow <= 0) return std::nullopt;
    const int64_t c = explore_count(from, to);
    if (c <= 0) return std::nullopt;
    return static_cast<double>(c) / static_cast<double>(outflow);
}

double TransitionGraph::decayed_attempts(NodeId from, NodeId to) const {
    const auto& out = attempts_out_[static_cast<std::size_t>(from)];
    auto it = out.find(to);
    if (it == out.end()) return 0.0;
    double a = 0.0;
    for (const auto& row : it->second) {
        a += std::pow(gamma_, static_cast<double>(epoch_ - row.epoch)) *
             static_cast<double>(row.attempts);
    }
    return a;
}

const std::map<NodeId, std::vector<EpochRow>>& TransitionGraph::attempt_neighbors(
    NodeId from) const {
    if (from < 0 || from >= node_count()) return kEmptyAttempts;
    return attempts_out_[static_cast<std::size_t>(from)];
}

int TransitionGraph::attempt_edge_count() const {
    int n = 0;
    for (const auto& out : attempts_out_) n += static_cast<int>(out.size());
    return n;
}

std::optional<NodeId> TransitionGraph::sample_goal(const AttributeVector& current,
                                                   Rng& rng) const {
    const auto id = find(current);
    if (!id) return std::nullopt;
    const auto& out = explore_out_[static_cast<std::size_t>(*id)];
    if (out.empty()) return std::nullopt;
    const int64_t total = explore_outflow_[static_cast<std::size_t>(*id)];
    int64_t pick = static_cast<int64_t>(rng.below(static_cast<uint64_t>(total)));
    for (const auto& [to, count] : out) {
        pick -= count;
        if (pick < 0) return to;
    }
    return out.rbegin()->first;
}

std::string TransitionGraph::to_json(const std::string& config_hash) const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["config_hash"] = config_hash;
    j["schema"] = schema_.names();
    j["gamma"] = gamma_;
    j["epoch"] = epoch_;
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& v : nodes_) nodes.push_back(v.to_string());
    j["nodes"] = std::move(nodes);
    // phase tag "explore": exploration counts; phase tag "attempts": per-epoch
    // policy-phase statistics
    auto explore = nlohmann::ordered_json::array();
    for (std::size_t from = 0; from < explore_out_.size(); ++from) {
        for (const auto& [to, count] : explore_out_[from]) {
            explore.push_back({static_cast<NodeId>(from), to, count});
        }
    }
    j["explore"] = std::move(explore);
    auto attempts = nlohmann::ordered_json::array();
    for (std::size_t from = 0; from < attempts_out_.size(); ++from) {
        for (const auto& [to, rows] : attempts_out_[from]) {
            for (const auto& row : rows) {
                attempts.push_back(
                    {row.epoch, static_cast<NodeId>(from), to, row.attempts, row.successes});
            }
        }
    }
    j["attempts"] = std::move(attempts);
    return j.dump() + "\n";
}

TransitionGraph TransitionGraph::from_json(const std::string& text,
                                           const std::string& config_hash) {
    auto j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1) throw std::runtime_error("graph: unsupported version");
    if (!config_hash.empty() && j.at("config_hash").get<std::string>() != config_hash) {
        throw std::runtime_error("graph: config hash mismatch");
    }
    TransitionGraph g(AttributeSchema(j.at("schema").get<std::vector<std::string>>()),
                      j.at("gamma").get<double>());
    for (const auto& bits : j.at("nodes")) {
        g.intern(AttributeVector::from_string(g.schema_, bits.get<std::string>()));
    }
    for (const auto& e : j.at("explore")) {
        const NodeId from = e.at(0).get<NodeId>();
        const NodeId to = e.at(1).get<NodeId>();
        const int64_t count = e.at(2).get<int64_t>();
        g.explore_out_[static_cast<std::size_t>(from)][to] = count;
        g.explore_outflow_[static_cast<std::size_t>(from)] += count;
        g.explore_total_ += count;
    }
    for (const auto& e : j.at("attempts")) {
        EpochRow row{e.at(0).get<int>(), e.at(3).get<int64_t>(), e.at(4).get<int64_t>()};
        g.attempts_out_[e.at(1).get<std::size_t>()][e.at(2).get<NodeId>()].push_back(row);
    }
    g.epoch_ = j.at("epoch").get<int>();
    return g;
}

}  // namespace ap

#include "ap/metrics.hpp"

#include "ap/planner.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ap {

namespace {

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        if (c == '/' || c == ' ') c = '_';
    }
    return out;
}

}  // namespace

MetricsFiles export_metrics(const EvalResult& result, const std::filesystem::path& dir) {
    MetricsFiles files;
    const std::string stem = "results_" + sanitize(result.mode) + "_" + sanitize(result.kind);
    files.csv = dir / (stem + ".csv");
    files.summary = dir / ("summary_" + sanitize(result.mode) + "_" + sanitize(result.kind) +
                           ".json");

    std::ofstream csv(files.csv, std::ios::trunc);
    csv << "# config_hash=" << result.config_hash << "\n";
    csv << "task,env_seed,success,true_success,steps,replans,plan_cost,plan_prob,reason\n";
    csv.precision(17);
    for (const auto& o : result.outcomes) {
        csv << o.index << ',' << o.env_seed << ',' << (o.success ? 1 : 0) << ','
            << (o.true_success ? 1 : 0) << ',' << o.steps << ',' << o.replans << ','
            << o.plan_cost << ',' << o.plan_prob << ',' << o.reason << '\n';
    }
    csv.close();

    nlohmann::ordered_json j;
    j["version"] = 1;
    j["config_hash"] = result.config_hash;
    j["mode"] = result.mode;
    j["kind"] = result.kind;
    j["seed"] = result.seed;
    j["tasks_evaluated"] = result.outcomes.size();
    j["excluded_presolved"] = result.excluded_presolved;
    j["success_rate"] = result.success_rate;
    j["detected_success_rate"] = result.detected_success_rate;
    j["mean_steps"] = result.mean_steps;
    j["mean_replans"] = result.mean_replans;
    std::ofstream summary(files.summary, std::ios::trunc);
    summary << j.dump(2) << "\n";
    return files;
}

std::vector<TaskOutcome> read_results_csv(const std::filesystem::path& csv,
                                          std::string* config_hash) {
    std::ifstream in(csv);
    if (!in) throw std::runtime_error("cannot read " + csv.string());
    std::vector<TaskOutcome> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (config_hash && eq != std::string::npos) *config_hash = line.substr(eq + 1);
            continue;
        }
        if (line.rfind("task,", 0) == 0) continue;  // header
        std::istringstream is(line);
        std::string tok;
        TaskOutcome o;
        std::getline(is, tok, ',');
        o.index = std::stoi(tok);
        std::getline(is, tok, ',');
        o.env_seed = std::stoull(tok);
        std::getline(is, tok, ',');
        o.success = tok == "1";
        std::getline(is, tok, ',');
        o.true_success = tok == "1";
        std::getline(is, tok, ',');
        o.steps = std::stoi(tok);
        std::getline(is, tok, ',');
        o.replans = std::stoi(tok);
        std::getline(is, tok, ',');
        o.plan_cost = std::stod(tok);
        std::getline(is, tok, ',');
        o.plan_prob = std::stod(tok);
        std::getline(is, o.reason, ',');
        rows.push_back(std::move(o));
    }
    return rows;
}

std::string graph_stats_json(const TransitionGraph& g, const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["config_hash"] = cfg.hash();
    j["nodes"] = g.node_count();
    j["explore_edges"] = g.explore_edge_count();
    j["explore_total"] = g.explore_total();
    j["attempt_edges"] = g.attempt_edge_count();
    j["epoch"] = g.epoch();

    int planable = 0;
    std::vector<int> histogram(10, 0);
    for (NodeId from = 0; from < g.node_count(); ++from) {
        for (const auto& [to, rows] : g.attempt_neighbors(from)) {
            if (g.decayed_attempts(from, to) < cfg.phase3.min_attempts) continue;
            const auto p = g.edge_probability(from, to);
            if (!p) continue;
            ++planable;
            const int bin = std::min(9, static_cast<int>(*p * 10.0));
            ++histogram[static_cast<std::size_t>(bin)];
        }
    }
    j["planable_edges"] = planable;
    j["probability_histogram"] = histogram;
    return j.dump(2) + "\n";
}

}  // namespace ap

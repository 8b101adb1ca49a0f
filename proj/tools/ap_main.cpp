// Attribute planner CLI. Verbs mirror the pipeline stages plus evaluation and
// reporting. Exit codes: 0 success, 1 validation error, 2 runtime failure;
// machine-readable error reason on stderr.

#include "ap/aliasing.hpp"
#include "ap/evaluate.hpp"
#include "ap/executor.hpp"
#include "ap/metrics.hpp"
#include "ap/pipeline.hpp"
#include "ap/planner.hpp"
#include "ap/tasks.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string artifacts;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config document")->required();
    cmd->add_option("--artifacts", args.artifacts, "artifact directory")->required();
}

int do_fit_detector(const CommonArgs& args) {
    const auto cfg = ap::ExperimentConfig::load(args.config_path);
    fs::create_directories(args.artifacts);
    const auto env = ap::make_env(cfg.env.name, ap::EnvParams{cfg.env.grid});
    const ap::Detector det = ap::stage_fit_detector(cfg, *env);
    ap::write_text(fs::path(args.artifacts) / ap::artifact_files::kSchema,
                   env->schema().to_json());
    ap::write_text(fs::path(args.artifacts) / ap::artifact_files::kDetector,
                   det.to_json(cfg.hash()));
    ordered_json out;
    out["mode"] = cfg.detector.mode;
    out["holdout_error"] = det.holdout_error();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int do_explore(const CommonArgs& args) {
    const auto cfg = ap::ExperimentConfig::load(args.config_path);
    const auto env = ap::make_env(cfg.env.name, ap::EnvParams{cfg.env.grid});
    const ap::Detector det = ap::load_detector(cfg, *env, args.artifacts);
    ap::TransitionGraph graph(env->schema(), cfg.phase3.gamma);
    const ap::ExploreSummary es = ap::stage_explore(cfg, *env, det, graph);
    if (es.exploratory_policy) {
        ap::write_text(fs::path(args.artifacts) / ap::artifact_files::kExplorerPolicy,
                       es.exploratory_policy->to_json("explorer_policy", cfg.hash()));
    }
    ap::write_text(fs::path(args.artifacts) / ap::artifact_files::kGraph,
                   graph.to_json(cfg.hash()));
    ordered_json out;
    out["steps"] = es.steps;
    out["transitions"] = es.transitions;
    out["distinct_edges"] = es.distinct_edges;
    out["nodes"] = graph.node_count();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int do_train(const CommonArgs& args, const std::string& baseline_mode) {
    const auto cfg = ap::ExperimentConfig::load(args.config_path);
    if (!baseline_mode.empty()) {
        ap::ExperimentConfig bcfg = cfg;
        bcfg.baseline.mode = baseline_mode;
        ap::train_and_save_baseline(bcfg, args.artifacts);
        std::cout << "{\"baseline\": \"" << baseline_mode << "\"}\n";
        return 0;
    }
    const auto env = ap::make_env(cfg.env.name, ap::EnvParams{cfg.env.grid});
    const ap::Detector det = ap::load_detector(cfg, *env, args.artifacts);
    ap::TransitionGraph graph = ap::load_graph(cfg, args.artifacts);
    const ap::GoalPolicy pi = ap::stage_phase3(cfg, *env, det, graph, args.artifacts);
    ap::write_text(fs::path(args.artifacts) / ap::artifact_files::kPolicy,
                   pi.to_json("policy", cfg.hash()));
    ap::write_text(fs::path(args.artifacts) / ap::artifact_files::kGraph,
                   graph.to_json(cfg.hash()));
    ap::write_text(fs::path(args.artifacts) / ap::artifact_files::kGraphStats,
                   ap::graph_stats_json(graph, cfg));
    ordered_json out;
    out["nodes"] = graph.node_count();
    out["attempt_edges"] = graph.attempt_edge_count();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int do_plan(const CommonArgs& args, uint64_t start_seed, const std::string& kind,
            uint64_t task_seed) {
    const auto cfg = ap::ExperimentConfig::load(args.config_path);
    const auto env = ap::make_env(cfg.env.name, ap::EnvParams{cfg.env.grid});
    const ap::Detector det = ap::load_detector(cfg, *env, args.artifacts);
    const ap::TransitionGraph graph = ap::load_graph(cfg, args.artifacts);
    const auto tasks = ap::generate_tasks(*env, kind, 1, task_seed);
    const ap::EnvState start = env->reset(start_seed);
    const ap::AttributeVector rho = det.detect(start);
    const auto result =
        ap::plan(graph, rho, tasks[0].goal, ap::ProbMode::kDecayed, cfg.phase3.min_attempts);
    ordered_json out;
    out["start"] = rho.to_string();
    out["goal"] = tasks[0].goal.to_string();
    switch (result.status) {
        case ap::PlanStatus::kOk: {
            out["status"] = "ok";
            auto nodes = ordered_json::array();
            for (ap::NodeId id : result.plan.nodes) nodes.push_back(graph.node(id).to_string());
            out["nodes"] = std::move(nodes);
            out["edge_probabilities"] = result.plan.probs;
            out["total_cost"] = result.plan.total_cost;
            out["success_probability"] = result.plan.success_prob;
            break;
        }
        case ap::PlanStatus::kUnreachable: out["status"] = "unreachable"; break;
        case ap::PlanStatus::kUnknownStart: out["status"] = "unknown-start"; break;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int do_eval(const CommonArgs& args, const std::string& kind, const std::string& mode) {
    const auto cfg = ap::ExperimentConfig::load(args.config_path);
    const auto result = ap::evaluate(cfg, args.artifacts, kind, mode);
    const auto files = ap::export_metrics(result, args.artifacts);
    ordered_json out;
    out["mode"] = result.mode;
    out["kind"] = result.kind;
    out["tasks_evaluated"] = result.outcomes.size();
    out["excluded_presolved"] = result.excluded_presolved;
    out["success_rate"] = result.success_rate;
    out["detected_success_rate"] = result.detected_success_rate;
    out["mean_steps"] = result.mean_steps;
    out["mean_replans"] = result.mean_replans;
    out["results_csv"] = files.csv.string();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int do_aliasing_report(const CommonArgs& args, const std::string& out_path) {
    const auto cfg = ap::ExperimentConfig::load(args.config_path);
    const auto env = ap::make_env(cfg.env.name, ap::EnvParams{cfg.env.grid});
    const ap::TransitionGraph graph = ap::load_graph(cfg, args.artifacts);
    const auto traces = ap::load_traces(*env, args.artifacts);
    const auto report = ap::aliasing_report(graph, traces, [&](const std::string& snapshot) {
        return env->alias_key(env->parse(snapshot));
    });
    std::ofstream out(out_path.empty()
                          ? (fs::path(args.artifacts) / "aliasing.csv").string()
                          : out_path);
    out << "# config_hash=" << cfg.hash() << "\n";
    out << "from,goal,key,attempts,successes,rate,edge_spread\n";
    out.precision(17);
    double max_spread = 0.0;
    for (const auto& edge : report) {
        max_spread = std::max(max_spread, edge.spread);
        for (const auto& g : edge.groups) {
            out << edge.from.to_string() << ',' << edge.goal.to_string() << ',' << g.key << ','
                << g.attempts << ',' << g.successes << ',' << g.rate() << ',' << edge.spread
                << '\n';
        }
    }
    ordered_json summary;
    summary["edges"] = report.size();
    summary["max_spread"] = max_spread;
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int do_export(const CommonArgs& args) {
    const auto cfg = ap::ExperimentConfig::load(args.config_path);
    const ap::TransitionGraph graph = ap::load_graph(cfg, args.artifacts);
    ap::write_text(fs::path(args.artifacts) / ap::artifact_files::kGraphStats,
                   ap::graph_stats_json(graph, cfg));
    // re-aggregate every results table in the directory
    ordered_json all = ordered_json::array();
    for (const auto& entry : fs::directory_iterator(args.artifacts)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("results_", 0) != 0 || entry.path().extension() != ".csv") continue;
        std::string hash;
        const auto rows = ap::read_results_csv(entry.path(), &hash);
        if (hash != cfg.hash()) {
            throw ap::ValidationError("export: results file " + name +
                                      " has mismatched config hash");
        }
        double success = 0;
        for (const auto& r : rows) success += r.true_success;
        ordered_json row;
        row["file"] = name;
        row["tasks"] = rows.size();
        row["success_rate"] = rows.empty() ? 0.0 : success / static_cast<double>(rows.size());
        all.push_back(std::move(row));
    }
    ordered_json out;
    out["config_hash"] = cfg.hash();
    out["results"] = std::move(all);
    ap::write_text(fs::path(args.artifacts) / "summary_all.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Attribute planner: model-based planning over attribute graphs"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string kind = "multi-step";
    std::string mode = "ap";
    std::string baseline_mode;
    std::string out_path;
    uint64_t start_seed = 0, task_seed = 0;

    auto* fit = app.add_subcommand("fit-detector", "fit or configure the attribute detector");
    add_common(fit, args);
    auto* explore_cmd = app.add_subcommand("explore", "run the exploration phase");
    add_common(explore_cmd, args);
    auto* train = app.add_subcommand("train", "train the policy and transition statistics");
    add_common(train, args);
    train->add_option("--baseline", baseline_mode,
                      "train the reactive baseline instead (curriculum|test-tasks)");
    auto* plan_cmd = app.add_subcommand("plan", "plan for an initial state and a task goal");
    add_common(plan_cmd, args);
    plan_cmd->add_option("--start-seed", start_seed, "environment reset seed");
    plan_cmd->add_option("--kind", kind, "task kind");
    plan_cmd->add_option("--task-seed", task_seed, "task generator seed");
    auto* eval_cmd = app.add_subcommand("eval", "evaluate on generated tasks");
    add_common(eval_cmd, args);
    eval_cmd->add_option("--kind", kind, "task kind");
    eval_cmd->add_option("--mode", mode, "ap | ap-ablated | baseline");
    auto* ablate_cmd =
        app.add_subcommand("ablate", "evaluate with exploration-fraction edge probabilities");
    add_common(ablate_cmd, args);
    ablate_cmd->add_option("--kind", kind, "task kind");
    auto* aliasing_cmd = app.add_subcommand("aliasing-report", "per-edge aliasing diagnostic");
    add_common(aliasing_cmd, args);
    aliasing_cmd->add_option("--out", out_path, "output csv path");
    auto* export_cmd = app.add_subcommand("export", "graph statistics and result aggregates");
    add_common(export_cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return do_fit_detector(args);
        if (explore_cmd->parsed()) return do_explore(args);
        if (train->parsed()) return do_train(args, baseline_mode);
        if (plan_cmd->parsed()) return do_plan(args, start_seed, kind, task_seed);
        if (eval_cmd->parsed()) return do_eval(args, kind, mode);
        if (ablate_cmd->parsed()) return do_eval(args, kind, "ap-ablated");
        if (aliasing_cmd->parsed()) return do_aliasing_report(args, out_path);
        if (export_cmd->parsed()) return do_export(args);
    } catch (const ap::ValidationError& e) {
        std::cerr << "{\"error\": \"validation\", \"reason\": \"" << e.what() << "\"}\n";
        return 1;
    } catch (const ap::ContractViolation& e) {
        std::cerr << "{\"error\": \"validation\", \"reason\": \"" << e.what() << "\"}\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": \"runtime\", \"reason\": \"" << e.what() << "\"}\n";
        return 2;
    }
    return 0;
}

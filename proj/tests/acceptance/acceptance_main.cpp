// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// criteria hold. Work artifacts go to a temp directory (keep with
// AP_ACCEPTANCE_KEEP=1, relocate with AP_ACCEPTANCE_WORK=<dir>).

#include "ap/evaluate.hpp"
#include "ap/executor.hpp"
#include "ap/explorer.hpp"
#include "ap/metrics.hpp"
#include "ap/mlp.hpp"
#include "ap/pipeline.hpp"
#include "ap/planner.hpp"
#include "ap/tasks.hpp"

#include "../oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace ap;

namespace {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

std::vector<CriterionResult> g_results;

template <typename Fn>
void run_criterion(int id, const std::string& name, Fn&& fn) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
        r.pass = fn(r.details);
    } catch (const std::exception& e) {
        r.pass = false;
        r.details = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name << " — "
              << r.details << " (" << static_cast<int>(r.seconds) << "s)" << std::endl;
    g_results.push_back(std::move(r));
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

// --- experiment configurations (pinned for the acceptance runs) -----------

ExperimentConfig switches_config(uint64_t seed) {
    ExperimentConfig c;
    c.seed = seed;
    c.env.name = "switches";
    c.explore.steps = 150000;
    c.explore.policy = "count";
    c.explore.bonus = "smoothed";
    c.explore.lr = 0.01;
    c.phase3.steps = 600000;
    c.phase3.max_legs = 1;
    c.phase3.lr = 0.05;
    c.baseline.steps = 600000;
    c.baseline.mode = "curriculum";
    c.baseline.lr = 0.05;
    c.eval.tasks = 1000;
    return c;
}

ExperimentConfig crafting_config(uint64_t seed) {
    ExperimentConfig c;
    c.seed = seed;
    c.env.name = "crafting";
    c.explore.steps = 100000;
    c.explore.policy = "count";
    c.explore.bonus = "smoothed";
    c.explore.lr = 0.01;
    c.phase3.steps = 300000;
    c.phase3.max_legs = 8;
    c.phase3.lr = 0.05;
    c.baseline.steps = 300000;
    c.baseline.mode = "curriculum";
    c.baseline.lr = 0.05;
    c.eval.tasks = 1000;
    return c;
}

ExperimentConfig blocks_config(uint64_t seed, const std::string& detector_mode, double epsilon) {
    ExperimentConfig c;
    c.seed = seed;
    c.env.name = "blocks";
    c.detector.mode = detector_mode;
    c.detector.epsilon = epsilon;
    c.explore.steps = 600000;
    c.explore.policy = "random";
    c.explore.episode_horizon = 1;
    c.phase3.steps = 400000;
    c.phase3.attempt_t_max = 1;
    c.phase3.max_legs = 1;
    c.phase3.gamma = 1.0;  // pi is frozen while statistics are collected
    c.phase3.epoch_attempts = 400000;
    c.phase3.inverse_examples = 600000;
    c.phase3.inverse_epochs = 3;
    c.phase3.inverse_lr = 0.05;
    c.eval.tasks = 1000;
    return c;
}

// --- criterion 1 ------------------------------------------------------------

bool criterion_planner_oracle(std::string& details) {
    Rng rng(20240033);
    std::vector<std::string> names;
    for (int i = 0; i < 8; ++i) names.push_back("bit" + std::to_string(i));
    const AttributeSchema schema(names);
    int solved = 0, unreachable = 0;
    for (int iter = 0; iter < 500; ++iter) {
        const int n = 2 + rng.below_int(7);
        TransitionGraph g(schema, 0.9);
        std::vector<AttributeVector> vecs;
        for (int i = 0; i < n; ++i) {
            std::vector<uint8_t> bits(8, 0);
            for (int b = 0; b < 8; ++b) bits[static_cast<std::size_t>(b)] = (i >> b) & 1;
            vecs.emplace_back(schema, bits);
            g.intern(vecs.back());
        }
        oracle::PathEnum brute;
        brute.n = n;
        brute.prob.assign(static_cast<std::size_t>(n),
                          std::vector<double>(static_cast<std::size_t>(n), -1.0));
        for (int u = 0; u < n; ++u) {
            for (int v = 0; v < n; ++v) {
                if (u == v || rng.next_double() > 0.5) continue;
                const double p = 0.02 + 0.98 * rng.next_double();
                brute.prob[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = p;
                g.record_explore(u, v);
            }
        }
        const EdgeProbFn fn = [&](NodeId a, NodeId b) -> std::optional<double> {
            const double p = brute.prob[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            if (p < 0) return std::nullopt;
            return p;
        };
        const int start = rng.below_int(n);
        const int goal = rng.below_int(n);
        std::vector<uint8_t> is_goal(static_cast<std::size_t>(n), 0);
        is_goal[static_cast<std::size_t>(goal)] = 1;
        const auto result = plan(g, vecs[static_cast<std::size_t>(start)],
                                 GoalSpec::exact(vecs[static_cast<std::size_t>(goal)]), fn);
        const double want = brute.best(start, is_goal, kProbFloor);
        if (std::isinf(want)) {
            if (result.status != PlanStatus::kUnreachable) {
                details = "planner found a path the oracle says does not exist";
                return false;
            }
            ++unreachable;
        } else {
            if (result.status != PlanStatus::kOk || result.plan.total_cost != want) {
                details = "cost mismatch vs brute force at graph " + std::to_string(iter);
                return false;
            }
            ++solved;
        }
    }
    details = "500 graphs: " + std::to_string(solved) + " reachable exact, " +
              std::to_string(unreachable) + " unreachable agreed";
    return true;
}

// --- criterion 7 ------------------------------------------------------------

bool criterion_numerics(std::string& details) {
    Rng rng(77);
    int checked = 0;
    double worst = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        MlpShape shape;
        shape.vocab = 5 + rng.below_int(4);
        shape.tail = 2 + rng.below_int(3);
        shape.hidden1 = 4 + rng.below_int(4);
        shape.hidden2 = 3 + rng.below_int(4);
        shape.outputs = 2 + rng.below_int(4);
        Mlp net(shape);
        net.init_weights(rng);
        std::vector<int> active = {rng.below_int(shape.vocab)};
        std::vector<double> tail;
        for (int i = 0; i < shape.tail; ++i) tail.push_back(rng.sym(1.0));
        const int action = rng.below_int(shape.outputs);

        Mlp::Forward f;
        net.forward(active, tail, f);
        Mlp::Grad grad(shape);
        net.accumulate_log_prob_grad(active, tail, f, action, 1.0, grad);

        auto log_prob = [&]() {
            Mlp::Forward ff;
            net.forward(active, tail, ff);
            return std::log(ff.probs[static_cast<std::size_t>(action)]);
        };
        const double h = 1e-6;
        for (int rep = 0; rep < 10; ++rep) {
            const std::size_t p = rng.below(net.param_count());
            const double orig = net.get_param(p);
            net.set_param(p, orig + h);
            const double up = log_prob();
            net.set_param(p, orig - h);
            const double down = log_prob();
            net.set_param(p, orig);
            const double fd = (up - down) / (2.0 * h);
            const double an = net.grad_param(grad, p);
            if (std::abs(fd) < 1e-7 && std::abs(an) < 1e-7) continue;
            const double rel = std::abs(fd - an) / std::max({1e-8, std::abs(fd), std::abs(an)});
            worst = std::max(worst, rel);
            ++checked;
            if (rel >= 1e-4) {
                details = "gradient mismatch rel=" + fmt(rel);
                return false;
            }
        }
    }

    for (int iter = 0; iter < 200; ++iter) {
        MlpShape shape{4, 2, 5, 5, 6};
        Mlp net(shape);
        net.init_weights(rng);
        Mlp::Forward f;
        std::vector<int> active = {rng.below_int(4)};
        std::vector<double> tail = {rng.sym(3.0), rng.sym(3.0)};
        net.forward(active, tail, f);
        double sum = 0.0;
        for (double p : f.probs) sum += p;
        if (std::abs(sum - 1.0) > 1e-6) {
            details = "softmax normalization off by " + fmt(std::abs(sum - 1.0));
            return false;
        }
    }

    const AttributeSchema s({"a", "b", "c"});
    TransitionGraph g(s, 0.9);
    const auto va = AttributeVector::from_string(s, "100");
    const auto vb = AttributeVector::from_string(s, "010");
    g.record_attempt(va, va, vb);
    g.advance_epoch();
    g.record_attempt(va, vb, vb);
    const double got = *g.edge_probability(*g.find(va), *g.find(vb));
    if (std::abs(got - 1.0 / 1.9) > 1e-12) {
        details = "decayed ratio " + fmt(got) + " != 1/1.9";
        return false;
    }
    TransitionGraph g2(s, 0.9);
    for (int i = 0; i < 3; ++i) g2.record_attempt(va, vb, vb);
    g2.record_attempt(va, va, vb);
    if (std::abs(*g2.edge_probability(*g2.find(va), *g2.find(vb)) - 0.75) > 1e-12) {
        details = "single-epoch ratio != 0.75";
        return false;
    }
    details = std::to_string(checked) + " gradient probes, worst rel err " + fmt(worst);
    return true;
}

// --- criterion 8 ------------------------------------------------------------

bool criterion_determinism(const fs::path& work, std::string& details) {
    ExperimentConfig cfg = crafting_config(12);
    // smaller budgets: determinism does not need full training scale
    cfg.explore.steps = 30000;
    cfg.phase3.steps = 60000;
    cfg.eval.tasks = 200;
    const fs::path d1 = work / "det_run1";
    const fs::path d2 = work / "det_run2";
    run_pipeline(cfg, d1);
    run_pipeline(cfg, d2);
    if (read_text(d1 / artifact_files::kGraph) != read_text(d2 / artifact_files::kGraph)) {
        details = "graph artifacts differ between identical runs";
        return false;
    }
    if (read_text(d1 / artifact_files::kPolicy) != read_text(d2 / artifact_files::kPolicy)) {
        details = "policy artifacts differ between identical runs";
        return false;
    }
    const auto r1 = evaluate(cfg, d1, "unit-goal", "ap");
    const auto r2 = evaluate(cfg, d2, "unit-goal", "ap");
    if (r1.success_rate != r2.success_rate || r1.mean_steps != r2.mean_steps ||
        r1.mean_replans != r2.mean_replans) {
        details = "evaluation aggregates differ between identical runs";
        return false;
    }
    details = "byte-identical graph/policy artifacts, identical eval aggregates (success " +
              fmt(r1.success_rate) + ")";
    return true;
}

// --- criterion 5 ------------------------------------------------------------

bool criterion_exploration_ordering(std::string& details) {
    const auto env = make_env("crafting");
    const Detector det = Detector::exact(*env);
    const auto reachable = oracle::craft_reachable_edges();
    const int64_t budget = 60000;
    const int seeds = 10;
    double count_mean = 0.0, random_mean = 0.0;
    for (int seed = 1; seed <= seeds; ++seed) {
        for (const bool count_based : {true, false}) {
            TransitionGraph graph(env->schema(), 0.9);
            ExploreConfig ec;
            ec.steps = budget;
            ec.policy = count_based ? ExplorePolicyKind::kCount : ExplorePolicyKind::kRandom;
            ec.bonus = BonusKind::kSmoothed;
            ec.lr = 0.01;
            ec.seed = derive_seed(static_cast<uint64_t>(seed), "acceptance-explore");
            const auto summary = explore(*env, det, ec, graph);
            // no phantom edges
            for (NodeId from = 0; from < graph.node_count(); ++from) {
                for (const auto& [to, c] : graph.explore_neighbors(from)) {
                    if (!reachable.count(
                            {graph.node(from).to_string(), graph.node(to).to_string()})) {
                        details = "discovered an edge outside the brute-force reachable set";
                        return false;
                    }
                }
            }
            (count_based ? count_mean : random_mean) +=
                static_cast<double>(summary.distinct_edges) / seeds;
        }
    }
    details = "mean distinct edges: count-based " + fmt(count_mean) + " vs random " +
              fmt(random_mean) + " of " + std::to_string(reachable.size()) + " reachable";
    return count_mean >= random_mean;
}

// --- criteria 2 and 3 (grid-world end to end) --------------------------------

struct EndToEnd {
    double ap_mean = 0.0;
    double baseline_mean = 0.0;
};

EndToEnd grid_world_end_to_end(const fs::path& work, const std::string& env_name,
                               const std::string& kind,
                               ExperimentConfig (*make_cfg)(uint64_t), int seeds) {
    EndToEnd r;
    for (int seed = 1; seed <= seeds; ++seed) {
        const ExperimentConfig cfg = make_cfg(static_cast<uint64_t>(seed));
        const fs::path dir = work / (env_name + "_seed" + std::to_string(seed));
        run_pipeline(cfg, dir);
        const auto ap_result = evaluate(cfg, dir, kind, "ap");
        export_metrics(ap_result, dir);
        train_and_save_baseline(cfg, dir);
        const auto base_result = evaluate(cfg, dir, kind, "baseline");
        export_metrics(base_result, dir);
        r.ap_mean += ap_result.success_rate / seeds;
        r.baseline_mean += base_result.success_rate / seeds;
        std::cout << "    " << env_name << " seed " << seed << ": AP "
                  << fmt(ap_result.success_rate) << ", baseline "
                  << fmt(base_result.success_rate) << std::endl;
    }
    return r;
}

bool criterion_switches(const fs::path& work, std::string& details) {
    const auto r = grid_world_end_to_end(work, "switches", "multi-step", switches_config, 5);
    details = "AP mean " + fmt(r.ap_mean) + " (need >= 0.75), curriculum baseline " +
              fmt(r.baseline_mean) + " (must be lower)";
    return r.ap_mean >= 0.75 && r.baseline_mean < r.ap_mean;
}

bool criterion_crafting(const fs::path& work, std::string& details) {
    const auto r = grid_world_end_to_end(work, "crafting", "unit-goal", crafting_config, 5);
    details = "AP mean " + fmt(r.ap_mean) + " (need >= 0.95), curriculum baseline " +
              fmt(r.baseline_mean) + " (must be lower)";
    return r.ap_mean >= 0.95 && r.baseline_mean < r.ap_mean;
}

// --- criteria 4, 6, 9 (blocks world) -----------------------------------------

struct BlocksRuns {
    fs::path exact_dir;
    double exact_multi = -1.0;
};

BlocksRuns g_blocks;

bool criterion_blocks_ablation(const fs::path& work, std::string& details) {
    const ExperimentConfig cfg = blocks_config(1, "exact", 0.0);
    const fs::path dir = work / "blocks_exact";
    run_pipeline(cfg, dir);
    const auto full = evaluate(cfg, dir, "multi-step", "ap");
    export_metrics(full, dir);
    const auto ablated = evaluate(cfg, dir, "multi-step", "ap-ablated");
    export_metrics(ablated, dir);
    const auto stack = evaluate(cfg, dir, "4-stack", "ap");
    export_metrics(stack, dir);
    g_blocks.exact_dir = dir;
    g_blocks.exact_multi = full.success_rate;
    const double gap = full.success_rate - ablated.success_rate;
    details = "multi-step AP " + fmt(full.success_rate) + " vs ablated " +
              fmt(ablated.success_rate) + " (gap " + fmt(gap) + ", need >= 0.15); 4-stack " +
              fmt(stack.success_rate) + " (need >= 0.90)";
    return gap >= 0.15 && stack.success_rate >= 0.90;
}

bool criterion_detector_robustness(const fs::path& work, std::string& details) {
    if (g_blocks.exact_multi < 0.0) {
        details = "blocks exact run unavailable (criterion 4 failed to produce it)";
        return false;
    }
    const ExperimentConfig cfg = blocks_config(1, "noisy", 0.014);
    const fs::path dir = work / "blocks_noisy";
    run_pipeline(cfg, dir);
    const auto noisy = evaluate(cfg, dir, "multi-step", "ap");
    export_metrics(noisy, dir);
    const double drop = g_blocks.exact_multi - noisy.success_rate;
    details = "multi-step success exact " + fmt(g_blocks.exact_multi) + " vs noisy " +
              fmt(noisy.success_rate) + " (drop " + fmt(drop) + ", allowed <= 0.05)";
    return drop <= 0.05;
}

bool criterion_underspecified(std::string& details) {
    if (g_blocks.exact_dir.empty()) {
        details = "blocks exact artifacts unavailable";
        return false;
    }
    const ExperimentConfig cfg = blocks_config(1, "exact", 0.0);
    const auto env = make_env("blocks");
    const TransitionGraph graph = load_graph(cfg, g_blocks.exact_dir);
    const PlannerIndex index(graph, ProbMode::kDecayed, cfg.phase3.min_attempts);
    const auto tasks =
        generate_tasks(*env, "underspecified", 200, derive_seed(cfg.seed, "underspec"));
    Rng rng(derive_seed(cfg.seed, "underspec-completions"));
    int compared = 0, planned = 0;
    for (const auto& task : tasks) {
        const auto start_attrs = env->true_attributes(env->reset(task.env_seed));
        const auto start = graph.find(start_attrs);
        if (!start) continue;
        const auto multi = index.plan(*start, task.goal);

        // completions: graph nodes satisfying the masked goal
        std::vector<NodeId> satisfying;
        for (NodeId id = 0; id < graph.node_count(); ++id) {
            if (satisfies(graph.node(id), task.goal)) satisfying.push_back(id);
        }
        if (multi.status != PlanStatus::kOk) {
            // multi-target search exhausts the reachable set: no completion may
            // be reachable either
            for (NodeId id : satisfying) {
                if (index.plan_to_node(*start, id).status == PlanStatus::kOk) {
                    details = "multi-target unreachable but a completion was reachable";
                    return false;
                }
            }
            continue;
        }
        ++planned;
        // up to 50 sampled completions
        for (int k = 0; k < 50 && !satisfying.empty(); ++k) {
            const NodeId target = satisfying[rng.below(satisfying.size())];
            const auto single = index.plan_to_node(*start, target);
            if (single.status != PlanStatus::kOk) continue;  // unreachable: cost infinite
            ++compared;
            if (multi.plan.total_cost > single.plan.total_cost + 1e-12) {
                details = "multi-target cost " + fmt(multi.plan.total_cost) +
                          " exceeds completion cost " + fmt(single.plan.total_cost);
                return false;
            }
        }
        if (!satisfies(graph.node(multi.plan.nodes.back()), task.goal)) {
            details = "multi-target plan ends at a non-satisfying node";
            return false;
        }
    }
    details = std::to_string(planned) + "/200 tasks planned, " + std::to_string(compared) +
              " completion comparisons, no violations";
    return planned > 0;
}

}  // namespace

int main() {
    const char* keep = std::getenv("AP_ACCEPTANCE_KEEP");
    const char* work_env = std::getenv("AP_ACCEPTANCE_WORK");
    const fs::path work =
        work_env ? fs::path(work_env) : fs::temp_directory_path() / "ap_acceptance";
    fs::create_directories(work);

    run_criterion(1, "planner oracle equivalence", criterion_planner_oracle);
    run_criterion(7, "numerical properties", criterion_numerics);
    run_criterion(8, "pipeline determinism",
                  [&](std::string& d) { return criterion_determinism(work, d); });
    run_criterion(5, "exploration ordering", criterion_exploration_ordering);
    run_criterion(3, "crafting end-to-end",
                  [&](std::string& d) { return criterion_crafting(work, d); });
    run_criterion(2, "switches end-to-end",
                  [&](std::string& d) { return criterion_switches(work, d); });
    run_criterion(4, "blocks ablation ordering and 4-stack",
                  [&](std::string& d) { return criterion_blocks_ablation(work, d); });
    run_criterion(6, "detector robustness",
                  [&](std::string& d) { return criterion_detector_robustness(work, d); });
    run_criterion(9, "underspecified-goal correctness", criterion_underspecified);

    std::sort(g_results.begin(), g_results.end(),
              [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
    bool all = true;
    std::cout << "\n=== acceptance summary ===" << std::endl;
    for (const auto& r : g_results) {
        all = all && r.pass;
        std::cout << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name
                  << " — " << r.details << std::endl;
    }
    std::cout << (all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << std::endl;
    if (!keep || std::string(keep) != "1") {
        std::error_code ec;
        fs::remove_all(work, ec);
    }
    return all ? 0 : 1;
}

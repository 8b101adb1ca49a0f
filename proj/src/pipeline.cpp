#include "ap/pipeline.hpp"

#include "ap/metrics.hpp"
#include "ap/tasks.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ap {

namespace fs = std::filesystem;

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw PipelineError("cannot write " + p.string());
    out << text;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw PipelineError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

ExploreConfig make_explore_config(const ExperimentConfig& cfg) {
    ExploreConfig ec;
    ec.steps = cfg.explore.steps;
    ec.episode_horizon = cfg.explore.episode_horizon;
    ec.policy = cfg.explore.policy == "count" ? ExplorePolicyKind::kCount
                                              : ExplorePolicyKind::kRandom;
    ec.bonus = cfg.explore.bonus == "smoothed" ? BonusKind::kSmoothed : BonusKind::kSqrt;
    ec.lr = cfg.explore.lr;
    ec.entropy_coef = cfg.explore.entropy_coef;
    ec.hidden1 = cfg.policy.hidden1;
    ec.hidden2 = cfg.policy.hidden2;
    ec.seed = derive_seed(cfg.seed, "explore");
    return ec;
}

// streams written during phase 3: one attempt row per goal attempt, and
// optionally one JSONL trace per episode
struct AttemptStreams {
    std::ofstream attempts;
    std::optional<std::ofstream> traces;

    void open(const fs::path& dir, const std::string& config_hash, bool log_traces) {
        attempts.open(dir / artifact_files::kAttempts, std::ios::trunc);
        attempts << "# config_hash=" << config_hash << "\n";
        attempts << "from,goal,key,success\n";
        if (log_traces) {
            traces.emplace(dir / artifact_files::kTraces, std::ios::trunc);
        }
    }

    void write_attempt(const AttributeVector& from, const AttributeVector& goal,
                       const std::string& key, bool success) {
        attempts << from.to_string() << ',' << goal.to_string() << ',' << key << ','
                 << (success ? 1 : 0) << '\n';
    }

    void write_trace(const EpisodeTrace& trace) {
        if (!traces) return;
        nlohmann::ordered_json j;
        j["seed"] = trace.seed;
        auto records = nlohmann::ordered_json::array();
        for (const auto& r : trace.records) {
            records.push_back({r.state, r.attrs.to_string(), r.action, r.reward,
                               r.goal.to_string()});
        }
        j["records"] = std::move(records);
        *traces << j.dump() << "\n";
    }
};

// one goal attempt: act toward `goal_node` until the attributes change or the
// leg times out; returns the reached node
struct LegOutcome {
    NodeId reached;
    bool success = false;
};

LegOutcome run_leg(const Env& env, const Detector& det, const GoalPolicy& policy,
                   TransitionGraph& graph, EnvState& state, AttributeVector& rho, NodeId from,
                   NodeId goal_node, const ExperimentConfig& cfg, Rng& rng, int64_t& steps_done,
                   std::vector<LegStep>& leg, EpisodeTrace* trace) {
    const GoalSpec leg_goal = GoalSpec::exact(graph.node(goal_node));
    const int t_max = cfg.attempt_t_max_effective();
    leg.clear();
    bool changed = false;
    for (int t = 0; t < t_max; ++t) {
        LegStep s;
        s.active = env.active_features(state);
        policy.assemble_tail(rho, leg_goal, s.tail);
        policy.net().forward(s.active, s.tail, s.fwd);
        const double r = rng.next_double();
        double acc = 0.0;
        s.action = static_cast<int>(s.fwd.probs.size()) - 1;
        for (std::size_t a = 0; a < s.fwd.probs.size(); ++a) {
            acc += s.fwd.probs[a];
            if (r < acc) {
                s.action = static_cast<int>(a);
                break;
            }
        }
        if (trace) {
            trace->records.push_back(
                {env.canonical(state), rho, s.action, cfg.rewards.step, leg_goal});
        }
        state = env.step(state, s.action);
        ++steps_done;
        const AttributeVector next = det.detect(state);
        s.reward = cfg.rewards.step;
        leg.push_back(std::move(s));
        if (next != rho) {
            rho = next;
            changed = true;
            break;
        }
    }
    LegOutcome out{from, false};
    if (changed) out.reached = graph.intern(rho);
    out.success = out.reached == goal_node;
    if (out.success && !leg.empty()) leg.back().reward += cfg.rewards.success;
    if (trace) {
        if (out.success && !trace->records.empty()) {
            trace->records.back().reward += cfg.rewards.success;
        }
        trace->records.push_back({env.canonical(state), rho, -1, 0.0, leg_goal});
    }
    return out;
}

}  // namespace

Detector stage_fit_detector(const ExperimentConfig& cfg, const Env& env) {
    if (cfg.detector.mode == "exact") return Detector::exact(env);
    if (cfg.detector.mode == "noisy") {
        return Detector::noisy(env, cfg.detector.epsilon, derive_seed(cfg.seed, "detector-noise"));
    }
    // learned: label states drawn from short random-action rollouts
    Rng rng(derive_seed(cfg.seed, "detector-data"));
    const int walk = env.name() == "blocks" ? 2 : 80;
    std::vector<LabeledExample> labeled;
    labeled.reserve(static_cast<std::size_t>(cfg.detector.labeled_examples));
    for (int i = 0; i < cfg.detector.labeled_examples; ++i) {
        EnvState s = env.reset(rng.next_u64());
        const int n = rng.below_int(walk);
        for (int t = 0; t < n; ++t) s = env.step(s, rng.below_int(env.action_count()));
        labeled.push_back({env.active_features(s), env.true_attributes(s)});
    }
    DetectorFitConfig fc;
    fc.epochs = cfg.detector.epochs;
    fc.lr = cfg.detector.lr;
    fc.seed = derive_seed(cfg.seed, "detector-fit");
    return Detector::fit(env, labeled, fc);
}

ExploreSummary stage_explore(const ExperimentConfig& cfg, const Env& env, const Detector& det,
                             TransitionGraph& graph) {
    return explore(env, det, make_explore_config(cfg), graph);
}

GoalPolicy stage_phase3(const ExperimentConfig& cfg, const Env& env, const Detector& det,
                        TransitionGraph& graph, const fs::path& dir) {
    if (graph.explore_edge_count() == 0) {
        throw PipelineError("no transitions discovered");
    }
    Rng rng(derive_seed(cfg.seed, "phase3"));
    AttemptStreams streams;
    streams.open(dir, cfg.hash(), cfg.phase3.log_traces);

    const bool blocks = env.name() == "blocks";
    std::optional<GoalPolicy> policy;
    if (blocks) {
        // supervised inverse model from one-step random-action transitions
        Rng data_rng(derive_seed(cfg.seed, "inverse-data"));
        std::vector<InverseExample> data;
        data.reserve(static_cast<std::size_t>(cfg.phase3.inverse_examples));
        while (static_cast<int64_t>(data.size()) < cfg.phase3.inverse_examples) {
            EnvState s = env.reset(data_rng.next_u64());
            const int a = data_rng.below_int(env.action_count());
            const EnvState n = env.step(s, a);
            const AttributeVector before = det.detect(s);
            const AttributeVector after = det.detect(n);
            if (after == before) continue;  // no-op transitions carry no label
            data.push_back({env.active_features(s), after, a});
        }
        InverseTrainConfig ic;
        ic.epochs = cfg.phase3.inverse_epochs;
        ic.lr = cfg.phase3.inverse_lr;
        ic.hidden1 = cfg.policy.hidden1;
        ic.hidden2 = cfg.policy.hidden2;
        ic.seed = derive_seed(cfg.seed, "inverse-train");
        policy = train_inverse_model(env, data, ic).policy;
    } else {
        Rng init_rng(derive_seed(cfg.seed, "policy-init"));
        policy.emplace(env, PolicyLayout{}, cfg.policy.hidden1, cfg.policy.hidden2, init_rng);
    }

    LegUpdater updater(policy->net(), cfg.phase3.lr);
    std::vector<LegStep> leg;

    int64_t steps_done = 0;
    int64_t attempts = 0;
    while (steps_done < cfg.phase3.steps) {
        const uint64_t episode_seed = rng.next_u64();
        EnvState state = env.reset(episode_seed);
        AttributeVector rho = det.detect(state);
        graph.intern(rho);
        EpisodeTrace trace;
        trace.seed = episode_seed;
        EpisodeTrace* trace_ptr = cfg.phase3.log_traces ? &trace : nullptr;

        for (int l = 0; l < cfg.phase3.max_legs && steps_done < cfg.phase3.steps; ++l) {
            const NodeId from = *graph.find(rho);
            const std::string key = env.alias_key(state);
            const auto goal_node = graph.sample_goal(rho, rng);
            if (!goal_node) break;  // unknown or isolated node: reset the episode
            const LegOutcome lo = run_leg(env, det, *policy, graph, state, rho, from, *goal_node,
                                          cfg, rng, steps_done, leg, trace_ptr);
            if (!blocks && !leg.empty()) {
                // entropy keeps the policy stochastic early; the step size
                // anneals to zero so the policy settles and the decayed c_pi
                // statistics converge on its final behavior
                const double progress = static_cast<double>(steps_done) /
                                        static_cast<double>(cfg.phase3.steps);
                const double entropy =
                    cfg.phase3.entropy_coef * std::max(0.3, 1.0 - 1.5 * progress);
                updater.update(leg, entropy, std::max(0.0, 1.0 - progress));
            }
            graph.record_attempt(from, lo.reached, *goal_node);
            streams.write_attempt(graph.node(from), graph.node(*goal_node), key, lo.success);
            ++attempts;
            if (attempts % cfg.phase3.epoch_attempts == 0) graph.advance_epoch();
        }
        streams.write_trace(trace);
    }
    return std::move(*policy);
}

PipelineSummary run_pipeline(const ExperimentConfig& cfg, const fs::path& dir) {
    cfg.validate();
    if (cfg.explore.steps <= 0) throw PipelineError("no transitions discovered");
    fs::create_directories(dir);
    const std::string hash = cfg.hash();
    const auto env = make_env(cfg.env.name, EnvParams{cfg.env.grid});

    write_text(dir / artifact_files::kSchema, env->schema().to_json());

    const Detector det = stage_fit_detector(cfg, *env);
    write_text(dir / artifact_files::kDetector, det.to_json(hash));

    TransitionGraph graph(env->schema(), cfg.phase3.gamma);
    const ExploreSummary es = stage_explore(cfg, *env, det, graph);
    if (es.exploratory_policy) {
        write_text(dir / artifact_files::kExplorerPolicy,
                   es.exploratory_policy->to_json("explorer_policy", hash));
    }
    if (graph.explore_edge_count() == 0) throw PipelineError("no transitions discovered");

    const GoalPolicy pi = stage_phase3(cfg, *env, det, graph, dir);
    write_text(dir / artifact_files::kPolicy, pi.to_json("policy", hash));
    write_text(dir / artifact_files::kGraph, graph.to_json(hash));
    write_text(dir / artifact_files::kGraphStats, graph_stats_json(graph, cfg));

    PipelineSummary summary;
    summary.config_hash = hash;
    summary.graph_nodes = graph.node_count();
    summary.explore_edges = graph.explore_edge_count();
    summary.attempt_edges = graph.attempt_edge_count();
    summary.explore_transitions = es.transitions;
    summary.detector_holdout_error = det.holdout_error();

    nlohmann::ordered_json manifest;
    manifest["version"] = 1;
    manifest["config_hash"] = hash;
    manifest["seed"] = cfg.seed;
    manifest["env"] = cfg.env.name;
    manifest["files"] = {artifact_files::kSchema, artifact_files::kDetector,
                         artifact_files::kGraph, artifact_files::kPolicy,
                         artifact_files::kAttempts, artifact_files::kGraphStats};
    manifest["summary"] = {{"graph_nodes", summary.graph_nodes},
                           {"explore_edges", summary.explore_edges},
                           {"attempt_edges", summary.attempt_edges},
                           {"explore_transitions", summary.explore_transitions},
                           {"detector_holdout_error", summary.detector_holdout_error}};
    write_text(dir / artifact_files::kManifest, manifest.dump(2) + "\n");
    return summary;
}

void train_and_save_baseline(const ExperimentConfig& cfg, const fs::path& dir) {
    const auto env = make_env(cfg.env.name, EnvParams{cfg.env.grid});
    const Detector det = load_detector(cfg, *env, dir);
    const std::string kind = cfg.env.name == "crafting" ? "unit-goal" : "multi-step";
    BaselineTrainConfig bc;
    bc.steps = cfg.baseline.steps;
    bc.lr = cfg.baseline.lr;
    bc.entropy_coef = cfg.baseline.entropy_coef;
    bc.hidden1 = cfg.policy.hidden1;
    bc.hidden2 = cfg.policy.hidden2;
    bc.rewards = {cfg.rewards.success, cfg.rewards.step, cfg.phase3.t_max};
    bc.seed = derive_seed(cfg.seed, "baseline");
    const auto sampler = make_task_sampler(*env, kind, cfg.baseline.mode == "curriculum");
    const GoalPolicy baseline = train_reactive_baseline(*env, det, sampler, bc);
    write_text(dir / artifact_files::kBaseline, baseline.to_json("baseline", cfg.hash()));
}

TransitionGraph load_graph(const ExperimentConfig& cfg, const fs::path& dir) {
    return TransitionGraph::from_json(read_text(dir / artifact_files::kGraph), cfg.hash());
}

Detector load_detector(const ExperimentConfig& cfg, const Env& env, const fs::path& dir) {
    return Detector::from_json(env, read_text(dir / artifact_files::kDetector), cfg.hash());
}

GoalPolicy load_policy(const ExperimentConfig& cfg, const Env& env, const fs::path& dir,
                       const char* file, const char* name) {
    return GoalPolicy::from_json(env, read_text(dir / file), name, cfg.hash());
}

std::vector<EpisodeTrace> load_traces(const Env& env, const fs::path& dir) {
    std::ifstream in(dir / artifact_files::kTraces);
    if (!in) throw PipelineError("no traces artifact; rerun with phase3.log_traces=true");
    std::vector<EpisodeTrace> traces;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        EpisodeTrace t;
        t.seed = j.at("seed").get<uint64_t>();
        for (const auto& r : j.at("records")) {
            TraceRecord rec;
            rec.state = r.at(0).get<std::string>();
            rec.attrs = AttributeVector::from_string(env.schema(), r.at(1).get<std::string>());
            rec.action = r.at(2).get<int>();
            rec.reward = r.at(3).get<double>();
            rec.goal = GoalSpec::from_string(env.schema(), r.at(4).get<std::string>());
            t.records.push_back(std::move(rec));
        }
        traces.push_back(std::move(t));
    }
    return traces;
}

}  // namespace ap

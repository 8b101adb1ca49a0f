#include "ap/config.hpp"

#include "ap/core.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace ap {

namespace {

using nlohmann::json;

void expect_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ValidationError("config: unknown key '" + it.key() + "' in " + where);
        }
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

void ExperimentConfig::validate() const {
    if (env.name != "switches" && env.name != "crafting" && env.name != "blocks") {
        throw ValidationError("config: unknown env '" + env.name + "'");
    }
    if (env.grid < 3 || env.grid > 32) throw ValidationError("config: grid out of range");
    if (detector.mode != "exact" && detector.mode != "learned" && detector.mode != "noisy") {
        throw ValidationError("config: unknown detector mode '" + detector.mode + "'");
    }
    if (detector.epsilon < 0.0 || detector.epsilon > 1.0) {
        throw ValidationError("config: epsilon out of range");
    }
    if (detector.labeled_examples <= 0 && detector.mode == "learned") {
        throw ValidationError("config: labeled_examples must be positive");
    }
    if (explore.steps < 0) throw ValidationError("config: explore.steps must be nonnegative");
    if (explore.policy != "count" && explore.policy != "random") {
        throw ValidationError("config: unknown explore policy");
    }
    if (explore.bonus != "smoothed" && explore.bonus != "sqrt") {
        throw ValidationError("config: unknown explore bonus");
    }
    if (explore.episode_horizon <= 0) throw ValidationError("config: explore horizon");
    if (explore.entropy_coef < 0.0) throw ValidationError("config: entropy_coef");
    if (phase3.steps <= 0) throw ValidationError("config: phase3.steps must be positive");
    if (phase3.t_max <= 0) throw ValidationError("config: t_max must be positive");
    if (phase3.attempt_t_max < 0) throw ValidationError("config: attempt_t_max");
    if (phase3.max_legs <= 0) throw ValidationError("config: max_legs must be positive");
    if (phase3.gamma <= 0.0 || phase3.gamma > 1.0) throw ValidationError("config: gamma");
    if (phase3.epoch_attempts <= 0) throw ValidationError("config: epoch_attempts");
    if (phase3.min_attempts < 0.0) throw ValidationError("config: min_attempts");
    if (policy.hidden1 <= 0 || policy.hidden2 <= 0) throw ValidationError("config: hidden sizes");
    if (baseline.mode != "curriculum" && baseline.mode != "test-tasks") {
        throw ValidationError("config: unknown baseline mode");
    }
    if (baseline.steps <= 0) throw ValidationError("config: baseline.steps");
    if (eval.tasks <= 0) throw ValidationError("config: eval.tasks must be positive");
    if (eval.budget_factor <= 0) throw ValidationError("config: eval.budget_factor");
}

std::string ExperimentConfig::to_json() const {
    json j;  // plain json sorts keys: canonical form
    j["version"] = 1;
    j["seed"] = seed;
    j["env"] = {{"name", env.name}, {"grid", env.grid}};
    j["detector"] = {{"mode", detector.mode},
                     {"epsilon", detector.epsilon},
                     {"labeled_examples", detector.labeled_examples},
                     {"epochs", detector.epochs},
                     {"lr", detector.lr}};
    j["explore"] = {{"steps", explore.steps},
                    {"policy", explore.policy},
                    {"bonus", explore.bonus},
                    {"episode_horizon", explore.episode_horizon},
                    {"lr", explore.lr},
                    {"entropy_coef", explore.entropy_coef}};
    j["phase3"] = {{"steps", phase3.steps},
                   {"t_max", phase3.t_max},
                   {"attempt_t_max", phase3.attempt_t_max},
                   {"max_legs", phase3.max_legs},
                   {"gamma", phase3.gamma},
                   {"epoch_attempts", phase3.epoch_attempts},
                   {"min_attempts", phase3.min_attempts},
                   {"lr", phase3.lr},
                   {"entropy_coef", phase3.entropy_coef},
                   {"inverse_examples", phase3.inverse_examples},
                   {"inverse_epochs", phase3.inverse_epochs},
                   {"inverse_lr", phase3.inverse_lr},
                   {"log_traces", phase3.log_traces}};
    j["policy"] = {{"hidden1", policy.hidden1}, {"hidden2", policy.hidden2}};
    j["rewards"] = {{"success", rewards.success}, {"step", rewards.step}};
    j["baseline"] = {{"steps", baseline.steps},
                     {"mode", baseline.mode},
                     {"lr", baseline.lr},
                     {"entropy_coef", baseline.entropy_coef}};
    j["eval"] = {{"tasks", eval.tasks}, {"budget_factor", eval.budget_factor}};
    return j.dump(2) + "\n";
}

std::string ExperimentConfig::hash() const {
    std::ostringstream os;
    os << std::hex << fnv1a64(to_json());
    return os.str();
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    expect_keys(j, "root",
                {"version", "seed", "env", "detector", "explore", "phase3", "policy", "rewards",
                 "baseline", "eval"});
    if (!j.contains("version") || j["version"].get<int>() != 1) {
        throw ValidationError("config: missing or unsupported version");
    }
    ExperimentConfig c;
    read(j, "seed", c.seed);
    if (j.contains("env")) {
        const auto& o = j["env"];
        expect_keys(o, "env", {"name", "grid"});
        read(o, "name", c.env.name);
        read(o, "grid", c.env.grid);
    }
    if (j.contains("detector")) {
        const auto& o = j["detector"];
        expect_keys(o, "detector", {"mode", "epsilon", "labeled_examples", "epochs", "lr"});
        read(o, "mode", c.detector.mode);
        read(o, "epsilon", c.detector.epsilon);
        read(o, "labeled_examples", c.detector.labeled_examples);
        read(o, "epochs", c.detector.epochs);
        read(o, "lr", c.detector.lr);
    }
    if (j.contains("explore")) {
        const auto& o = j["explore"];
        expect_keys(o, "explore",
                    {"steps", "policy", "bonus", "episode_horizon", "lr", "entropy_coef"});
        read(o, "steps", c.explore.steps);
        read(o, "policy", c.explore.policy);
        read(o, "bonus", c.explore.bonus);
        read(o, "episode_horizon", c.explore.episode_horizon);
        read(o, "lr", c.explore.lr);
        read(o, "entropy_coef", c.explore.entropy_coef);
    }
    if (j.contains("phase3")) {
        const auto& o = j["phase3"];
        expect_keys(o, "phase3",
                    {"steps", "t_max", "attempt_t_max", "max_legs", "gamma", "epoch_attempts",
                     "min_attempts", "lr", "entropy_coef", "inverse_examples", "inverse_epochs",
                     "inverse_lr", "log_traces"});
        read(o, "steps", c.phase3.steps);
        read(o, "t_max", c.phase3.t_max);
        read(o, "attempt_t_max", c.phase3.attempt_t_max);
        read(o, "max_legs", c.phase3.max_legs);
        read(o, "gamma", c.phase3.gamma);
        read(o, "epoch_attempts", c.phase3.epoch_attempts);
        read(o, "min_attempts", c.phase3.min_attempts);
        read(o, "lr", c.phase3.lr);
        read(o, "entropy_coef", c.phase3.entropy_coef);
        read(o, "inverse_examples", c.phase3.inverse_examples);
        read(o, "inverse_epochs", c.phase3.inverse_epochs);
        read(o, "inverse_lr", c.phase3.inverse_lr);
        read(o, "log_traces", c.phase3.log_traces);
    }
    if (j.contains("policy")) {
        const auto& o = j["policy"];
        expect_keys(o, "policy", {"hidden1", "hidden2"});
        read(o, "hidden1", c.policy.hidden1);
        read(o, "hidden2", c.policy.hidden2);
    }
    if (j.contains("rewards")) {
        const auto& o = j["rewards"];
        expect_keys(o, "rewards", {"success", "step"});
        read(o, "success", c.rewards.success);
        read(o, "step", c.rewards.step);
    }
    if (j.contains("baseline")) {
        const auto& o = j["baseline"];
        expect_keys(o, "baseline", {"steps", "mode", "lr", "entropy_coef"});
        read(o, "steps", c.baseline.steps);
        read(o, "mode", c.baseline.mode);
        read(o, "lr", c.baseline.lr);
        read(o, "entropy_coef", c.baseline.entropy_coef);
    }
    if (j.contains("eval")) {
        const auto& o = j["eval"];
        expect_keys(o, "eval", {"tasks", "budget_factor"});
        read(o, "tasks", c.eval.tasks);
        read(o, "budget_factor", c.eval.budget_factor);
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

}  // namespace ap

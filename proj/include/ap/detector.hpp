#pragma once
// Attribute detection f-hat: exact pass-through, learned per-attribute linear
// classifiers, or a noise-injection wrapper over the exact detector.

#include "ap/core.hpp"
#include "ap/env.hpp"

namespace ap {

enum class DetectorMode { kExact, kLearned, kNoisy };

struct LabeledExample {
    std::vector<int> active;  // set feature indices
    AttributeVector attrs;
};

struct DetectorFitConfig {
    int epochs = 8;
    double lr = 0.5;
    double holdout_fraction = 0.2;
    uint64_t seed = 0;
};

class Detector {
public:
    static Detector exact(const Env& env);
    // Deterministic per-state flips at rate epsilon. Flips are a pseudorandom
    // function of (state, bit, seed) so repeated reads of one state agree,
    // like a learned detector's state-consistent errors.
    static Detector noisy(const Env& env, double epsilon, uint64_t seed);
    // One independent binary logistic classifier per attribute.
    static Detector fit(const Env& env, const std::vector<LabeledExample>& labeled,
                        const DetectorFitConfig& cfg);

    AttributeVector detect(const EnvState& s) const;

    DetectorMode mode() const { return mode_; }
    double epsilon() const { return epsilon_; }
    // mean per-bit error on the held-out split (learned mode only)
    double holdout_error() const { return holdout_error_; }

    std::string to_json(const std::string& config_hash) const;
    static Detector from_json(const Env& env, const std::string& text,
                              const std::string& config_hash);

private:
    explicit Detector(const Env& env) : env_(&env) {}

    const Env* env_;
    DetectorMode mode_ = DetectorMode::kExact;
    double epsilon_ = 0.0;
    uint64_t noise_seed_ = 0;
    double holdout_error_ = 0.0;
    // learned mode: per-attribute weights [L x feature_dim] + bias [L]
    std::vector<double> weights_;
    std::vector<double> bias_;
};

}  // namespace ap

#include "ap/detector.hpp"

#include <json.hpp>

#include <cmath>

namespace ap {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// deterministic uniform in [0,1) from (state snapshot, bit, seed)
double flip_draw(const std::string& canonical, std::size_t bit, uint64_t seed) {
    const uint64_t h = splitmix64(fnv1a64(canonical) ^ splitmix64(seed + 0x9e37 * (bit + 1)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

Detector Detector::exact(const Env& env) {
    Detector d(env);
    d.mode_ = DetectorMode::kExact;
    return d;
}

Detector Detector::noisy(const Env& env, double epsilon, uint64_t seed) {
    Detector d(env);
    d.mode_ = DetectorMode::kNoisy;
    d.epsilon_ = epsilon;
    d.noise_seed_ = seed;
    return d;
}

Detector Detector::fit(const Env& env, const std::vector<LabeledExample>& labeled,
                       const DetectorFitConfig& cfg) {
    if (labeled.empty()) throw ContractViolation("detector fit: empty training set");
    const auto dim = static_cast<std::size_t>(env.feature_dim());
    const std::size_t bits = env.schema().length();
    for (const auto& ex : labeled) {
        if (ex.attrs.size() != bits) throw ContractViolation("detector fit: schema mismatch");
    }

    Detector d(env);
    d.mode_ = DetectorMode::kLearned;
    d.weights_.assign(bits * dim, 0.0);
    d.bias_.assign(bits, 0.0);

    const std::size_t holdout =
        std::min(labeled.size() - 1,
                 static_cast<std::size_t>(static_cast<double>(labeled.size()) * cfg.holdout_fraction));
    const std::size_t train_n = labeled.size() - holdout;

    // bits constant across the training split are fixed to the constant label
    std::vector<uint8_t> constant(bits, 1), first(bits);
    for (std::size_t b = 0; b < bits; ++b) first[b] = labeled[0].attrs[b];
    for (std::size_t i = 1; i < train_n; ++i) {
        for (std::size_t b = 0; b < bits; ++b) {
            if (labeled[i].attrs[b] != first[b]) constant[b] = 0;
        }
    }
    for (std::size_t b = 0; b < bits; ++b) {
        if (constant[b]) d.bias_[b] = first[b] ? 20.0 : -20.0;
    }

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(train_n);
    for (std::size_t i = 0; i < train_n; ++i) order[i] = i;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = train_n; i > 1; --i) {
            std::swap(order[i - 1], order[rng.below(i)]);
        }
        for (std::size_t oi : order) {
            const auto& ex = labeled[oi];
            for (std::size_t b = 0; b < bits; ++b) {
                if (constant[b]) continue;
                double z = d.bias_[b];
                double* w = &d.weights_[b * dim];
                for (int a : ex.active) z += w[a];
                const double err = static_cast<double>(ex.attrs[b]) - sigmoid(z);
                const double step = cfg.lr * err;
                for (int a : ex.active) w[a] += step;
                d.bias_[b] += step;
            }
        }
    }

    std::size_t wrong = 0, total = 0;
    for (std::size_t i = train_n; i < labeled.size(); ++i) {
        const auto& ex = labeled[i];
        for (std::size_t b = 0; b < bits; ++b) {
            double z = d.bias_[b];
            const double* w = &d.weights_[b * dim];
            for (int a : ex.active) z += w[a];
            wrong += (z >= 0.0) != (ex.attrs[b] != 0);
            ++total;
        }
    }
    d.holdout_error_ = total ? static_cast<double>(wrong) / static_cast<double>(total) : 0.0;
    return d;
}

AttributeVector Detector::detect(const EnvState& s) const {
    switch (mode_) {
        case DetectorMode::kExact:
            return env_->true_attributes(s);
        case DetectorMode::kNoisy: {
            AttributeVector v = env_->true_attributes(s);
            if (epsilon_ <= 0.0) return v;
            const std::string snap = env_->canonical(s);
            for (std::size_t b = 0; b < v.size(); ++b) {
                if (flip_draw(snap, b, noise_seed_) < epsilon_) v.set(b, !v[b]);
            }
            return v;
        }
        case DetectorMode::kLearned: {
            const auto dim = static_cast<std::size_t>(env_->feature_dim());
            const auto active = env_->active_features(s);
            std::vector<uint8_t> bits(bias_.size());
            for (std::size_t b = 0; b < bias_.size(); ++b) {
                double z = bias_[b];
                const double* w = &weights_[b * dim];
                for (int a : active) z += w[a];
                bits[b] = z >= 0.0;  // sigmoid(z) >= 0.5
            }
            return AttributeVector(env_->schema(), std::move(bits));
        }
    }
    throw std::logic_error("detector: bad mode");
}

std::string Detector::to_json(const std::string& config_hash) const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["config_hash"] = config_hash;
    j["env"] = env_->name();
    switch (mode_) {
        case DetectorMode::kExact: j["mode"] = "exact"; break;
        case DetectorMode::kNoisy: j["mode"] = "noisy"; break;
        case DetectorMode::kLearned: j["mode"] = "learned"; break;
    }
    j["epsilon"] = epsilon_;
    j["noise_seed"] = noise_seed_;
    j["holdout_error"] = holdout_error_;
    if (mode_ == DetectorMode::kLearned) {
        j["weights"] = weights_;
        j["bias"] = bias_;
    }
    return j.dump() + "\n";
}

Detector Detector::from_json(const Env& env, const std::string& text,
                             const std::string& config_hash) {
    auto j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1) throw std::runtime_error("detector: unsupported version");
    if (j.at("config_hash").get<std::string>() != config_hash) {
        throw std::runtime_error("detector: config hash mismatch");
    }
    Detector d(env);
    const auto mode = j.at("mode").get<std::string>();
    d.epsilon_ = j.at("epsilon").get<double>();
    d.noise_seed_ = j.at("noise_seed").get<uint64_t>();
    d.holdout_error_ = j.at("holdout_error").get<double>();
    if (mode == "exact") {
        d.mode_ = DetectorMode::kExact;
    } else if (mode == "noisy") {
        d.mode_ = DetectorMode::kNoisy;
    } else if (mode == "learned") {
        d.mode_ = DetectorMode::kLearned;
        d.weights_ = j.at("weights").get<std::vector<double>>();
        d.bias_ = j.at("bias").get<std::vector<double>>();
        const auto dim = static_cast<std::size_t>(env.feature_dim());
        if (d.weights_.size() != env.schema().length() * dim ||
            d.bias_.size() != env.schema().length()) {
            throw std::runtime_error("detector: weight shape mismatch");
        }
    } else {
        throw std::runtime_error("detector: unknown mode " + mode);
    }
    return d;
}

}  // namespace ap

#pragma once
// Deterministic, seed-reproducible symbolic environments. States are value
// types; step() is a pure function of (state, action).

#include "ap/core.hpp"

#include <memory>

namespace ap {

struct EnvState {
    std::vector<int16_t> v;

    bool operator==(const EnvState& o) const { return v == o.v; }
};

class Env {
public:
    virtual ~Env() = default;

    virtual std::string name() const = 0;
    virtual const AttributeSchema& schema() const = 0;
    virtual int action_count() const = 0;
    virtual std::string action_name(int action) const = 0;

    virtual EnvState reset(uint64_t seed) const = 0;
    virtual EnvState step(const EnvState& s, int action) const = 0;
    virtual AttributeVector true_attributes(const EnvState& s) const = 0;

    // Bag-of-words style indicator features. feature_encoding materializes the
    // dense vector; active_features lists the set indices (all indicators are
    // 0/1) for the sparse first-layer path.
    virtual int feature_dim() const = 0;
    virtual std::vector<int> active_features(const EnvState& s) const = 0;
    std::vector<double> feature_encoding(const EnvState& s) const;

    // Canonical serialized snapshot, parseable by the same env.
    virtual std::string canonical(const EnvState& s) const = 0;
    virtual EnvState parse(const std::string& snapshot) const = 0;

    // Coarse source-state key used by the aliasing diagnostic.
    virtual std::string alias_key(const EnvState& s) const = 0;
};

struct EnvParams {
    int grid = 6;  // grid worlds only
};

std::unique_ptr<Env> make_env(const std::string& name, const EnvParams& params = {});

}  // namespace ap

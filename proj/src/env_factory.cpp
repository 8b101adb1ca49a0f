#include "ap/env.hpp"

namespace ap {

std::vector<double> Env::feature_encoding(const EnvState& s) const {
    std::vector<double> x(feature_dim(), 0.0);
    for (int i : active_features(s)) x[static_cast<std::size_t>(i)] = 1.0;
    return x;
}

std::unique_ptr<Env> make_switches_env(const EnvParams&);
std::unique_ptr<Env> make_crafting_env(const EnvParams&);
std::unique_ptr<Env> make_blocks_env(const EnvParams&);

std::unique_ptr<Env> make_env(const std::string& name, const EnvParams& params) {
    if (name == "switches") return make_switches_env(params);
    if (name == "crafting") return make_crafting_env(params);
    if (name == "blocks") return make_blocks_env(params);
    throw std::runtime_error("unknown environment: " + name);
}

}  // namespace ap

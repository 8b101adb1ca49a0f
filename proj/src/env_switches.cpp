// Colored switches grid world: four switches, each cycling through four
// colors when toggled by an agent standing on it. Attributes are the one-hot
// switch colors (16 bits).

#include "ap/env.hpp"

#include <sstream>

namespace ap {

namespace {

constexpr int kSwitches = 4;
constexpr int kColors = 4;

// state layout: [ax, ay, sx0, sy0, c0, ..., sx3, sy3, c3]
constexpr int kAgentX = 0;
constexpr int kAgentY = 1;
int sw_field(int i, int f) { return 2 + 3 * i + f; }  // f: 0=x 1=y 2=color

class SwitchesEnv final : public Env {
public:
    explicit SwitchesEnv(const EnvParams& params) : grid_(params.grid) {
        std::vector<std::string> names;
        for (int i = 0; i < kSwitches; ++i) {
            for (int c = 0; c < kColors; ++c) {
                names.push_back("switch" + std::to_string(i) + "_color" + std::to_string(c));
            }
        }
        schema_ = AttributeSchema(std::move(names));
        window_ = 2 * grid_ - 1;
    }

    std::string name() const override { return "switches"; }
    const AttributeSchema& schema() const override { return schema_; }
    int action_count() const override { return 5; }

    std::string action_name(int action) const override {
        static const char* kNames[] = {"up", "right", "down", "left", "toggle"};
        return kNames[action];
    }

    EnvState reset(uint64_t seed) const override {
        Rng rng(seed);
        EnvState s;
        s.v.assign(2 + 3 * kSwitches, 0);
        s.v[kAgentX] = static_cast<int16_t>(rng.below_int(grid_));
        s.v[kAgentY] = static_cast<int16_t>(rng.below_int(grid_));
        // distinct switch cells via partial Fisher-Yates
        std::vector<int> cells(static_cast<std::size_t>(grid_ * grid_));
        for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<int>(i);
        for (int i = 0; i < kSwitches; ++i) {
            const int j = i + rng.below_int(static_cast<int>(cells.size()) - i);
            std::swap(cells[i], cells[j]);
            s.v[sw_field(i, 0)] = static_cast<int16_t>(cells[i] % grid_);
            s.v[sw_field(i, 1)] = static_cast<int16_t>(cells[i] / grid_);
        }
        for (int i = 0; i < kSwitches; ++i) {
            s.v[sw_field(i, 2)] = static_cast<int16_t>(rng.below_int(kColors));
        }
        return s;
    }

    EnvState step(const EnvState& s, int action) const override {
        EnvState n = s;
        switch (action) {
            case 0: n.v[kAgentY] = static_cast<int16_t>(std::max(0, s.v[kAgentY] - 1)); break;
            case 1: n.v[kAgentX] = static_cast<int16_t>(std::min(grid_ - 1, s.v[kAgentX] + 1)); break;
            case 2: n.v[kAgentY] = static_cast<int16_t>(std::min(grid_ - 1, s.v[kAgentY] + 1)); break;
            case 3: n.v[kAgentX] = static_cast<int16_t>(std::max(0, s.v[kAgentX] - 1)); break;
            case 4:
                for (int i = 0; i < kSwitches; ++i) {
                    if (s.v[sw_field(i, 0)] == s.v[kAgentX] && s.v[sw_field(i, 1)] == s.v[kAgentY]) {
                        n.v[sw_field(i, 2)] = static_cast<int16_t>((s.v[sw_field(i, 2)] + 1) % kColors);
                        break;  // switch cells are distinct
                    }
                }
                break;
            default: throw ContractViolation("switches: bad action");
        }
        return n;
    }

    AttributeVector true_attributes(const EnvState& s) const override {
        std::vector<uint8_t> bits(schema_.length(), 0);
        for (int i = 0; i < kSwitches; ++i) {
            bits[static_cast<std::size_t>(i * kColors + s.v[sw_field(i, 2)])] = 1;
        }
        return AttributeVector(schema_, std::move(bits));
    }

    // each switch contributes two words at its relative location: its name
    // (switch_i) and its name-color pair (switch_i_color_c)
    int feature_dim() const override {
        return (kSwitches + kSwitches * kColors) * window_ * window_;
    }

    std::vector<int> active_features(const EnvState& s) const override {
        std::vector<int> idx;
        idx.reserve(2 * kSwitches);
        for (int i = 0; i < kSwitches; ++i) {
            const int dx = s.v[sw_field(i, 0)] - s.v[kAgentX] + grid_ - 1;
            const int dy = s.v[sw_field(i, 1)] - s.v[kAgentY] + grid_ - 1;
            const int loc = dy * window_ + dx;
            idx.push_back(i * window_ * window_ + loc);
            const int pair_word = kSwitches + i * kColors + s.v[sw_field(i, 2)];
            idx.push_back(pair_word * window_ * window_ + loc);
        }
        return idx;
    }

    std::string canonical(const EnvState& s) const override {
        std::ostringstream os;
        os << "switches";
        for (int16_t x : s.v) os << ',' << x;
        return os.str();
    }

    EnvState parse(const std::string& snapshot) const override {
        std::istringstream is(snapshot);
        std::string head;
        std::getline(is, head, ',');
        if (head != "switches") throw ContractViolation("switches: bad snapshot");
        EnvState s;
        std::string tok;
        while (std::getline(is, tok, ',')) s.v.push_back(static_cast<int16_t>(std::stoi(tok)));
        if (s.v.size() != static_cast<std::size_t>(2 + 3 * kSwitches)) {
            throw ContractViolation("switches: bad snapshot length");
        }
        return s;
    }

    std::string alias_key(const EnvState& s) const override {
        const int half = grid_ / 2;
        return std::string("q") + (s.v[kAgentX] < half ? '0' : '1') + (s.v[kAgentY] < half ? '0' : '1');
    }

private:
    int grid_;
    int window_;
    AttributeSchema schema_;
};

}  // namespace

std::unique_ptr<Env> make_switches_env(const EnvParams& params) {
    return std::make_unique<SwitchesEnv>(params);
}

}  // namespace ap

// Crafting grid world: three resources to grab, three products to craft at
// their own table squares. Attributes are the six inventory bits. Recipes:
// plank <- wood, rope <- grass, bridge <- plank + rope + ore. Crafting does
// not consume ingredients; resources are single-count.

#include "ap/env.hpp"

#include <array>
#include <sstream>

namespace ap {

namespace {

// inventory/attribute order
enum Item { kWood = 0, kOre = 1, kGrass = 2, kPlank = 3, kRope = 4, kBridge = 5 };
constexpr int kResources = 3;
constexpr int kProducts = 3;
constexpr int kItems = kResources + kProducts;

// prereq bitmasks per product (indexed by Item - kResources)
constexpr std::array<uint8_t, kProducts> kPrereq = {
    uint8_t{1u << kWood},
    uint8_t{1u << kGrass},
    uint8_t{(1u << kPlank) | (1u << kRope) | (1u << kOre)},
};

// state layout:
//   [ax, ay,
//    wood_x, wood_y, wood_present, ore_x, ore_y, ore_present, grass_x, grass_y, grass_present,
//    plank_tx, plank_ty, rope_tx, rope_ty, bridge_tx, bridge_ty,
//    inv_wood, inv_ore, inv_grass, inv_plank, inv_rope, inv_bridge]
constexpr int kAgentX = 0;
constexpr int kAgentY = 1;
int res_field(int r, int f) { return 2 + 3 * r + f; }       // f: 0=x 1=y 2=present
int table_field(int p, int f) { return 11 + 2 * p + f; }    // f: 0=x 1=y
int inv_field(int item) { return 17 + item; }

class CraftingEnv final : public Env {
public:
    explicit CraftingEnv(const EnvParams& params) : grid_(params.grid) {
        schema_ = AttributeSchema({"inv_wood", "inv_ore", "inv_grass", "inv_plank", "inv_rope",
                                   "inv_bridge"});
        window_ = 2 * grid_ - 1;
    }

    std::string name() const override { return "crafting"; }
    const AttributeSchema& schema() const override { return schema_; }
    int action_count() const override { return 6; }

    std::string action_name(int action) const override {
        static const char* kNames[] = {"up", "right", "down", "left", "grab", "craft"};
        return kNames[action];
    }

    EnvState reset(uint64_t seed) const override {
        Rng rng(seed);
        EnvState s;
        s.v.assign(17 + kItems, 0);
        s.v[kAgentX] = static_cast<int16_t>(rng.below_int(grid_));
        s.v[kAgentY] = static_cast<int16_t>(rng.below_int(grid_));
        // six distinct cells: three resources then three tables
        std::vector<int> cells(static_cast<std::size_t>(grid_ * grid_));
        for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<int>(i);
        for (int i = 0; i < kResources + kProducts; ++i) {
            const int j = i + rng.below_int(static_cast<int>(cells.size()) - i);
            std::swap(cells[i], cells[j]);
            const int x = cells[i] % grid_;
            const int y = cells[i] / grid_;
            if (i < kResources) {
                s.v[res_field(i, 0)] = static_cast<int16_t>(x);
                s.v[res_field(i, 1)] = static_cast<int16_t>(y);
                s.v[res_field(i, 2)] = 1;
            } else {
                s.v[table_field(i - kResources, 0)] = static_cast<int16_t>(x);
                s.v[table_field(i - kResources, 1)] = static_cast<int16_t>(y);
            }
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
                for (int r = 0; r < kResources; ++r) {
                    if (s.v[res_field(r, 2)] && s.v[res_field(r, 0)] == s.v[kAgentX] &&
                        s.v[res_field(r, 1)] == s.v[kAgentY]) {
                        n.v[res_field(r, 2)] = 0;
                        n.v[inv_field(r)] = 1;
                        break;
                    }
                }
                break;
            case 5:
                for (int p = 0; p < kProducts; ++p) {
                    if (s.v[table_field(p, 0)] != s.v[kAgentX] ||
                        s.v[table_field(p, 1)] != s.v[kAgentY]) {
                        continue;
                    }
                    const int item = kResources + p;
                    if (s.v[inv_field(item)]) break;
                    bool have_all = true;
                    for (int i = 0; i < kItems; ++i) {
                        if ((kPrereq[static_cast<std::size_t>(p)] >> i) & 1) {
                            have_all = have_all && s.v[inv_field(i)] != 0;
                        }
                    }
                    if (have_all) n.v[inv_field(item)] = 1;
                    break;
                }
                break;
            default: throw ContractViolation("crafting: bad action");
        }
        return n;
    }

    AttributeVector true_attributes(const EnvState& s) const override {
        std::vector<uint8_t> bits(static_cast<std::size_t>(kItems), 0);
        for (int i = 0; i < kItems; ++i) bits[static_cast<std::size_t>(i)] = s.v[inv_field(i)] != 0;
        return AttributeVector(schema_, std::move(bits));
    }

    // words: resource presence (3) + tables (3) at relative locations, plus
    // one non-located indicator per inventory item
    int feature_dim() const override { return kItems * window_ * window_ + kItems; }

    std::vector<int> active_features(const EnvState& s) const override {
        std::vector<int> idx;
        const int wa = window_ * window_;
        for (int r = 0; r < kResources; ++r) {
            if (!s.v[res_field(r, 2)]) continue;
            const int dx = s.v[res_field(r, 0)] - s.v[kAgentX] + grid_ - 1;
            const int dy = s.v[res_field(r, 1)] - s.v[kAgentY] + grid_ - 1;
            idx.push_back(r * wa + dy * window_ + dx);
        }
        for (int p = 0; p < kProducts; ++p) {
            const int dx = s.v[table_field(p, 0)] - s.v[kAgentX] + grid_ - 1;
            const int dy = s.v[table_field(p, 1)] - s.v[kAgentY] + grid_ - 1;
            idx.push_back((kResources + p) * wa + dy * window_ + dx);
        }
        for (int i = 0; i < kItems; ++i) {
            if (s.v[inv_field(i)]) idx.push_back(kItems * wa + i);
        }
        return idx;
    }

    std::string canonical(const EnvState& s) const override {
        std::ostringstream os;
        os << "crafting";
        for (int16_t x : s.v) os << ',' << x;
        return os.str();
    }

    EnvState parse(const std::string& snapshot) const override {
        std::istringstream is(snapshot);
        std::string head;
        std::getline(is, head, ',');
        if (head != "crafting") throw ContractViolation("crafting: bad snapshot");
        EnvState s;
        std::string tok;
        while (std::getline(is, tok, ',')) s.v.push_back(static_cast<int16_t>(std::stoi(tok)));
        if (s.v.size() != static_cast<std::size_t>(17 + kItems)) {
            throw ContractViolation("crafting: bad snapshot length");
        }
        return s;
    }

    std::string alias_key(const EnvState& s) const override {
        std::string k = "res";
        for (int r = 0; r < kResources; ++r) k.push_back(s.v[res_field(r, 2)] ? '1' : '0');
        return k;
    }

private:
    int grid_;
    int window_;
    AttributeSchema schema_;
};

}  // namespace

std::unique_ptr<Env> make_crafting_env(const EnvParams& params) {
    return std::make_unique<CraftingEnv>(params);
}

}  // namespace ap

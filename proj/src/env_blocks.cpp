// Discrete blocks world: four colored blocks on a 3x3 grid of positions.
// Actions drop a block onto a cell (4 x 9 = 36). A block underneath another
// cannot be moved; dropping onto an occupied cell stacks on top. Attributes
// are 36 bits over the 12 ordered block pairs x {left-of, behind-of,
// on-top-of}, comparing the grid coordinates of each block's column.

#include "ap/env.hpp"

#include <array>
#include <sstream>

namespace ap {

namespace {

constexpr int kBlocks = 4;
constexpr int kCells = 9;
constexpr int kSide = 3;
constexpr int kLevels = 4;
const std::array<const char*, kBlocks> kBlockNames = {"red", "green", "blue", "yellow"};

// state layout: [cell0, height0, cell1, height1, cell2, height2, cell3, height3]
int cell_of(const EnvState& s, int b) { return s.v[static_cast<std::size_t>(2 * b)]; }
int height_of(const EnvState& s, int b) { return s.v[static_cast<std::size_t>(2 * b + 1)]; }

// index of ordered pair (a,b), a != b, a-major
int pair_index(int a, int b) { return a * (kBlocks - 1) + (b < a ? b : b - 1); }

class BlocksEnv final : public Env {
public:
    explicit BlocksEnv(const EnvParams&) {
        std::vector<std::string> names;
        for (int a = 0; a < kBlocks; ++a) {
            for (int b = 0; b < kBlocks; ++b) {
                if (a == b) continue;
                const std::string pair =
                    std::string("(") + kBlockNames[static_cast<std::size_t>(a)] + "," +
                    kBlockNames[static_cast<std::size_t>(b)] + ")";
                names.push_back("left_of" + pair);
                names.push_back("behind_of" + pair);
                names.push_back("on_top_of" + pair);
            }
        }
        schema_ = AttributeSchema(std::move(names));
    }

    std::string name() const override { return "blocks"; }
    const AttributeSchema& schema() const override { return schema_; }
    int action_count() const override { return kBlocks * kCells; }

    std::string action_name(int action) const override {
        const int b = action / kCells;
        const int c = action % kCells;
        return std::string("drop_") + kBlockNames[static_cast<std::size_t>(b)] + "_at_" +
               std::to_string(c % kSide) + "," + std::to_string(c / kSide);
    }

    EnvState reset(uint64_t seed) const override {
        Rng rng(seed);
        EnvState s;
        s.v.assign(2 * kBlocks, 0);
        // random placement order so any stack order is reachable
        std::array<int, kBlocks> order = {0, 1, 2, 3};
        for (int i = 0; i < kBlocks - 1; ++i) {
            const int j = i + rng.below_int(kBlocks - i);
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }
        std::array<int, kCells> count = {};
        for (int b : order) {
            const int c = rng.below_int(kCells);
            s.v[static_cast<std::size_t>(2 * b)] = static_cast<int16_t>(c);
            s.v[static_cast<std::size_t>(2 * b + 1)] = static_cast<int16_t>(count[static_cast<std::size_t>(c)]++);
        }
        return s;
    }

    EnvState step(const EnvState& s, int action) const override {
        if (action < 0 || action >= action_count()) throw ContractViolation("blocks: bad action");
        const int b = action / kCells;
        const int target = action % kCells;
        const int from = cell_of(s, b);
        const int h = height_of(s, b);
        // immovable if some block sits directly above
        for (int o = 0; o < kBlocks; ++o) {
            if (o != b && cell_of(s, o) == from && height_of(s, o) > h) return s;
        }
        if (target == from) return s;  // placing back on its own column
        EnvState n = s;
        int target_count = 0;
        for (int o = 0; o < kBlocks; ++o) {
            if (o != b && cell_of(s, o) == target) ++target_count;
        }
        n.v[static_cast<std::size_t>(2 * b)] = static_cast<int16_t>(target);
        n.v[static_cast<std::size_t>(2 * b + 1)] = static_cast<int16_t>(target_count);
        return n;
    }

    AttributeVector true_attributes(const EnvState& s) const override {
        std::vector<uint8_t> bits(schema_.length(), 0);
        std::size_t k = 0;
        for (int a = 0; a < kBlocks; ++a) {
            for (int b = 0; b < kBlocks; ++b) {
                if (a == b) continue;
                const int ax = cell_of(s, a) % kSide, ay = cell_of(s, a) / kSide;
                const int bx = cell_of(s, b) % kSide, by = cell_of(s, b) / kSide;
                bits[k++] = ax < bx;
                bits[k++] = ay < by;
                bits[k++] = cell_of(s, a) == cell_of(s, b) && height_of(s, a) == height_of(s, b) + 1;
            }
        }
        return AttributeVector(schema_, std::move(bits));
    }

    // per-cell stack-content indicators: (cell, level, block) occupancy plus
    // (cell, upper, lower) vertical adjacency within the stack
    int feature_dim() const override {
        return kCells * kLevels * kBlocks + kCells * kBlocks * (kBlocks - 1);
    }

    std::vector<int> active_features(const EnvState& s) const override {
        std::vector<int> idx;
        idx.reserve(kBlocks + kBlocks - 1);
        for (int b = 0; b < kBlocks; ++b) {
            idx.push_back(cell_of(s, b) * kLevels * kBlocks + height_of(s, b) * kBlocks + b);
        }
        const int base = kCells * kLevels * kBlocks;
        for (int a = 0; a < kBlocks; ++a) {
            for (int b = 0; b < kBlocks; ++b) {
                if (a == b) continue;
                if (cell_of(s, a) == cell_of(s, b) && height_of(s, a) == height_of(s, b) + 1) {
                    idx.push_back(base + cell_of(s, a) * kBlocks * (kBlocks - 1) +
                                  pair_index(a, b));
                }
            }
        }
        return idx;
    }

    std::string canonical(const EnvState& s) const override {
        std::ostringstream os;
        os << "blocks";
        for (int16_t x : s.v) os << ',' << x;
        return os.str();
    }

    EnvState parse(const std::string& snapshot) const override {
        std::istringstream is(snapshot);
        std::string head;
        std::getline(is, head, ',');
        if (head != "blocks") throw ContractViolation("blocks: bad snapshot");
        EnvState s;
        std::string tok;
        while (std::getline(is, tok, ',')) s.v.push_back(static_cast<int16_t>(std::stoi(tok)));
        if (s.v.size() != static_cast<std::size_t>(2 * kBlocks)) {
            throw ContractViolation("blocks: bad snapshot length");
        }
        return s;
    }

    // column occupancy pattern
    std::string alias_key(const EnvState& s) const override {
        std::string k(kCells, '0');
        for (int b = 0; b < kBlocks; ++b) k[static_cast<std::size_t>(cell_of(s, b))] = '1';
        return k;
    }

private:
    AttributeSchema schema_;
};

}  // namespace

std::unique_ptr<Env> make_blocks_env(const EnvParams& params) {
    return std::make_unique<BlocksEnv>(params);
}

}  // namespace ap

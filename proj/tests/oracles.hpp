#pragma once
// Independent oracles used by the unit and acceptance suites. These stay
// deliberately separate from the library implementations they check.

#include "ap/core.hpp"
#include "ap/env.hpp"

#include <array>
#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// --- blocks heap simulation --------------------------------------------

// Stacks per cell, bottom to top. Built from a blocks EnvState snapshot but
// with its own dynamics and attribute computation.
struct Heap {
    std::array<std::vector<int>, 9> stacks;

    static Heap from_state(const ap::EnvState& s) {
        Heap h;
        // state is [cell, height] per block; insert in height order
        std::array<std::array<int, 4>, 9> slots{};
        std::array<int, 9> count{};
        for (int b = 0; b < 4; ++b) {
            const int cell = s.v[static_cast<std::size_t>(2 * b)];
            const int height = s.v[static_cast<std::size_t>(2 * b + 1)];
            slots[static_cast<std::size_t>(cell)][static_cast<std::size_t>(height)] = b;
            ++count[static_cast<std::size_t>(cell)];
        }
        for (int c = 0; c < 9; ++c) {
            for (int l = 0; l < count[static_cast<std::size_t>(c)]; ++l) {
                h.stacks[static_cast<std::size_t>(c)].push_back(
                    slots[static_cast<std::size_t>(c)][static_cast<std::size_t>(l)]);
            }
        }
        return h;
    }

    int cell_of(int block) const {
        for (int c = 0; c < 9; ++c) {
            for (int b : stacks[static_cast<std::size_t>(c)]) {
                if (b == block) return c;
            }
        }
        return -1;
    }

    bool is_top(int block) const {
        const int c = cell_of(block);
        return stacks[static_cast<std::size_t>(c)].back() == block;
    }

    // drop `block` on `cell`; no effect if the block is buried or already there
    Heap step(int block, int cell) const {
        Heap next = *this;
        const int from = cell_of(block);
        if (!is_top(block) || from == cell) return next;
        next.stacks[static_cast<std::size_t>(from)].pop_back();
        next.stacks[static_cast<std::size_t>(cell)].push_back(block);
        return next;
    }

    // 36 bits in the schema order: ordered pairs (a,b), a-major, skipping
    // a == b, each pair contributing [left, behind, on-top]
    std::vector<uint8_t> attributes() const {
        std::array<int, 4> cell{}, level{};
        for (int c = 0; c < 9; ++c) {
            const auto& st = stacks[static_cast<std::size_t>(c)];
            for (std::size_t l = 0; l < st.size(); ++l) {
                cell[static_cast<std::size_t>(st[l])] = c;
                level[static_cast<std::size_t>(st[l])] = static_cast<int>(l);
            }
        }
        std::vector<uint8_t> bits;
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                if (a == b) continue;
                const auto ai = static_cast<std::size_t>(a);
                const auto bi = static_cast<std::size_t>(b);
                bits.push_back(cell[ai] % 3 < cell[bi] % 3);
                bits.push_back(cell[ai] / 3 < cell[bi] / 3);
                bits.push_back(cell[ai] == cell[bi] && level[ai] == level[bi] + 1);
            }
        }
        return bits;
    }

    bool legal() const {
        int placed = 0;
        std::array<int, 4> seen{};
        for (const auto& st : stacks) {
            for (int b : st) {
                ++placed;
                ++seen[static_cast<std::size_t>(b)];
            }
        }
        bool ok = placed == 4;
        for (int b = 0; b < 4; ++b) ok = ok && seen[static_cast<std::size_t>(b)] == 1;
        return ok;
    }
};

// --- crafting reachable edges -------------------------------------------

// Abstract inventory dynamics for the recipe set {plank<-wood, rope<-grass,
// bridge<-plank+rope+ore}: grabbing sets a resource bit once, crafting sets a
// product bit when its inputs are present. Independent of the env and of
// tasks.cpp.
inline std::vector<int> craft_successors(int inv) {
    std::vector<int> next;
    const int wood = 1 << 0, ore = 1 << 1, grass = 1 << 2;
    const int plank = 1 << 3, rope = 1 << 4, bridge = 1 << 5;
    for (int r : {wood, ore, grass}) {
        if (!(inv & r)) next.push_back(inv | r);
    }
    if (!(inv & plank) && (inv & wood)) next.push_back(inv | plank);
    if (!(inv & rope) && (inv & grass)) next.push_back(inv | rope);
    if (!(inv & bridge) && (inv & plank) && (inv & rope) && (inv & ore)) {
        next.push_back(inv | bridge);
    }
    return next;
}

inline std::string craft_bits(int inv) {
    std::string s(6, '0');
    for (int i = 0; i < 6; ++i) {
        if ((inv >> i) & 1) s[static_cast<std::size_t>(i)] = '1';
    }
    return s;
}

// all (from,to) attribute-bit-string edges reachable from the empty inventory
inline std::set<std::pair<std::string, std::string>> craft_reachable_edges() {
    std::set<std::pair<std::string, std::string>> edges;
    std::set<int> seen{0};
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        const int inv = frontier.back();
        frontier.pop_back();
        for (int next : craft_successors(inv)) {
            edges.insert({craft_bits(inv), craft_bits(next)});
            if (seen.insert(next).second) frontier.push_back(next);
        }
    }
    return edges;
}

inline std::set<std::string> craft_reachable_nodes() {
    std::set<std::string> nodes{craft_bits(0)};
    std::set<int> seen{0};
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        const int inv = frontier.back();
        frontier.pop_back();
        for (int next : craft_successors(inv)) {
            if (seen.insert(next).second) {
                nodes.insert(craft_bits(next));
                frontier.push_back(next);
            }
        }
    }
    return nodes;
}

// --- simple-path enumeration ---------------------------------------------

// minimum over all simple paths of the left-to-right sum of -log(max(p,floor));
// infinity when no path reaches a goal node
struct PathEnum {
    int n = 0;
    // adjacency: edge probabilities, -1 for absent
    std::vector<std::vector<double>> prob;

    double best(int start, const std::vector<uint8_t>& is_goal, double floor_p) const {
        std::vector<uint8_t> used(static_cast<std::size_t>(n), 0);
        double best_cost = std::numeric_limits<double>::infinity();
        dfs(start, 0.0, used, is_goal, floor_p, best_cost);
        return best_cost;
    }

private:
    void dfs(int u, double cost, std::vector<uint8_t>& used, const std::vector<uint8_t>& is_goal,
             double floor_p, double& best_cost) const {
        if (is_goal[static_cast<std::size_t>(u)]) {
            if (cost < best_cost) best_cost = cost;
            return;  // extending past a goal can only add nonnegative cost
        }
        used[static_cast<std::size_t>(u)] = 1;
        for (int v = 0; v < n; ++v) {
            const double p = prob[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
            if (p < 0.0 || used[static_cast<std::size_t>(v)]) continue;
            dfs(v, cost + -std::log(std::max(p, floor_p)), used, is_goal, floor_p, best_cost);
        }
        used[static_cast<std::size_t>(u)] = 0;
    }
};

}  // namespace oracle

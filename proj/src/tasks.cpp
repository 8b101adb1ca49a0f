#include "ap/tasks.hpp"

#include "ap/config.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace ap {

namespace {

bool kind_valid(const std::string& env, const std::string& kind) {
    if (kind == "multi-step") return true;
    if (kind == "4-stack" || kind == "underspecified") return env == "blocks";
    if (kind == "unit-goal") return env == "crafting";
    return false;
}

GoalSpec sample_goal(const Env& env, const std::string& kind, Rng& rng) {
    const auto& schema = env.schema();
    const std::size_t len = schema.length();
    if (kind == "multi-step") {
        return GoalSpec::exact(env.true_attributes(env.reset(rng.next_u64())));
    }
    if (kind == "underspecified") {
        const AttributeVector target = env.true_attributes(env.reset(rng.next_u64()));
        const auto specified =
            static_cast<std::size_t>(std::lround(0.7 * static_cast<double>(len)));
        std::vector<std::size_t> order(len);
        for (std::size_t i = 0; i < len; ++i) order[i] = i;
        for (std::size_t i = len; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        std::vector<uint8_t> mask(len, 0);
        for (std::size_t i = 0; i < specified; ++i) mask[order[i]] = 1;
        return GoalSpec(schema, std::move(mask), target.bits());
    }
    if (kind == "4-stack") {
        return four_stack_goal(env);
    }
    // unit-goal: a random crafted item
    static const char* kProducts[] = {"inv_plank", "inv_rope", "inv_bridge"};
    const std::string want = kProducts[rng.below(3)];
    std::vector<uint8_t> mask(len, 0), values(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
        if (schema.names()[i] == want) {
            mask[i] = 1;
            values[i] = 1;
        }
    }
    return GoalSpec(schema, std::move(mask), std::move(values));
}

}  // namespace

GoalSpec four_stack_goal(const Env& blocks_env) {
    const auto& schema = blocks_env.schema();
    std::vector<uint8_t> bits(schema.length(), 0);
    const std::vector<std::string> stacked = {"on_top_of(red,green)", "on_top_of(green,blue)",
                                              "on_top_of(blue,yellow)"};
    for (std::size_t i = 0; i < schema.length(); ++i) {
        if (std::find(stacked.begin(), stacked.end(), schema.names()[i]) != stacked.end()) {
            bits[i] = 1;
        }
    }
    return GoalSpec::exact(AttributeVector(schema, std::move(bits)));
}

std::vector<Task> generate_tasks(const Env& env, const std::string& kind, int count,
                                 uint64_t seed) {
    if (!kind_valid(env.name(), kind)) {
        throw ValidationError("task kind '" + kind + "' not valid for env " + env.name());
    }
    Rng rng(seed);
    std::vector<Task> tasks;
    tasks.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(tasks.size()) < count) {
        Task t;
        t.env_seed = rng.next_u64();
        t.goal = sample_goal(env, kind, rng);
        // pre-solved tasks are removed (rejection keeps the conditional law)
        if (satisfies(env.true_attributes(env.reset(t.env_seed)), t.goal)) continue;
        tasks.push_back(std::move(t));
    }
    return tasks;
}

namespace {

// crafting recipe dependencies at the inventory level (mirrors the env rules;
// the test oracle keeps its own independent copy)
struct CraftAbstract {
    static constexpr int kItems = 6;  // wood, ore, grass, plank, rope, bridge
    static constexpr int kResources = 3;

    static uint8_t prereq(int product) {
        switch (product) {
            case 0: return 1u << 0;                          // plank <- wood
            case 1: return 1u << 2;                          // rope <- grass
            default: return (1u << 3) | (1u << 4) | (1u << 1);  // bridge <- plank+rope+ore
        }
    }

    static std::vector<uint8_t> successors(uint8_t inv) {
        std::vector<uint8_t> next;
        for (int r = 0; r < kResources; ++r) {
            if (!((inv >> r) & 1)) next.push_back(static_cast<uint8_t>(inv | (1u << r)));
        }
        for (int p = 0; p < 3; ++p) {
            const int item = kResources + p;
            if ((inv >> item) & 1) continue;
            if ((inv & prereq(p)) == prereq(p)) {
                next.push_back(static_cast<uint8_t>(inv | (1u << item)));
            }
        }
        return next;
    }
};

uint8_t inv_bits_of(const AttributeVector& v) {
    uint8_t inv = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i]) inv |= static_cast<uint8_t>(1u << i);
    }
    return inv;
}

int crafting_distance(const AttributeVector& start, const GoalSpec& goal) {
    const uint8_t start_inv = inv_bits_of(start);
    uint8_t goal_mask = 0, goal_values = 0;
    for (std::size_t i = 0; i < goal.size(); ++i) {
        if (goal.mask()[i]) {
            goal_mask |= static_cast<uint8_t>(1u << i);
            if (goal.values()[i]) goal_values |= static_cast<uint8_t>(1u << i);
        }
    }
    std::vector<int> dist(64, -1);
    std::queue<uint8_t> queue;
    dist[start_inv] = 0;
    queue.push(start_inv);
    while (!queue.empty()) {
        const uint8_t inv = queue.front();
        queue.pop();
        if ((inv & goal_mask) == goal_values) return dist[inv];
        for (uint8_t next : CraftAbstract::successors(inv)) {
            if (dist[next] < 0) {
                dist[next] = dist[inv] + 1;
                queue.push(next);
            }
        }
    }
    return -1;
}

int switches_distance(const AttributeVector& start, const GoalSpec& goal) {
    int d = 0;
    for (std::size_t sw = 0; sw * 4 < start.size(); ++sw) {
        int cur = 0, tgt = 0;
        for (int c = 0; c < 4; ++c) {
            if (start[sw * 4 + static_cast<std::size_t>(c)]) cur = c;
            if (goal.values()[sw * 4 + static_cast<std::size_t>(c)]) tgt = c;
        }
        d += (tgt - cur + 4) % 4;
    }
    return d;
}

}  // namespace

int task_difficulty(const Env& env, const EnvState& start, const GoalSpec& goal) {
    const AttributeVector attrs = env.true_attributes(start);
    if (env.name() == "switches") return switches_distance(attrs, goal);
    if (env.name() == "crafting") {
        const int d = crafting_distance(attrs, goal);
        return d < 0 ? 64 : d;
    }
    // blocks: specified-bit disagreement as a difficulty proxy
    return hamming_specified(attrs, goal);
}

int max_task_difficulty(const Env& env, const std::string&) {
    if (env.name() == "switches") return 12;
    if (env.name() == "crafting") return 6;
    return static_cast<int>(env.schema().length());
}

TaskSampler make_task_sampler(const Env& env, const std::string& kind, bool curriculum) {
    const int max_d = max_task_difficulty(env, kind);
    return [&env, kind, curriculum, max_d](Rng& rng, double progress) -> TrainTask {
        TrainTask task{EnvState{}, GoalSpec{}};
        for (int tries = 0; tries < 200; ++tries) {
            const uint64_t env_seed = rng.next_u64();
            task.start = env.reset(env_seed);
            task.goal = sample_goal(env, kind, rng);
            if (satisfies(env.true_attributes(task.start), task.goal)) continue;
            if (curriculum) {
                const int cap = std::max(
                    1, static_cast<int>(std::ceil(progress * static_cast<double>(max_d))));
                if (task_difficulty(env, task.start, task.goal) > cap) continue;
            }
            return task;
        }
        return task;
    };
}

}  // namespace ap

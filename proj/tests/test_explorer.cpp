#include "ap/explorer.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace ap;

TEST_CASE("bonus: smoothed values match direct arithmetic") {
    CHECK(smoothed_bonus(0, 0) == doctest::Approx(31.6227766).epsilon(1e-7));
    CHECK(smoothed_bonus(0, 500) == doctest::Approx(31.6227766).epsilon(1e-7));
    CHECK(smoothed_bonus(10, 10) == doctest::Approx(0.99950037).epsilon(1e-7));
    CHECK(smoothed_bonus(1, 1000) == doctest::Approx(22.3606798).epsilon(1e-7));
}

TEST_CASE("bonus: sqrt values match direct arithmetic") {
    CHECK(sqrt_bonus(0) == doctest::Approx(1.0));
    CHECK(sqrt_bonus(3) == doctest::Approx(0.5));
    CHECK(sqrt_bonus(99) == doctest::Approx(0.1));
}

TEST_CASE("bonus: smoothed is monotone in count and total") {
    for (int64_t total : {10, 100, 1000}) {
        for (int64_t count = 0; count < total; ++count) {
            CHECK(smoothed_bonus(count, total) > smoothed_bonus(count + 1, total));
        }
    }
    for (int64_t count : {1, 5, 50}) {
        for (int64_t total : {100, 1000}) {
            CHECK(smoothed_bonus(count, total) < smoothed_bonus(count, total * 10));
        }
    }
}

TEST_CASE("explore: counts total matches observed transitions") {
    const auto env = make_env("crafting");
    const Detector det = Detector::exact(*env);
    TransitionGraph graph(env->schema(), 0.9);
    ExploreConfig cfg;
    cfg.steps = 20000;
    cfg.policy = ExplorePolicyKind::kRandom;
    cfg.seed = 1;
    const ExploreSummary s = explore(*env, det, cfg, graph);
    CHECK(s.steps == 20000);
    CHECK(graph.explore_total() == s.transitions);
    CHECK(s.transitions > 0);
    // per-edge counts sum to the total
    int64_t sum = 0;
    for (NodeId from = 0; from < graph.node_count(); ++from) {
        for (const auto& [to, count] : graph.explore_neighbors(from)) {
            CHECK(from != to);
            sum += count;
        }
    }
    CHECK(sum == graph.explore_total());
}

TEST_CASE("explore: discovered crafting edges are a subset of the reachable set") {
    const auto env = make_env("crafting");
    const Detector det = Detector::exact(*env);
    const auto reachable = oracle::craft_reachable_edges();
    for (auto kind : {ExplorePolicyKind::kRandom, ExplorePolicyKind::kCount}) {
        TransitionGraph graph(env->schema(), 0.9);
        ExploreConfig cfg;
        cfg.steps = 30000;
        cfg.policy = kind;
        cfg.lr = 0.01;
        cfg.seed = 2;
        explore(*env, det, cfg, graph);
        for (NodeId from = 0; from < graph.node_count(); ++from) {
            for (const auto& [to, count] : graph.explore_neighbors(from)) {
                CHECK(reachable.count({graph.node(from).to_string(),
                                       graph.node(to).to_string()}) == 1);
            }
        }
    }
}

TEST_CASE("explore: zero budget is rejected") {
    const auto env = make_env("crafting");
    const Detector det = Detector::exact(*env);
    TransitionGraph graph(env->schema(), 0.9);
    ExploreConfig cfg;
    cfg.steps = 0;
    CHECK_THROWS_AS(explore(*env, det, cfg, graph), ContractViolation);
}

TEST_CASE("explore: steps with no attribute change leave the table empty") {
    // blocks with horizon 1 and an action stream forced to no-ops: use a
    // single-cell drop onto the block's own column by exhausting the budget on
    // a fresh reset each step, checking only that recorded edges imply changes
    const auto env = make_env("switches");
    const Detector det = Detector::exact(*env);
    TransitionGraph graph(env->schema(), 0.9);
    ExploreConfig cfg;
    cfg.steps = 500;
    cfg.episode_horizon = 1;  // one random action per fresh world
    cfg.policy = ExplorePolicyKind::kRandom;
    cfg.seed = 3;
    const auto s = explore(*env, det, cfg, graph);
    // toggling on a switch is the only way to record an edge; every recorded
    // edge differs in exactly one switch color pair
    for (NodeId from = 0; from < graph.node_count(); ++from) {
        for (const auto& [to, count] : graph.explore_neighbors(from)) {
            int diff = 0;
            for (std::size_t b = 0; b < 16; ++b) {
                diff += graph.node(from)[b] != graph.node(to)[b];
            }
            CHECK(diff == 2);
        }
    }
    CHECK(s.transitions == graph.explore_total());
}

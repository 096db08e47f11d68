#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "crowdrep/fairness.hpp"
#include "crowdrep/graph.hpp"
#include "crowdrep/reputation.hpp"
#include "support/generators.hpp"

using namespace crowdrep;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<Observation> values(std::initializer_list<double> vs) {
    std::vector<Observation> out;
    std::int64_t label = 1;
    for (double v : vs) out.push_back({label++, v, 1.0, {}});
    return out;
}

Evaluation ev(std::string r, std::string w, double v, std::int64_t label = 1) {
    Evaluation e;
    e.evaluator = std::move(r);
    e.worker = std::move(w);
    e.value = v;
    e.time_label = label;
    return e;
}

} // namespace

TEST_CASE("pair_mean is an unweighted mean", "[fairness]") {
    CHECK(pair_mean(values({2})) == 2.0);
    CHECK(pair_mean(values({1, 3})) == 2.0);
    CHECK(pair_mean(values({1, 2, 3, 3})) == 2.25);
    CHECK_THROWS_AS(pair_mean({}), DataError);
}

TEST_CASE("consensus over per-evaluator means", "[fairness]") {
    const std::vector<double> means{1, 2, 3};
    auto c = consensus_of("w", means);
    CHECK(c.mean == 2.0);
    CHECK_THAT(c.sd, WithinAbs(0.816496580927726, 1e-12));

    const std::vector<double> single{2.5};
    auto s = consensus_of("w", single);
    CHECK(s.mean == 2.5);
    CHECK(s.sd == 0.0);
    CHECK(s.band_low() == s.band_high());

    const std::vector<double> flat{1.75, 1.75, 1.75};
    CHECK(consensus_of("w", flat).sd == 0.0);

    CHECK_THROWS_AS(consensus_of("w", std::vector<double>{}), DataError);
}

TEST_CASE("worker_consensus reads the graph", "[fairness]") {
    // r1 averages 1 over two votes, r2 gives 2, r3 gives 3.
    std::vector<Evaluation> evals{ev("r1", "w", 1, 1), ev("r1", "w", 1, 2), ev("r2", "w", 2), ev("r3", "w", 3)};
    auto g = build_graph(evals);
    auto c = worker_consensus(g, "w");
    CHECK(c.mean == 2.0);
    CHECK_THAT(c.sd, WithinAbs(0.816496580927726, 1e-12));

    // Flat mode centres on the grand mean of the four raw votes: 7/4.
    auto f = worker_consensus(g, "w", ConsensusMode::flat);
    CHECK(f.mean == 1.75);
    CHECK_THROWS_AS(worker_consensus(g, "nobody"), DataError);
}

TEST_CASE("degree_of_fairness follows the piecewise rule", "[fairness]") {
    const WorkerConsensus c{"w", 2.0, 0.816496580927726};
    CHECK(degree_of_fairness(2.0, c, 3.0) == 1.0);
    CHECK_THAT(degree_of_fairness(3.0, c, 3.0), WithinAbs(0.06116780635742458, 1e-12));
    CHECK_THAT(degree_of_fairness(1.0, c, 3.0), WithinAbs(0.06116780635742466, 1e-12));
    CHECK(degree_of_fairness(c.band_low(), c, 3.0) == 1.0);
    CHECK(degree_of_fairness(c.band_high(), c, 3.0) == 1.0);
    CHECK_THROWS_AS(degree_of_fairness(2.0, c, 0.0), ConfigError);
}

TEST_CASE("fairness drops sharply just outside the band", "[fairness]") {
    const WorkerConsensus c{"w", 2.0, 0.5};
    CHECK(degree_of_fairness(2.5, c, 3.0) == 1.0);
    CHECK(degree_of_fairness(2.5 + 1e-6, c, 3.0) < 1e-6);
    // The complement variant instead decays from 1.
    CHECK(degree_of_fairness(2.5 + 1e-6, c, 3.0, FairnessMode::complement) > 0.999);
    CHECK_THAT(degree_of_fairness(3.0, c, 3.0, FairnessMode::complement), WithinAbs(1.0 - 0.5 / 3.0, 1e-12));
}

TEST_CASE("two evaluators sit on the band edges and stay fair", "[fairness]") {
    testing::Rng rng(41);
    for (int i = 0; i < 2000; ++i) {
        const double a = testing::uniform(rng, 0.0, 3.0);
        const double b = testing::uniform(rng, 0.0, 3.0);
        const std::vector<double> means{a, b};
        auto c = consensus_of("w", means);
        REQUIRE(degree_of_fairness(a, c, 3.0) == 1.0);
        REQUIRE(degree_of_fairness(b, c, 3.0) == 1.0);
    }
}

TEST_CASE("fairness stays in [0, 1] and is 1 on the band", "[fairness][property]") {
    testing::Rng rng(43);
    for (int i = 0; i < 5000; ++i) {
        const double m = testing::uniform(rng, 0.1, 10.0);
        const WorkerConsensus c{"w", testing::uniform(rng, 0.0, m), testing::uniform(rng, 0.0, m / 2)};
        const double x = testing::uniform(rng, 0.0, m);
        for (auto mode : {FairnessMode::literal, FairnessMode::complement}) {
            const double phi = degree_of_fairness(x, c, m, mode);
            REQUIRE(phi >= 0.0);
            REQUIRE(phi <= 1.0);
            if (x >= c.band_low() && x <= c.band_high()) REQUIRE(phi == 1.0);
        }
    }
}

TEST_CASE("mode names round-trip", "[fairness]") {
    for (auto m : {ConsensusMode::per_evaluator, ConsensusMode::flat})
        CHECK(parse_consensus_mode(to_string(m)) == m);
    for (auto m : {FairnessMode::literal, FairnessMode::complement}) CHECK(parse_fairness_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_fairness_mode("lenient"), ConfigError);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "crowdrep/baselines.hpp"
#include "crowdrep/reputation.hpp"
#include "support/generators.hpp"

using namespace crowdrep;
using Catch::Matchers::WithinAbs;

namespace {

Evaluation ev(std::string r, std::string w, double v, std::int64_t label = 1) {
    Evaluation e;
    e.evaluator = std::move(r);
    e.worker = std::move(w);
    e.value = v;
    e.time_label = label;
    return e;
}

double score_of(const AdaptiveResult& r, const ActorId& id) {
    for (const auto& s : r.scores)
        if (s.actor == id) return s.score;
    FAIL("no score for " << id);
    return 0.0;
}

} // namespace

TEST_CASE("normal average pools every raw vote", "[baselines]") {
    std::vector<Evaluation> evals{ev("a", "w", 3), ev("a", "w", 3), ev("b", "w", 2)};
    auto g = build_graph(evals);
    CHECK_THAT(normal_average(g, "w"), WithinAbs(8.0 / 3.0, 1e-15));
    auto all = normal_average_all(g);
    REQUIRE(all.size() == 1);
    CHECK(all[0].model == BaselineModel::normal_avg);
    CHECK_THROWS_AS(normal_average(g, "a"), DataError);
}

TEST_CASE("adaptive average on small graphs", "[baselines]") {
    SECTION("a single vote is copied") {
        std::vector<Evaluation> evals{ev("a", "w", 1)};
        auto r = adaptive_average(build_graph(evals));
        CHECK(r.converged);
        CHECK(score_of(r, "w") == 1.0);
    }
    SECTION("equal voters give the plain mean") {
        std::vector<Evaluation> evals{ev("a", "w", 1), ev("b", "w", 3)};
        auto r = adaptive_average(build_graph(evals));
        CHECK(score_of(r, "w") == 2.0);
    }
    SECTION("a voter's own standing feeds back") {
        // x votes 1 for a; a and y vote for w. a falls to 1, y stays at the 1.5 prior.
        std::vector<Evaluation> evals{ev("x", "a", 1), ev("a", "w", 3), ev("y", "w", 1)};
        auto r = adaptive_average(build_graph(evals));
        CHECK(r.converged);
        CHECK(score_of(r, "a") == 1.0);
        CHECK_THAT(score_of(r, "w"), WithinAbs((1.0 * 3 + 1.5 * 1) / 2.5, 1e-12));
    }
    SECTION("three-node chain matches a hand iteration") {
        // a votes 3 on b, b votes 1 on c. Each score is a single vote, so the
        // synchronous update settles after one round and confirms on the next.
        std::vector<Evaluation> evals{ev("a", "b", 3), ev("b", "c", 1)};
        auto r = adaptive_average(build_graph(evals));
        CHECK(r.converged);
        CHECK(r.iterations == 2);
        CHECK(r.iterations <= 20);
        CHECK(score_of(r, "b") == 3.0);
        CHECK(score_of(r, "c") == 1.0);
    }
    SECTION("iteration cap is reported") {
        // A two-cycle with damping 1 and opposite votes oscillates.
        std::vector<Evaluation> evals{ev("a", "b", 3), ev("b", "a", 1), ev("c", "a", 3), ev("c", "b", 1)};
        AdaptiveOptions opts;
        opts.max_iter = 1;
        auto r = adaptive_average(build_graph(evals), opts);
        CHECK(r.iterations == 1);
        CHECK_FALSE(r.converged);
    }
    SECTION("option validation") {
        std::vector<Evaluation> evals{ev("a", "w", 1)};
        auto g = build_graph(evals);
        AdaptiveOptions bad;
        bad.damping = 0.0;
        CHECK_THROWS_AS(adaptive_average(g, bad), ConfigError);
        bad = {};
        bad.max_iter = 0;
        CHECK_THROWS_AS(adaptive_average(g, bad), ConfigError);
        CHECK_THROWS_AS(adaptive_average(RelationGraph{}), DataError);
    }
}

TEST_CASE("adaptive scores stay within the vote range", "[baselines][property]") {
    testing::Rng rng(211);
    for (int trial = 0; trial < 200; ++trial) {
        auto evals = testing::random_evaluations(rng, 8, 40, 8, 3.0, true);
        for (auto& e : evals) e.value = std::max(e.value, 0.5); // keep voting weights positive
        auto g = build_graph(evals);
        for (int cap : {1, 2, 5, 100}) {
            AdaptiveOptions opts;
            opts.max_iter = cap;
            auto r = adaptive_average(g, opts);
            for (const auto& s : r.scores) {
                double lo = 1e300, hi = -1e300;
                for (auto i : g.evaluators_of(s.actor))
                    for (const auto& o : g.edge(i).sequence) {
                        lo = std::min(lo, o.value);
                        hi = std::max(hi, o.value);
                    }
                REQUIRE(s.score >= lo - 1e-12);
                REQUIRE(s.score <= hi + 1e-12);
            }
        }
    }
}

TEST_CASE("the model collapses to the normal average without time or fairness", "[baselines][property]") {
    // One evaluation per pair, every credit 1, a vanishing time discount and
    // fairness forced to 1: rho becomes the plain mean of the raw votes.
    testing::Rng rng(223);
    EngineConfig config;
    config.half_life = 1e12;
    for (int trial = 0; trial < 200; ++trial) {
        auto raw = testing::random_evaluations(rng, 8, 30);
        std::map<std::pair<ActorId, ActorId>, Evaluation> once;
        for (auto e : raw) {
            e.credit = 1.0;
            once.emplace(std::make_pair(e.evaluator, e.worker), e);
        }
        std::vector<Evaluation> evals;
        for (auto& [k, e] : once) evals.push_back(e);

        auto g = build_graph(evals);
        annotate(g, config);
        for (auto& e : g.edges()) e.phi = 1.0;
        for (const auto& w : g.workers())
            REQUIRE_THAT(worker_reputation(g, w).rho, WithinAbs(normal_average(g, w), 1e-9));
    }
}

TEST_CASE("baselines are thread-count independent", "[baselines]") {
    testing::Rng rng(227);
    auto evals = testing::random_evaluations(rng, 50, 3000, 8, 3.0, true);
    auto g = build_graph(evals);
    auto a = adaptive_average(g, {}, 1);
    auto b = adaptive_average(g, {}, 8);
    REQUIRE(a.iterations == b.iterations);
    for (std::size_t i = 0; i < a.scores.size(); ++i) REQUIRE(a.scores[i].score == b.scores[i].score);
    auto na = normal_average_all(g, 1);
    auto nb = normal_average_all(g, 8);
    for (std::size_t i = 0; i < na.size(); ++i) REQUIRE(na[i].score == nb[i].score);
}

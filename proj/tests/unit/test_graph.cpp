#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "crowdrep/graph.hpp"
#include "support/generators.hpp"

using namespace crowdrep;

namespace {

Evaluation ev(std::string r, std::string w, double v, std::int64_t label, double credit = 1.0) {
    Evaluation e;
    e.evaluator = std::move(r);
    e.worker = std::move(w);
    e.value = v;
    e.time_label = label;
    e.timestamp = Timestamp{std::chrono::seconds{label * 100}};
    e.credit = credit;
    return e;
}

} // namespace

TEST_CASE("evaluations group into one edge per pair", "[graph]") {
    std::vector<Evaluation> evals{ev("r1", "w1", 3, 2), ev("r1", "w1", 1, 1), ev("r2", "w1", 2, 1),
                                  ev("r1", "w1", 2, 3)};
    auto g = build_graph(evals);

    REQUIRE(g.edges().size() == 2);
    CHECK(g.horizon() == 3);
    const auto* e = g.find_edge("r1", "w1");
    REQUIRE(e);
    REQUIRE(e->sequence.size() == 3);
    CHECK(e->sequence[0].label == 1);
    CHECK(e->sequence[1].label == 2);
    CHECK(e->sequence[2].label == 3);

    auto d = g.evaluators_of("w1");
    REQUIRE(d.size() == 2);
    CHECK(g.edge(d[0]).evaluator == "r1");
    CHECK(g.edge(d[1]).evaluator == "r2");
    CHECK(g.workers() == std::vector<ActorId>{"w1"});
    CHECK(g.evaluators() == std::vector<ActorId>{"r1", "r2"});
}

TEST_CASE("single evaluation gives singleton indices", "[graph]") {
    std::vector<Evaluation> evals{ev("r", "w", 2, 4)};
    auto g = build_graph(evals);
    CHECK(g.edges().size() == 1);
    CHECK(g.evaluators_of("w").size() == 1);
    CHECK(g.workers_of("r").size() == 1);
    CHECK(g.horizon() == 4);
}

TEST_CASE("empty input gives an empty graph", "[graph]") {
    auto g = build_graph({});
    CHECK(g.edges().empty());
    CHECK(g.workers().empty());
    CHECK(g.evaluators().empty());
}

TEST_CASE("horizon must cover every label", "[graph]") {
    std::vector<Evaluation> evals{ev("r", "w", 2, 4)};
    CHECK_THROWS_AS(build_graph(evals, 3), DataError);
    CHECK(build_graph(evals, 9).horizon() == 9);
}

TEST_CASE("unknown actors are errors", "[graph]") {
    std::vector<Evaluation> evals{ev("r", "w", 2, 1)};
    auto g = build_graph(evals);
    CHECK_THROWS_AS(g.evaluators_of("nobody"), DataError);
    CHECK_THROWS_AS(g.workers_of("w"), DataError);
    CHECK(g.find_edge("w", "r") == nullptr);
}

TEST_CASE("roles may overlap", "[graph]") {
    std::vector<Evaluation> evals{ev("a", "b", 2, 1), ev("b", "a", 3, 1)};
    auto g = build_graph(evals);
    CHECK(g.actors().at("a").is_evaluator);
    CHECK(g.actors().at("a").is_worker);
    CHECK(g.actors().size() == 2);
}

TEST_CASE("graph invariants on random logs", "[graph][property]") {
    testing::Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        auto evals = testing::random_evaluations(rng, 8, 40);
        auto g = build_graph(evals);

        std::size_t total = 0;
        for (const auto& e : g.edges()) {
            REQUIRE_FALSE(e.sequence.empty());
            REQUIRE(std::is_sorted(e.sequence.begin(), e.sequence.end(),
                                   [](const auto& a, const auto& b) { return a.label < b.label; }));
            total += e.sequence.size();
        }
        REQUIRE(total == evals.size());

        // D_j and S_i are exactly the projections of the edge set.
        std::size_t via_workers = 0, via_evaluators = 0;
        for (const auto& w : g.workers())
            for (auto i : g.evaluators_of(w)) {
                REQUIRE(g.edge(i).worker == w);
                ++via_workers;
            }
        for (const auto& r : g.evaluators())
            for (auto i : g.workers_of(r)) {
                REQUIRE(g.edge(i).evaluator == r);
                ++via_evaluators;
            }
        REQUIRE(via_workers == g.edges().size());
        REQUIRE(via_evaluators == g.edges().size());

        // Permuting the input yields the same graph.
        auto shuffled = evals;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto h = build_graph(shuffled);
        REQUIRE(h.edges().size() == g.edges().size());
        for (std::size_t i = 0; i < g.edges().size(); ++i) {
            REQUIRE(h.edge(i).evaluator == g.edge(i).evaluator);
            REQUIRE(h.edge(i).worker == g.edge(i).worker);
            REQUIRE(h.edge(i).sequence == g.edge(i).sequence);
        }
    }
}

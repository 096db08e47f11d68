#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "crowdrep/error.hpp"
#include "crowdrep/evaluation.hpp"
#include "crowdrep/trust.hpp"

namespace crowdrep {

struct ActorRoles {
    bool is_evaluator = false;
    bool is_worker = false;
};

/// Directed evaluator -> worker relation with its evaluation history and the
/// quantities derived from it once the graph is annotated.
struct PairwiseEdge {
    ActorId evaluator;
    ActorId worker;
    std::vector<Observation> sequence; ///< non-empty, ordered by label
    double tau = 0.0;      ///< trust rank
    double omega = 0.0;    ///< weight of the trust rank at the graph horizon
    double pair_avg = 0.0; ///< unweighted mean of the sequence values
    double phi = 1.0;      ///< degree of fairness
};

/// Evaluator/worker relation graph. Edges are kept sorted by (evaluator, worker),
/// and every per-actor index lists its edges in that same order.
class RelationGraph {
public:
    RelationGraph() = default;

    std::span<const PairwiseEdge> edges() const { return edges_; }
    std::span<PairwiseEdge> edges() { return edges_; }
    const PairwiseEdge& edge(std::size_t i) const { return edges_.at(i); }
    PairwiseEdge& edge(std::size_t i) { return edges_.at(i); }

    std::int64_t horizon() const { return horizon_; }
    std::size_t evaluation_count() const { return evaluation_count_; }
    const std::map<ActorId, ActorRoles>& actors() const { return actors_; }

    /// Sorted ids of every actor that received at least one evaluation.
    std::vector<ActorId> workers() const { return keys_of(by_worker_); }
    /// Sorted ids of every actor that gave at least one evaluation.
    std::vector<ActorId> evaluators() const { return keys_of(by_evaluator_); }

    bool has_worker(const ActorId& w) const { return by_worker_.count(w) != 0; }
    bool has_evaluator(const ActorId& r) const { return by_evaluator_.count(r) != 0; }

    /// Edge indices of the worker's evaluators, ordered by evaluator id.
    std::span<const std::size_t> evaluators_of(const ActorId& worker) const {
        auto it = by_worker_.find(worker);
        if (it == by_worker_.end()) throw DataError("unknown worker '" + worker + "'");
        return it->second;
    }

    /// Edge indices of the workers an evaluator has assessed, ordered by worker id.
    std::span<const std::size_t> workers_of(const ActorId& evaluator) const {
        auto it = by_evaluator_.find(evaluator);
        if (it == by_evaluator_.end()) throw DataError("unknown evaluator '" + evaluator + "'");
        return it->second;
    }

    const PairwiseEdge* find_edge(const ActorId& evaluator, const ActorId& worker) const {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), std::tie(evaluator, worker),
                                   [](const PairwiseEdge& e, const auto& key) {
                                       return std::tie(e.evaluator, e.worker) < key;
                                   });
        if (it == edges_.end() || it->evaluator != evaluator || it->worker != worker) return nullptr;
        return &*it;
    }

    friend RelationGraph build_graph(std::span<const Evaluation> evals, std::optional<std::int64_t> horizon);

private:
    static std::vector<ActorId> keys_of(const std::map<ActorId, std::vector<std::size_t>>& m) {
        std::vector<ActorId> out;
        out.reserve(m.size());
        for (const auto& kv : m) out.push_back(kv.first);
        return out;
    }

    std::vector<PairwiseEdge> edges_;
    std::map<ActorId, ActorRoles> actors_;
    std::map<ActorId, std::vector<std::size_t>> by_worker_;
    std::map<ActorId, std::vector<std::size_t>> by_evaluator_;
    std::int64_t horizon_ = 1;
    std::size_t evaluation_count_ = 0;
};

/// Groups evaluations into one edge per (evaluator, worker) pair.
///
/// Within an edge, observations are ordered by (label, timestamp, value, credit),
/// so the result does not depend on the order of `evals`. The horizon defaults
/// to the largest label present.
inline RelationGraph build_graph(std::span<const Evaluation> evals,
                                 std::optional<std::int64_t> horizon = std::nullopt) {
    RelationGraph g;
    std::int64_t max_label = 0;
    for (const auto& e : evals) max_label = std::max(max_label, e.time_label);
    if (horizon) {
        if (*horizon < 1) throw DataError("horizon must be a positive interval label");
        if (*horizon < max_label)
            throw DataError("horizon " + std::to_string(*horizon) + " precedes evaluations at interval " +
                            std::to_string(max_label));
        g.horizon_ = *horizon;
    } else {
        g.horizon_ = std::max<std::int64_t>(1, max_label);
    }
    g.evaluation_count_ = evals.size();
    if (evals.empty()) return g;

    std::vector<std::size_t> order(evals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) {
        const auto& e = evals[i];
        return std::tie(e.evaluator, e.worker, e.time_label, e.timestamp, e.value, e.credit);
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

    for (std::size_t i : order) {
        const auto& e = evals[i];
        if (e.time_label < 1) throw DataError("time labels start at 1");
        if (g.edges_.empty() || g.edges_.back().evaluator != e.evaluator || g.edges_.back().worker != e.worker) {
            PairwiseEdge edge;
            edge.evaluator = e.evaluator;
            edge.worker = e.worker;
            g.edges_.push_back(std::move(edge));
        }
        g.edges_.back().sequence.push_back({e.time_label, e.value, e.credit, e.timestamp});
    }
    for (std::size_t i = 0; i < g.edges_.size(); ++i) {
        const auto& edge = g.edges_[i];
        g.by_evaluator_[edge.evaluator].push_back(i);
        g.by_worker_[edge.worker].push_back(i);
        g.actors_[edge.evaluator].is_evaluator = true;
        g.actors_[edge.worker].is_worker = true;
    }
    return g;
}

} // namespace crowdrep

#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "crowdrep/config.hpp"
#include "crowdrep/detail/parallel.hpp"
#include "crowdrep/error.hpp"
#include "crowdrep/fairness.hpp"
#include "crowdrep/graph.hpp"
#include "crowdrep/trust.hpp"

namespace crowdrep {

/// Community reputation of a worker and the evidence mass behind it.
struct WorkerReputation {
    ActorId worker;
    double rho = 0.0;
    double weight = 0.0;
    bool degenerate = false; ///< every supporting edge had zero fairness-weighted mass
};

/// Fairness rank of an evaluator and the evidence mass behind it.
struct EvaluatorFairness {
    ActorId evaluator;
    double gamma = 0.0;
    double weight = 0.0;
};

struct Diagnostic {
    ActorId actor;
    std::string message;
};

struct ReputationResult {
    std::vector<WorkerReputation> workers;      ///< ordered by worker id
    std::vector<EvaluatorFairness> evaluators;  ///< ordered by evaluator id
    std::vector<WorkerConsensus> consensus;     ///< ordered by worker id
    std::vector<Diagnostic> diagnostics;
};

/// Consensus statistics over the evaluators of `worker`.
inline WorkerConsensus worker_consensus(const RelationGraph& graph, const ActorId& worker,
                                        ConsensusMode mode = ConsensusMode::per_evaluator) {
    auto idx = graph.evaluators_of(worker);
    std::vector<double> means;
    means.reserve(idx.size());
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i : idx) {
        const auto& seq = graph.edge(i).sequence;
        means.push_back(pair_mean(seq));
        for (const auto& o : seq) total += o.value;
        count += seq.size();
    }
    std::optional<double> flat;
    if (mode == ConsensusMode::flat) flat = total / static_cast<double>(count);
    return consensus_of(worker, means, flat);
}

/// Fills tau, omega, pair_avg and phi on every edge.
inline std::vector<WorkerConsensus> annotate(RelationGraph& graph, const EngineConfig& config, unsigned threads = 1) {
    config.validate();
    const double q = config.q();
    const auto horizon = graph.horizon();
    auto edges = graph.edges();
    detail::parallel_for(edges.size(), threads, [&](std::size_t i) {
        auto& e = edges[i];
        e.tau = trust_rank(e.sequence, q);
        e.omega = trust_weight(e.sequence, horizon, q, config.credit_fn);
        e.pair_avg = pair_mean(e.sequence);
    });

    const auto workers = graph.workers();
    std::vector<WorkerConsensus> consensus(workers.size());
    detail::parallel_for(workers.size(), threads, [&](std::size_t w) {
        consensus[w] = worker_consensus(graph, workers[w], config.consensus);
        for (std::size_t i : graph.evaluators_of(workers[w])) {
            auto& e = edges[i];
            e.phi = degree_of_fairness(e.pair_avg, consensus[w], config.scale_max, config.fairness);
        }
    });
    return consensus;
}

/// Fairness-and-evidence weighted average of the trust ranks a worker received.
inline WorkerReputation worker_reputation(const RelationGraph& graph, const ActorId& worker) {
    WorkerReputation out{worker};
    double num = 0.0;
    double den = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i : graph.evaluators_of(worker)) {
        const auto& e = graph.edge(i);
        const double w = e.omega * e.phi;
        num += w * e.tau;
        den += w;
        if (w > 0.0) {
            lo = std::min(lo, e.tau);
            hi = std::max(hi, e.tau);
        }
    }
    if (!(den > 0.0)) {
        out.degenerate = true;
        return out;
    }
    // Rounding must not carry the average outside its inputs (all-equal ranks stay exact).
    out.rho = std::clamp(num / den, lo, hi);
    out.weight = den;
    return out;
}

/// Evidence-weighted mean of the degrees of fairness on an evaluator's edges.
inline EvaluatorFairness evaluator_fairness(const RelationGraph& graph, const ActorId& evaluator) {
    EvaluatorFairness out{evaluator};
    double num = 0.0;
    double den = 0.0;
    double lo = 1.0;
    double hi = 0.0;
    for (std::size_t i : graph.workers_of(evaluator)) {
        const auto& e = graph.edge(i);
        num += e.omega * e.phi;
        den += e.omega;
        lo = std::min(lo, e.phi);
        hi = std::max(hi, e.phi);
    }
    if (!(den > 0.0)) throw DataError("evaluator '" + evaluator + "' has no evidence mass");
    out.gamma = std::clamp(num / den, lo, hi);
    out.weight = den;
    return out;
}

/// Annotates the graph and computes every worker reputation and evaluator
/// fairness rank. Per-actor failures become diagnostics; the batch continues.
/// Output is bit-identical for every value of `threads`.
inline ReputationResult compute_all(RelationGraph& graph, const EngineConfig& config, unsigned threads = 1) {
    ReputationResult out;
    out.consensus = annotate(graph, config, threads);

    const auto workers = graph.workers();
    const auto evaluators = graph.evaluators();
    std::vector<std::optional<WorkerReputation>> reps(workers.size());
    std::vector<std::optional<EvaluatorFairness>> fair(evaluators.size());
    std::vector<std::string> rep_err(workers.size()), fair_err(evaluators.size());

    detail::parallel_for(workers.size(), threads, [&](std::size_t i) {
        try {
            reps[i] = worker_reputation(graph, workers[i]);
        } catch (const std::exception& ex) {
            rep_err[i] = ex.what();
        }
    });
    detail::parallel_for(evaluators.size(), threads, [&](std::size_t i) {
        try {
            fair[i] = evaluator_fairness(graph, evaluators[i]);
        } catch (const std::exception& ex) {
            fair_err[i] = ex.what();
        }
    });

    out.workers.reserve(workers.size());
    for (std::size_t i = 0; i < workers.size(); ++i) {
        if (reps[i])
            out.workers.push_back(std::move(*reps[i]));
        else
            out.diagnostics.push_back({workers[i], rep_err[i]});
    }
    out.evaluators.reserve(evaluators.size());
    for (std::size_t i = 0; i < evaluators.size(); ++i) {
        if (fair[i])
            out.evaluators.push_back(std::move(*fair[i]));
        else
            out.diagnostics.push_back({evaluators[i], fair_err[i]});
    }
    return out;
}

} // namespace crowdrep

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crowdrep/detail/parallel.hpp"
#include "crowdrep/error.hpp"
#include "crowdrep/graph.hpp"

namespace crowdrep {

enum class BaselineModel { normal_avg, adaptive_avg };

inline std::string_view to_string(BaselineModel m) {
    return m == BaselineModel::normal_avg ? "normal_avg" : "adaptive_avg";
}

struct BaselineScore {
    ActorId actor;
    BaselineModel model = BaselineModel::normal_avg;
    double score = 0.0;
};

/// Arithmetic mean of every raw evaluation value the worker received.
inline double normal_average(const RelationGraph& graph, const ActorId& worker) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i : graph.evaluators_of(worker)) {
        for (const auto& o : graph.edge(i).sequence) sum += o.value;
        n += graph.edge(i).sequence.size();
    }
    return sum / static_cast<double>(n);
}

inline std::vector<BaselineScore> normal_average_all(const RelationGraph& graph, unsigned threads = 1) {
    const auto workers = graph.workers();
    std::vector<BaselineScore> out(workers.size());
    detail::parallel_for(workers.size(), threads, [&](std::size_t i) {
        out[i] = {workers[i], BaselineModel::normal_avg, normal_average(graph, workers[i])};
    });
    return out;
}

struct AdaptiveOptions {
    double scale_max = 3.0;  ///< prior reputation is scale_max / 2
    double damping = 1.0;    ///< in (0, 1]; 1 applies the full update each round
    double tol = 1e-8;
    int max_iter = 100;
};

struct AdaptiveResult {
    std::vector<BaselineScore> scores; ///< one per worker, ordered by id
    int iterations = 0;
    bool converged = false;
};

/// Reputation-weighted vote averaging, iterated synchronously to a fixed point:
///
///   rep(w) <- sum_votes rep(voter) * value / sum_votes rep(voter)
///
/// All actors start at scale_max / 2. Actors who never receive votes keep that
/// prior as their voting weight.
inline AdaptiveResult adaptive_average(const RelationGraph& graph, const AdaptiveOptions& opts = {},
                                       unsigned threads = 1) {
    if (!(opts.damping > 0.0 && opts.damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
    if (!(opts.tol > 0.0)) throw ConfigError("tolerance must be positive");
    if (opts.max_iter < 1) throw ConfigError("max-iter must be at least 1");
    if (graph.edges().empty()) throw DataError("adaptive averaging needs a non-empty graph");

    std::unordered_map<ActorId, std::size_t> index;
    for (const auto& [id, roles] : graph.actors()) index.emplace(id, index.size());
    const auto workers = graph.workers();

    struct Incoming {
        std::size_t voter;
        double value_sum;
        double count;
    };
    std::vector<std::size_t> worker_slot(workers.size());
    std::vector<std::vector<Incoming>> incoming(workers.size());
    for (std::size_t w = 0; w < workers.size(); ++w) {
        worker_slot[w] = index.at(workers[w]);
        for (std::size_t i : graph.evaluators_of(workers[w])) {
            const auto& e = graph.edge(i);
            double s = 0.0;
            for (const auto& o : e.sequence) s += o.value;
            incoming[w].push_back({index.at(e.evaluator), s, static_cast<double>(e.sequence.size())});
        }
    }

    std::vector<double> rep(index.size(), opts.scale_max / 2.0);
    std::vector<double> next_worker(workers.size());
    AdaptiveResult out;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        detail::parallel_for(workers.size(), threads, [&](std::size_t w) {
            double num = 0.0;
            double den = 0.0;
            for (const auto& in : incoming[w]) {
                num += rep[in.voter] * in.value_sum;
                den += rep[in.voter] * in.count;
            }
            const double old = rep[worker_slot[w]];
            const double target = den > 0.0 ? num / den : old;
            next_worker[w] = opts.damping * target + (1.0 - opts.damping) * old;
        });
        double change = 0.0;
        for (std::size_t w = 0; w < workers.size(); ++w) {
            change = std::max(change, std::abs(next_worker[w] - rep[worker_slot[w]]));
            rep[worker_slot[w]] = next_worker[w];
        }
        out.iterations = iter;
        if (change < opts.tol) {
            out.converged = true;
            break;
        }
    }
    out.scores.reserve(workers.size());
    for (std::size_t w = 0; w < workers.size(); ++w)
        out.scores.push_back({workers[w], BaselineModel::adaptive_avg, rep[worker_slot[w]]});
    return out;
}

} // namespace crowdrep

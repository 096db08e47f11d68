#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "crowdrep/error.hpp"
#include "crowdrep/evaluation.hpp"
#include "crowdrep/trust.hpp"

namespace crowdrep {

/// How the per-worker consensus mean is formed.
enum class ConsensusMode {
    per_evaluator, ///< mean of the per-evaluator averages (default)
    flat,          ///< grand mean over every raw evaluation; sensitivity analysis only
};

/// Fairness outside the consensus band.
enum class FairnessMode {
    literal,    ///< distance beyond the band divided by M (default)
    complement, ///< 1 - distance beyond the band divided by M
};

inline std::string_view to_string(ConsensusMode m) {
    return m == ConsensusMode::per_evaluator ? "per-evaluator" : "flat";
}
inline std::string_view to_string(FairnessMode m) {
    return m == FairnessMode::literal ? "literal" : "complement";
}

inline ConsensusMode parse_consensus_mode(std::string_view s) {
    if (s == "per-evaluator") return ConsensusMode::per_evaluator;
    if (s == "flat") return ConsensusMode::flat;
    throw ConfigError("unknown consensus mode '" + std::string(s) + "'");
}

inline FairnessMode parse_fairness_mode(std::string_view s) {
    if (s == "literal") return FairnessMode::literal;
    if (s == "complement") return FairnessMode::complement;
    throw ConfigError("unknown fairness mode '" + std::string(s) + "'");
}

/// Majority-consensus statistics for one worker.
struct WorkerConsensus {
    ActorId worker;
    double mean = 0.0;
    double sd = 0.0;

    double band_low() const { return mean - sd; }
    double band_high() const { return mean + sd; }
};

/// Plain (not time-weighted) arithmetic mean of a pair's evaluation values.
inline double pair_mean(std::span<const Observation> sequence) {
    if (sequence.empty()) throw DataError("pair mean of an empty evaluation sequence");
    double sum = 0.0;
    for (const auto& o : sequence) sum += o.value;
    return sum / static_cast<double>(sequence.size());
}

/// Mean and population standard deviation of per-evaluator averages.
///
/// `flat_mean`, when given, replaces the mean of averages as the centre
/// (the flat consensus variant); the deviation is still taken over the
/// per-evaluator averages.
inline WorkerConsensus consensus_of(ActorId worker, std::span<const double> evaluator_means,
                                    std::optional<double> flat_mean = std::nullopt) {
    if (evaluator_means.empty()) throw DataError("worker '" + worker + "' has no evaluators");
    const double n = static_cast<double>(evaluator_means.size());
    double mean = 0.0;
    if (flat_mean) {
        mean = *flat_mean;
    } else {
        for (double m : evaluator_means) mean += m;
        mean /= n;
    }
    double ss = 0.0;
    for (double m : evaluator_means) ss += (m - mean) * (m - mean);
    return {std::move(worker), mean, std::sqrt(ss / n)};
}

/// Slack on the band edges, relative to M. With two evaluators both averages
/// sit exactly on the edges, and rounding in mean/sd must not push them out.
inline constexpr double kBandTolerance = 1e-12;

/// Degree of fairness of a pair whose evaluations average `pair_avg`.
/// Exactly 1 on the closed band [mean - sd, mean + sd].
inline double degree_of_fairness(double pair_avg, const WorkerConsensus& consensus, double scale_max,
                                 FairnessMode mode = FairnessMode::literal) {
    if (!(scale_max > 0.0)) throw ConfigError("evaluation scale maximum M must be positive");
    const double lo = consensus.band_low();
    const double hi = consensus.band_high();
    const double slack = kBandTolerance * scale_max;
    double beyond = 0.0;
    if (pair_avg < lo - slack)
        beyond = lo - pair_avg;
    else if (pair_avg > hi + slack)
        beyond = pair_avg - hi;
    else
        return 1.0;
    const double d = std::clamp(beyond / scale_max, 0.0, 1.0);
    return mode == FairnessMode::literal ? d : 1.0 - d;
}

} // namespace crowdrep

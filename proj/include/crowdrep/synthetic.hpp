#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "crowdrep/error.hpp"
#include "crowdrep/evaluation.hpp"
#include "crowdrep/timeutil.hpp"

namespace crowdrep {

struct SyntheticSpec {
    std::size_t n_workers = 500;
    std::size_t n_evaluators = 200;
    std::int64_t n_intervals = 8;
    std::size_t votes_per_worker = 10;
    double honest_fraction = 0.8;
    double noise_width = 0.5; ///< honest votes are round(latent + U[-w, w]), clamped to [1, 3]
    /// Share of min(n_workers, n_evaluators) evaluators who are also workers.
    /// Roughly a quarter of the voters in public election logs stood for election themselves.
    double role_overlap = 0.25;
    std::uint64_t seed = 1;
    Timestamp epoch = Timestamp{std::chrono::sys_days{std::chrono::year{2004} / 1 / 1}};
    Duration interval_width = kHalfYear;
};

struct SyntheticData {
    std::vector<Evaluation> evaluations;
    std::vector<double> latent_quality;  ///< indexed like worker ids
    std::vector<ActorId> dishonest;      ///< sorted
};

/// Actor ids share one namespace ("u00042"). Worker k is actor k.
inline ActorId synthetic_actor(std::size_t k) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "u%05zu", k);
    return buf;
}

/// Number of evaluators that double as workers.
inline std::size_t synthetic_overlap(const SyntheticSpec& spec) {
    const auto both = std::min(spec.n_workers, spec.n_evaluators);
    return static_cast<std::size_t>(std::llround(spec.role_overlap * static_cast<double>(both)));
}

/// Evaluator k is worker k for the first synthetic_overlap() evaluators and a
/// voter with no contributions of its own otherwise.
inline ActorId synthetic_evaluator(const SyntheticSpec& spec, std::size_t k) {
    return synthetic_actor(k < synthetic_overlap(spec) ? k : spec.n_workers + k);
}

/// Seeded stand-in for a vote log on the {1, 2, 3} scale.
///
/// Each worker draws a latent quality in [1, 3] and receives votes from
/// distinct evaluators (never itself). Honest evaluators vote the latent
/// quality plus bounded symmetric noise, rounded onto the scale; dishonest
/// ones invert it (1 for workers of quality >= 2, else 3). Labels are uniform over the
/// intervals. The first vote sits exactly on the epoch so a reader that
/// derives the epoch from the data labels it identically.
inline SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_workers == 0 || spec.n_evaluators == 0 || spec.n_intervals < 1 || spec.votes_per_worker == 0)
        throw ConfigError("synthetic sizes must be positive");
    if (!(spec.role_overlap >= 0.0 && spec.role_overlap <= 1.0)) throw ConfigError("role overlap must lie in [0, 1]");
    const std::size_t overlap = synthetic_overlap(spec);
    if (spec.n_workers == 1 && spec.n_evaluators == 1 && overlap == 1)
        throw ConfigError("the only evaluator cannot evaluate itself");
    if (!(spec.honest_fraction >= 0.0 && spec.honest_fraction <= 1.0))
        throw ConfigError("honest fraction must lie in [0, 1]");
    if (!(spec.noise_width >= 0.0)) throw ConfigError("noise width must be non-negative");
    if (spec.interval_width.count() <= 0) throw ConfigError("interval width must be positive");

    std::mt19937_64 rng(spec.seed);
    auto uniform01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto below = [&](std::uint64_t n) { return rng() % n; };

    SyntheticData out;
    std::vector<std::size_t> evaluator_order(spec.n_evaluators);
    for (std::size_t k = 0; k < spec.n_evaluators; ++k) evaluator_order[k] = k;
    for (std::size_t k = spec.n_evaluators; k > 1; --k) std::swap(evaluator_order[k - 1], evaluator_order[below(k)]);
    const auto n_dishonest = static_cast<std::size_t>(
        std::llround((1.0 - spec.honest_fraction) * static_cast<double>(spec.n_evaluators)));
    std::vector<bool> dishonest(spec.n_evaluators, false);
    for (std::size_t k = 0; k < n_dishonest; ++k) {
        dishonest[evaluator_order[k]] = true;
        out.dishonest.push_back(synthetic_evaluator(spec, evaluator_order[k]));
    }
    std::sort(out.dishonest.begin(), out.dishonest.end());

    out.latent_quality.resize(spec.n_workers);
    out.evaluations.reserve(spec.n_workers * spec.votes_per_worker);
    std::vector<std::size_t> pool;
    for (std::size_t w = 0; w < spec.n_workers; ++w) {
        const double latent = 1.0 + 2.0 * uniform01();
        out.latent_quality[w] = latent;

        pool.clear();
        for (std::size_t k = 0; k < spec.n_evaluators; ++k)
            if (k != w || k >= overlap) pool.push_back(k);
        const std::size_t n_votes = std::min(spec.votes_per_worker, pool.size());
        for (std::size_t v = 0; v < n_votes; ++v) {
            std::swap(pool[v], pool[v + below(pool.size() - v)]);
            const std::size_t r = pool[v];
            double value;
            if (dishonest[r]) {
                value = latent >= 2.0 ? 1.0 : 3.0;
            } else {
                const double jitter = spec.noise_width * (2.0 * uniform01() - 1.0);
                value = std::clamp(std::round(latent + jitter), 1.0, 3.0);
            }
            const auto label = static_cast<std::int64_t>(1 + below(static_cast<std::uint64_t>(spec.n_intervals)));
            const auto offset = static_cast<std::int64_t>(below(static_cast<std::uint64_t>(spec.interval_width.count())));
            Evaluation e;
            e.evaluator = synthetic_evaluator(spec, r);
            e.worker = synthetic_actor(w);
            e.value = value;
            e.time_label = label;
            e.timestamp = spec.epoch + spec.interval_width * (label - 1) + Duration{offset};
            e.credit = 1.0;
            out.evaluations.push_back(std::move(e));
        }
    }
    if (!out.evaluations.empty()) {
        out.evaluations.front().timestamp = spec.epoch;
        out.evaluations.front().time_label = 1;
    }
    return out;
}

} // namespace crowdrep

#pragma once

// Seeded random inputs for the property-style tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "crowdrep/evaluation.hpp"
#include "crowdrep/trust.hpp"

namespace crowdrep::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Non-empty sequence with non-decreasing labels in [1, max_label] and values in [0, scale_max].
inline std::vector<Observation> random_sequence(Rng& rng, std::size_t max_len = 12, std::int64_t max_label = 20,
                                                double scale_max = 3.0) {
    const auto len = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<std::int64_t>(max_len)));
    std::vector<Observation> seq(len);
    for (auto& o : seq) {
        o.label = uniform_int(rng, 1, max_label);
        o.value = uniform(rng, 0.0, scale_max);
        o.credit = uniform(rng, 0.1, 5.0);
    }
    std::sort(seq.begin(), seq.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
    return seq;
}

/// Small random evaluation log over actors "a0".."a{n-1}"; an actor may
/// evaluate itself, as in real vote logs.
inline std::vector<Evaluation> random_evaluations(Rng& rng, std::size_t max_actors = 6, std::size_t max_evals = 20,
                                                  std::int64_t max_label = 8, double scale_max = 3.0,
                                                  bool integer_votes = false) {
    const auto actors = uniform_int(rng, 2, static_cast<std::int64_t>(max_actors));
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<std::int64_t>(max_evals)));
    std::vector<Evaluation> out(n);
    for (auto& e : out) {
        e.evaluator = "a" + std::to_string(uniform_int(rng, 0, actors - 1));
        e.worker = "a" + std::to_string(uniform_int(rng, 0, actors - 1));
        e.value = integer_votes ? static_cast<double>(uniform_int(rng, 1, 3)) : uniform(rng, 0.0, scale_max);
        e.time_label = uniform_int(rng, 1, max_label);
        e.timestamp = Timestamp{std::chrono::seconds{e.time_label * 1000 + uniform_int(rng, 0, 999)}};
        e.credit = uniform(rng, 0.5, 4.0);
    }
    return out;
}

} // namespace crowdrep::testing

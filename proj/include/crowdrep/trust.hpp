#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "crowdrep/error.hpp"
#include "crowdrep/timeutil.hpp"

namespace crowdrep {

/// One element of a pairwise evaluation sequence.
struct Observation {
    std::int64_t label = 1; ///< interval index of the evaluation
    double value = 0.0;
    double credit = 1.0;
    Timestamp timestamp{};

    friend bool operator==(const Observation&, const Observation&) = default;
};

/// Strictly increasing transform applied to task credits before they enter a trust weight.
enum class CreditFunction { identity, log1p };

inline double apply_credit(CreditFunction h, double credit) {
    switch (h) {
    case CreditFunction::identity: return credit;
    case CreditFunction::log1p: return std::log1p(credit);
    }
    return credit;
}

inline std::string_view to_string(CreditFunction h) {
    return h == CreditFunction::identity ? "identity" : "log1p";
}

inline CreditFunction parse_credit_function(std::string_view s) {
    if (s == "identity") return CreditFunction::identity;
    if (s == "log1p") return CreditFunction::log1p;
    throw ConfigError("unknown credit function '" + std::string(s) + "'");
}

/// Time-discount base for a half-life of `half_life` intervals: q = 2^(1/t).
inline double compute_q(double half_life) {
    if (!(half_life > 0.0)) throw ConfigError("half-life must be positive");
    return std::exp2(1.0 / half_life);
}

/// Time-discounted average of a pairwise evaluation sequence, with weights q^label.
///
/// Weights are evaluated relative to the newest label, i.e. q^(label - max_label);
/// the ratio is unchanged and nothing overflows for long-lived systems.
inline double trust_rank(std::span<const Observation> sequence, double q) {
    if (sequence.empty()) throw DataError("trust rank of an empty evaluation sequence");
    if (!(q >= 1.0)) throw ConfigError("time-discount base q must be >= 1");
    std::int64_t newest = sequence.front().label;
    for (const auto& o : sequence) newest = std::max(newest, o.label);

    double num = 0.0;
    double den = 0.0;
    for (const auto& o : sequence) {
        const double w = std::pow(q, static_cast<double>(o.label - newest));
        num += o.value * w;
        den += w;
    }
    double tau = num / den;
    // Rounding can push a weighted mean one ulp outside its inputs.
    auto [lo, hi] = std::minmax_element(sequence.begin(), sequence.end(),
                                        [](const auto& a, const auto& b) { return a.value < b.value; });
    return std::clamp(tau, lo->value, hi->value);
}

/// Evidence mass behind a trust rank as of `horizon`: sum of q^(label - horizon) * h(credit).
inline double trust_weight(std::span<const Observation> sequence, std::int64_t horizon, double q,
                           CreditFunction h = CreditFunction::identity) {
    if (!(q >= 1.0)) throw ConfigError("time-discount base q must be >= 1");
    double omega = 0.0;
    for (const auto& o : sequence) {
        if (o.label > horizon)
            throw DataError("evaluation at interval " + std::to_string(o.label) + " lies beyond horizon " +
                            std::to_string(horizon));
        if (!(o.credit > 0.0)) throw DataError("credits must be positive");
        omega += std::pow(q, static_cast<double>(o.label - horizon)) * apply_credit(h, o.credit);
    }
    return omega;
}

} // namespace crowdrep

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crowdrep/baselines.hpp"
#include "crowdrep/config.hpp"
#include "crowdrep/error.hpp"
#include "crowdrep/evaluation.hpp"
#include "crowdrep/graph.hpp"
#include "crowdrep/reputation.hpp"

namespace crowdrep {

/// Unfair-vote injection: workers whose normal average is below `threshold`
/// receive `support_value` votes, all others receive `attack_value` votes.
struct AttackSpec {
    double noise_fraction = 0.2;
    double support_value = 3.0;
    double attack_value = 1.0;
    double threshold = 2.0;
    std::uint64_t seed = 7;     ///< only consulted by the global-budget mode
    bool global_budget = false; ///< spread ceil(noise * total votes) over workers instead of per-worker
};

inline constexpr std::string_view kAttackerPrefix = "atk:";

/// ceil() that ignores representation error, so 0.2 * 10 gives 2, not 3.
inline std::size_t noise_count(double fraction, std::size_t votes) {
    const double x = fraction * static_cast<double>(votes);
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(std::ceil(x));
}

/// Returns the original evaluations followed by the injected ones. Injected
/// votes come from fresh identities, carry credit 1 and are stamped at the
/// newest interval present in the data.
inline std::vector<Evaluation> inject_noise(std::span<const Evaluation> evals, const AttackSpec& spec) {
    if (!(spec.noise_fraction >= 0.0 && spec.noise_fraction <= 1.0))
        throw ConfigError("noise fraction must lie in [0, 1]");
    std::vector<Evaluation> out(evals.begin(), evals.end());
    if (evals.empty()) return out;

    struct Tally {
        double sum = 0.0;
        std::size_t count = 0;
    };
    std::map<ActorId, Tally> tally;
    std::int64_t horizon = 1;
    Timestamp newest = evals.front().timestamp;
    for (const auto& e : evals) {
        auto& t = tally[e.worker];
        t.sum += e.value;
        ++t.count;
        horizon = std::max(horizon, e.time_label);
        newest = std::max(newest, e.timestamp);
    }

    std::map<ActorId, std::size_t> budget;
    if (spec.global_budget) {
        std::vector<ActorId> ids;
        std::vector<double> weights;
        for (const auto& [w, t] : tally) {
            ids.push_back(w);
            weights.push_back(static_cast<double>(t.count));
        }
        std::mt19937_64 rng(spec.seed);
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        const std::size_t total = noise_count(spec.noise_fraction, evals.size());
        for (std::size_t k = 0; k < total; ++k) ++budget[ids[pick(rng)]];
    } else {
        for (const auto& [w, t] : tally) budget[w] = noise_count(spec.noise_fraction, t.count);
    }

    for (const auto& [worker, n] : budget) {
        const auto& t = tally.at(worker);
        const double avg = t.sum / static_cast<double>(t.count);
        const double value = avg < spec.threshold ? spec.support_value : spec.attack_value;
        for (std::size_t k = 0; k < n; ++k) {
            Evaluation e;
            e.evaluator = std::string(kAttackerPrefix) + worker + ":" + std::to_string(k);
            e.worker = worker;
            e.value = value;
            e.timestamp = newest;
            e.time_label = horizon;
            e.credit = 1.0;
            out.push_back(std::move(e));
        }
    }
    return out;
}

struct WorkerChange {
    ActorId worker;
    double before = 0.0;
    double after = 0.0;
    double rel_change = 0.0;
};

inline constexpr std::size_t kChangeBuckets = 11; ///< [0,10%), ..., [90,100%), [100%, inf)

/// Relative reputation changes over a cohort, bucketed in 10% steps.
struct ChangeReport {
    std::vector<WorkerChange> changes; ///< ordered by worker id
    std::array<std::size_t, kChangeBuckets> buckets{};
    double mean = 0.0;
    double sd = 0.0;

    std::size_t cohort_size() const { return changes.size(); }
    double fraction_in_bucket(std::size_t b) const {
        return changes.empty() ? 0.0 : static_cast<double>(buckets.at(b)) / static_cast<double>(changes.size());
    }
    /// Share of the cohort whose reputation moved by less than 10%.
    double fraction_below_10pct() const { return fraction_in_bucket(0); }
};

/// |after - before| / before, or / scale_max when before is zero.
inline double relative_change(double before, double after, double scale_max) {
    const double delta = std::abs(after - before);
    return before > 0.0 ? delta / before : delta / scale_max;
}

inline std::size_t change_bucket(double rel) {
    // Tolerate representation error at bucket edges (2.0 -> 1.8 is a 10% change).
    const double tenths = std::floor(rel * 10.0 + 1e-9);
    return std::min<std::size_t>(kChangeBuckets - 1, static_cast<std::size_t>(std::max(0.0, tenths)));
}

inline ChangeReport measure_changes(const std::map<ActorId, double>& before, const std::map<ActorId, double>& after,
                                    std::span<const ActorId> cohort, double scale_max) {
    if (cohort.empty()) throw DataError("cannot measure changes over an empty cohort");
    std::vector<ActorId> ids(cohort.begin(), cohort.end());
    std::sort(ids.begin(), ids.end());
    ChangeReport r;
    r.changes.reserve(ids.size());
    double sum = 0.0;
    for (const auto& id : ids) {
        auto b = before.find(id);
        auto a = after.find(id);
        if (b == before.end() || a == after.end()) throw DataError("cohort member '" + id + "' lacks a score");
        WorkerChange c{id, b->second, a->second, relative_change(b->second, a->second, scale_max)};
        ++r.buckets[change_bucket(c.rel_change)];
        sum += c.rel_change;
        r.changes.push_back(std::move(c));
    }
    const double n = static_cast<double>(r.changes.size());
    r.mean = sum / n;
    double ss = 0.0;
    for (const auto& c : r.changes) ss += (c.rel_change - r.mean) * (c.rel_change - r.mean);
    r.sd = std::sqrt(ss / n);
    return r;
}

enum class ModelKind { ours, ebay, pagerank };

inline std::string_view to_string(ModelKind m) {
    switch (m) {
    case ModelKind::ours: return "ours";
    case ModelKind::ebay: return "ebay";
    case ModelKind::pagerank: return "pagerank";
    }
    return "?";
}

inline ModelKind parse_model(std::string_view s) {
    if (s == "ours") return ModelKind::ours;
    if (s == "ebay" || s == "normal_avg") return ModelKind::ebay;
    if (s == "pagerank" || s == "adaptive_avg") return ModelKind::pagerank;
    throw ConfigError("unknown model '" + std::string(s) + "'");
}

struct ExperimentOptions {
    std::set<ModelKind> models{ModelKind::ours, ModelKind::ebay, ModelKind::pagerank};
    AdaptiveOptions adaptive{};
    unsigned threads = 1;
};

struct ModelOutcome {
    ModelKind model = ModelKind::ours;
    ChangeReport full;                   ///< every worker of the original data
    std::optional<ChangeReport> changed; ///< workers whose reputation under our model moved at all
};

struct ExperimentReport {
    std::vector<ModelOutcome> outcomes; ///< in ModelKind order
    std::vector<ActorId> changed_cohort;
    std::size_t original_evaluations = 0;
    std::size_t injected_evaluations = 0;
};

/// Worker scores of one model on one dataset, keyed by worker id.
inline std::map<ActorId, double> model_scores(ModelKind model, std::span<const Evaluation> evals,
                                              const EngineConfig& config, const ExperimentOptions& opts) {
    auto graph = build_graph(evals);
    std::map<ActorId, double> out;
    switch (model) {
    case ModelKind::ours:
        for (const auto& r : compute_all(graph, config, opts.threads).workers) out.emplace(r.worker, r.rho);
        break;
    case ModelKind::ebay:
        for (const auto& s : normal_average_all(graph, opts.threads)) out.emplace(s.actor, s.score);
        break;
    case ModelKind::pagerank: {
        auto adaptive = opts.adaptive;
        adaptive.scale_max = config.scale_max;
        for (const auto& s : adaptive_average(graph, adaptive, opts.threads).scores) out.emplace(s.actor, s.score);
        break;
    }
    }
    return out;
}

/// Scores every requested model, injects unfair votes once, rescores and
/// reports the per-worker changes.
inline ExperimentReport run_experiment(std::span<const Evaluation> evals, const AttackSpec& spec,
                                       const EngineConfig& config, const ExperimentOptions& opts = {}) {
    if (evals.empty()) throw DataError("no records");
    ExperimentReport report;
    report.original_evaluations = evals.size();
    const auto attacked = inject_noise(evals, spec);
    report.injected_evaluations = attacked.size() - evals.size();

    std::set<ActorId> worker_set;
    for (const auto& e : evals) worker_set.insert(e.worker);
    const std::vector<ActorId> cohort(worker_set.begin(), worker_set.end());

    std::map<ModelKind, std::pair<std::map<ActorId, double>, std::map<ActorId, double>>> scores;
    for (auto m : opts.models)
        scores[m] = {model_scores(m, evals, config, opts), model_scores(m, attacked, config, opts)};

    if (auto it = scores.find(ModelKind::ours); it != scores.end()) {
        for (const auto& id : cohort)
            if (it->second.first.at(id) != it->second.second.at(id)) report.changed_cohort.push_back(id);
    }
    for (auto& [m, ba] : scores) {
        ModelOutcome o;
        o.model = m;
        o.full = measure_changes(ba.first, ba.second, cohort, config.scale_max);
        if (!report.changed_cohort.empty())
            o.changed = measure_changes(ba.first, ba.second, report.changed_cohort, config.scale_max);
        report.outcomes.push_back(std::move(o));
    }
    return report;
}

} // namespace crowdrep

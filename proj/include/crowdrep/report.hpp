#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "crowdrep/attack.hpp"
#include "crowdrep/baselines.hpp"
#include "crowdrep/config.hpp"
#include "crowdrep/csv.hpp"
#include "crowdrep/graph.hpp"
#include "crowdrep/reputation.hpp"

namespace crowdrep::report {

using nlohmann::json;

/// Six significant digits, the precision of every CSV number.
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline void write_workers_csv(std::ostream& os, std::span<const WorkerReputation> rows) {
    os << "worker,rho,weight,degenerate\n";
    for (const auto& r : rows)
        os << csv::quote(r.worker) << ',' << num(r.rho) << ',' << num(r.weight) << ',' << (r.degenerate ? 1 : 0)
           << '\n';
}

inline void write_evaluators_csv(std::ostream& os, std::span<const EvaluatorFairness> rows) {
    os << "evaluator,gamma,weight\n";
    for (const auto& r : rows) os << csv::quote(r.evaluator) << ',' << num(r.gamma) << ',' << num(r.weight) << '\n';
}

inline void write_graph_csv(std::ostream& os, const RelationGraph& g) {
    os << "evaluator,worker,n_evals,first_label,last_label\n";
    for (const auto& e : g.edges())
        os << csv::quote(e.evaluator) << ',' << csv::quote(e.worker) << ',' << e.sequence.size() << ','
           << e.sequence.front().label << ',' << e.sequence.back().label << '\n';
}

inline void write_consensus_csv(std::ostream& os, std::span<const WorkerConsensus> rows) {
    os << "worker,mean,sd\n";
    for (const auto& c : rows) os << csv::quote(c.worker) << ',' << num(c.mean) << ',' << num(c.sd) << '\n';
}

inline void write_pairs_csv(std::ostream& os, const RelationGraph& g) {
    os << "evaluator,worker,pair_mean,phi\n";
    for (const auto& e : g.edges())
        os << csv::quote(e.evaluator) << ',' << csv::quote(e.worker) << ',' << num(e.pair_avg) << ',' << num(e.phi)
           << '\n';
}

inline void write_baseline_csv(std::ostream& os, std::span<const BaselineScore> rows) {
    os << "worker,model,score\n";
    for (const auto& s : rows) os << csv::quote(s.actor) << ',' << to_string(s.model) << ',' << num(s.score) << '\n';
}

inline void write_changes_csv(std::ostream& os, const ChangeReport& r) {
    os << "worker,before,after,rel_change\n";
    for (const auto& c : r.changes)
        os << csv::quote(c.worker) << ',' << num(c.before) << ',' << num(c.after) << ',' << num(c.rel_change) << '\n';
}

/// One row per 10% bucket; the last bucket is open-ended.
inline void write_histogram_csv(std::ostream& os, const ModelOutcome& o) {
    os << "bucket_low_pct,bucket_high_pct,full_count,full_pct,changed_count,changed_pct\n";
    for (std::size_t b = 0; b < kChangeBuckets; ++b) {
        os << b * 10 << ',' << (b + 1 == kChangeBuckets ? std::string("inf") : std::to_string((b + 1) * 10)) << ','
           << o.full.buckets[b] << ',' << num(100.0 * o.full.fraction_in_bucket(b)) << ',';
        if (o.changed)
            os << o.changed->buckets[b] << ',' << num(100.0 * o.changed->fraction_in_bucket(b));
        else
            os << ',';
        os << '\n';
    }
}

inline json config_json(const EngineConfig& c) {
    return {{"scale_max", c.scale_max},
            {"half_life", c.half_life},
            {"q", c.q()},
            {"interval_width_seconds", c.interval_width.count()},
            {"credit_fn", to_string(c.credit_fn)},
            {"consensus", to_string(c.consensus)},
            {"fairness", to_string(c.fairness)}};
}

/// Combined report keyed by actor id, full precision.
inline json reputation_json(const ReputationResult& r, const EngineConfig& config, std::int64_t horizon) {
    json workers = json::object();
    for (const auto& w : r.workers)
        workers[w.worker] = {{"rho", w.rho}, {"weight", w.weight}, {"degenerate", w.degenerate}};
    json evaluators = json::object();
    for (const auto& e : r.evaluators) evaluators[e.evaluator] = {{"gamma", e.gamma}, {"weight", e.weight}};
    json diagnostics = json::array();
    for (const auto& d : r.diagnostics) diagnostics.push_back({{"actor", d.actor}, {"message", d.message}});
    return {{"config", config_json(config)},
            {"horizon", horizon},
            {"workers", std::move(workers)},
            {"evaluators", std::move(evaluators)},
            {"diagnostics", std::move(diagnostics)}};
}

inline json change_json(const ChangeReport& r) {
    json buckets = json::array();
    for (std::size_t b = 0; b < kChangeBuckets; ++b) buckets.push_back(r.buckets[b]);
    return {{"cohort_size", r.cohort_size()},
            {"buckets", std::move(buckets)},
            {"fraction_below_10pct", r.fraction_below_10pct()},
            {"mean", r.mean},
            {"sd", r.sd}};
}

inline json experiment_json(const ExperimentReport& rep, const AttackSpec& spec) {
    json models = json::object();
    for (const auto& o : rep.outcomes) {
        json m = {{"full", change_json(o.full)}};
        m["changed"] = o.changed ? change_json(*o.changed) : json(nullptr);
        models[std::string(to_string(o.model))] = std::move(m);
    }
    return {{"attack",
             {{"noise_fraction", spec.noise_fraction},
              {"support_value", spec.support_value},
              {"attack_value", spec.attack_value},
              {"threshold", spec.threshold},
              {"seed", spec.seed},
              {"global_budget", spec.global_budget}}},
            {"original_evaluations", rep.original_evaluations},
            {"injected_evaluations", rep.injected_evaluations},
            {"changed_cohort_size", rep.changed_cohort.size()},
            {"models", std::move(models)}};
}

} // namespace crowdrep::report

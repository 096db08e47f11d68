// crowdrep: batch reputation analysis over evaluation logs.
//
//   crowdrep compute  --input votes.tsv --format wikilog --out-dir out/
//   crowdrep baseline --input votes.tsv --format wikilog --out-dir out/
//   crowdrep attack   --input votes.tsv --noise 0.2 --support 3 --attack 1 --threshold 2 --seed 7
//   crowdrep synth    --workers 500 --evaluators 200 --seed 1 --output synth.csv
//   crowdrep report   --input out/report.json --sort weight --top 20
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "crowdrep/crowdrep.hpp"
#include "crowdrep/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace crowdrep;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct InputOptions {
    std::string path;
    std::string format = "wikilog";
    std::string dialect = "tsv";
    std::string interval = "half-year";
    std::string epoch;
    bool exclude_self_votes = false;
    long long as_of = 0;
};

struct ModelOptions {
    double half_life = 2.0;
    double scale_max = 3.0;
    std::string credit_fn = "identity";
    std::string consensus = "per-evaluator";
    std::string fairness = "literal";
    unsigned threads = 1;
};

struct AdaptiveFlags {
    double damping = 1.0;
    double tol = 1e-8;
    int max_iter = 100;
};

void add_input_flags(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("-i,--input", in.path, "Input log file")->required();
    cmd->add_option("--format", in.format, "Input format")->check(CLI::IsMember({"wikilog", "generic"}))
        ->capture_default_str();
    cmd->add_option("--dialect", in.dialect, "Field separator of the wikilog format")
        ->check(CLI::IsMember({"tsv", "csv"}))
        ->capture_default_str();
    cmd->add_option("--interval", in.interval, "Interval width: day|week|month|quarter|half-year|year|<N>[s|h|d]")
        ->capture_default_str();
    cmd->add_option("--epoch", in.epoch, "Start of interval 1 (default: day of the earliest record)");
    cmd->add_flag("--exclude-self-votes", in.exclude_self_votes, "Drop wikilog votes cast by the nominee");
    cmd->add_option("--as-of", in.as_of, "Horizon interval; later evaluations are ignored")
        ->check(CLI::PositiveNumber);
}

void add_model_flags(CLI::App* cmd, ModelOptions& m) {
    cmd->add_option("--half-life", m.half_life, "Half-life t in intervals (q = 2^(1/t))")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--scale-max", m.scale_max, "Evaluation scale ceiling M")->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--credit-fn", m.credit_fn, "Credit transform h")->check(CLI::IsMember({"identity", "log1p"}))
        ->capture_default_str();
    cmd->add_option("--consensus", m.consensus, "Consensus mean")->check(CLI::IsMember({"per-evaluator", "flat"}))
        ->capture_default_str();
    cmd->add_option("--fairness", m.fairness, "Out-of-band fairness")
        ->check(CLI::IsMember({"literal", "complement"}))
        ->capture_default_str();
    cmd->add_option("--threads", m.threads, "Worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
}

void add_adaptive_flags(CLI::App* cmd, AdaptiveFlags& a) {
    cmd->add_option("--damping", a.damping, "Adaptive-average damping in (0, 1]")->capture_default_str();
    cmd->add_option("--tol", a.tol, "Adaptive-average convergence tolerance")->capture_default_str();
    cmd->add_option("--max-iter", a.max_iter, "Adaptive-average iteration cap")->capture_default_str();
}

EngineConfig make_config(const ModelOptions& m, const InputOptions& in) {
    EngineConfig c;
    c.scale_max = m.scale_max;
    c.half_life = m.half_life;
    c.interval_width = parse_interval_width(in.interval);
    c.credit_fn = parse_credit_function(m.credit_fn);
    c.consensus = parse_consensus_mode(m.consensus);
    c.fairness = parse_fairness_mode(m.fairness);
    c.validate();
    return c;
}

AdaptiveOptions make_adaptive(const AdaptiveFlags& a, double scale_max) {
    return {scale_max, a.damping, a.tol, a.max_iter};
}

using Clock = std::chrono::steady_clock;

/// Records outputs and per-phase wall-clock time for the run manifest.
class Manifest {
public:
    Manifest(std::string command, int argc, char** argv) {
        doc_["command"] = std::move(command);
        doc_["argv"] = std::vector<std::string>(argv, argv + argc);
        doc_["outputs"] = json::array();
        doc_["timing_seconds"] = json::object();
    }

    json& operator[](const char* key) { return doc_[key]; }

    template <class Fn>
    auto timed(const char* phase, Fn&& fn) {
        const auto t0 = Clock::now();
        struct Stamp {
            json& doc;
            const char* phase;
            Clock::time_point t0;
            ~Stamp() { doc["timing_seconds"][phase] = std::chrono::duration<double>(Clock::now() - t0).count(); }
        } stamp{doc_, phase, t0};
        return fn();
    }

    void add_output(const fs::path& p) { doc_["outputs"].push_back(p.string()); }

    void write(const fs::path& p) {
        add_output(p);
        std::ofstream os(p);
        os << doc_.dump(2) << '\n';
        if (!os) throw DataError("cannot write " + p.string());
    }

private:
    json doc_;
};

template <class Fn>
void write_file(const fs::path& p, Manifest& manifest, Fn&& fn) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw DataError("cannot open " + p.string() + " for writing");
    fn(os);
    os.flush();
    if (!os) throw DataError("failed writing " + p.string());
    manifest.add_output(p);
}

struct LoadedInput {
    std::vector<Evaluation> evaluations;
    std::optional<std::int64_t> horizon;
};

LoadedInput load_input(const InputOptions& in, const EngineConfig& config, Manifest& manifest) {
    std::ifstream is(in.path);
    if (!is) throw DataError("cannot open input " + in.path);
    IntervalScheme scheme;
    scheme.width = config.interval_width;
    if (!in.epoch.empty()) {
        auto ts = parse_timestamp(in.epoch);
        if (!ts) throw ConfigError("malformed --epoch '" + in.epoch + "'");
        scheme.epoch = *ts;
    }
    ParseResult parsed = manifest.timed("parse", [&] {
        if (in.format == "wikilog") {
            WikiOptions wo;
            wo.dialect = in.dialect == "csv" ? WikiDialect::csv : WikiDialect::tsv;
            wo.exclude_self_votes = in.exclude_self_votes;
            return parse_wikilog(is, scheme, wo);
        }
        return parse_generic(is, scheme, config);
    });

    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
    if (!parsed.rejected.empty()) {
        std::cerr << "warning: rejected " << parsed.rejected.size() << " row(s)\n";
        for (std::size_t i = 0; i < std::min<std::size_t>(5, parsed.rejected.size()); ++i)
            std::cerr << "  line " << parsed.rejected[i].line << ": " << parsed.rejected[i].reason << '\n';
    }
    json rejected = json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(100, parsed.rejected.size()); ++i)
        rejected.push_back({{"line", parsed.rejected[i].line}, {"reason", parsed.rejected[i].reason}});
    manifest["input"] = {{"path", in.path},
                         {"format", in.format},
                         {"dialect", in.dialect},
                         {"interval", in.interval},
                         {"epoch", parsed.epoch ? format_timestamp(*parsed.epoch) : ""},
                         {"exclude_self_votes", in.exclude_self_votes},
                         {"accepted_rows", parsed.evaluations.size()},
                         {"rejected_rows", parsed.rejected.size()},
                         {"rejected_sample", std::move(rejected)}};

    LoadedInput out;
    out.evaluations = std::move(parsed.evaluations);
    if (in.as_of > 0) {
        out.horizon = in.as_of;
        std::erase_if(out.evaluations, [&](const Evaluation& e) { return e.time_label > in.as_of; });
        manifest["input"]["as_of"] = in.as_of;
    }
    if (out.evaluations.empty()) throw DataError("no records");
    return out;
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw DataError("cannot create output directory " + dir + ": " + ec.message());
    return p;
}

int cmd_compute(const InputOptions& in, const ModelOptions& mo, const std::string& out_dir, bool dump_graph,
                bool dump_fairness, Manifest& manifest) {
    const auto config = make_config(mo, in);
    manifest["config"] = report::config_json(config);
    manifest["config"]["threads"] = mo.threads;
    auto input = load_input(in, config, manifest);
    auto graph = manifest.timed("graph", [&] { return build_graph(input.evaluations, input.horizon); });
    auto result = manifest.timed("model", [&] { return compute_all(graph, config, mo.threads); });
    for (const auto& d : result.diagnostics) std::cerr << "warning: " << d.actor << ": " << d.message << '\n';

    const auto dir = prepare_out_dir(out_dir);
    manifest.timed("write", [&] {
        write_file(dir / "workers.csv", manifest, [&](auto& os) { report::write_workers_csv(os, result.workers); });
        write_file(dir / "evaluators.csv", manifest,
                   [&](auto& os) { report::write_evaluators_csv(os, result.evaluators); });
        write_file(dir / "report.json", manifest, [&](auto& os) {
            os << report::reputation_json(result, config, graph.horizon()).dump(2) << '\n';
        });
        if (dump_graph) write_file(dir / "graph.csv", manifest, [&](auto& os) { report::write_graph_csv(os, graph); });
        if (dump_fairness) {
            write_file(dir / "consensus.csv", manifest,
                       [&](auto& os) { report::write_consensus_csv(os, result.consensus); });
            write_file(dir / "pairs.csv", manifest, [&](auto& os) { report::write_pairs_csv(os, graph); });
        }
        return 0;
    });
    manifest["horizon"] = graph.horizon();
    manifest["counts"] = {{"evaluations", graph.evaluation_count()},
                          {"edges", graph.edges().size()},
                          {"actors", graph.actors().size()},
                          {"workers", result.workers.size()},
                          {"evaluators", result.evaluators.size()}};
    manifest.write(dir / "manifest.json");
    std::cout << "computed " << result.workers.size() << " worker reputations and " << result.evaluators.size()
              << " evaluator fairness ranks (horizon " << graph.horizon() << ") -> " << dir.string() << '\n';
    return 0;
}

std::set<ModelKind> parse_models(const std::vector<std::string>& names) {
    std::set<ModelKind> out;
    for (const auto& n : names) out.insert(parse_model(n));
    if (out.empty()) throw ConfigError("no models selected");
    return out;
}

int cmd_baseline(const InputOptions& in, const ModelOptions& mo, const AdaptiveFlags& af,
                 const std::vector<std::string>& model_names, const std::string& out_dir, Manifest& manifest) {
    const auto config = make_config(mo, in);
    const auto models = parse_models(model_names);
    if (models.count(ModelKind::ours)) throw ConfigError("baseline computes ebay and pagerank only; use compute");
    manifest["config"] = report::config_json(config);
    manifest["adaptive"] = {{"damping", af.damping}, {"tol", af.tol}, {"max_iter", af.max_iter}};
    auto input = load_input(in, config, manifest);
    auto graph = build_graph(input.evaluations, input.horizon);

    std::vector<BaselineScore> rows;
    if (models.count(ModelKind::ebay)) {
        auto s = manifest.timed("normal_avg", [&] { return normal_average_all(graph, mo.threads); });
        rows.insert(rows.end(), s.begin(), s.end());
    }
    if (models.count(ModelKind::pagerank)) {
        auto r = manifest.timed("adaptive_avg", [&] {
            return adaptive_average(graph, make_adaptive(af, config.scale_max), mo.threads);
        });
        manifest["adaptive"]["iterations"] = r.iterations;
        manifest["adaptive"]["converged"] = r.converged;
        if (!r.converged)
            std::cerr << "warning: adaptive averaging did not converge within " << r.iterations << " iterations\n";
        rows.insert(rows.end(), r.scores.begin(), r.scores.end());
    }
    const auto dir = prepare_out_dir(out_dir);
    write_file(dir / "baselines.csv", manifest, [&](auto& os) { report::write_baseline_csv(os, rows); });
    manifest.write(dir / "manifest.json");
    std::cout << "wrote " << rows.size() << " baseline scores -> " << (dir / "baselines.csv").string() << '\n';
    return 0;
}

int cmd_attack(const InputOptions& in, const ModelOptions& mo, const AdaptiveFlags& af, const AttackSpec& spec,
               const std::vector<std::string>& model_names, const std::string& out_dir, Manifest& manifest) {
    const auto config = make_config(mo, in);
    ExperimentOptions opts;
    opts.models = parse_models(model_names);
    opts.adaptive = make_adaptive(af, config.scale_max);
    opts.threads = mo.threads;
    manifest["config"] = report::config_json(config);
    manifest["seed"] = spec.seed;
    auto input = load_input(in, config, manifest);

    auto rep = manifest.timed("experiment", [&] { return run_experiment(input.evaluations, spec, config, opts); });
    const auto dir = prepare_out_dir(out_dir);
    auto doc = report::experiment_json(rep, spec);
    write_file(dir / "attack_report.json", manifest, [&](auto& os) { os << doc.dump(2) << '\n'; });
    for (const auto& o : rep.outcomes) {
        const std::string name(to_string(o.model));
        write_file(dir / ("changes_" + name + ".csv"), manifest,
                   [&](auto& os) { report::write_changes_csv(os, o.full); });
        write_file(dir / ("histogram_" + name + ".csv"), manifest,
                   [&](auto& os) { report::write_histogram_csv(os, o); });
    }
    manifest["attack"] = doc["attack"];
    manifest.write(dir / "manifest.json");

    std::cout << "injected " << rep.injected_evaluations << " unfair votes into " << rep.original_evaluations
              << " evaluations; changed cohort " << rep.changed_cohort.size() << " workers\n";
    std::cout << std::left << std::setw(10) << "model" << std::setw(12) << "<10% (all)" << std::setw(12)
              << "mean (all)" << std::setw(14) << "mean (chg)" << "sd (chg)\n";
    for (const auto& o : rep.outcomes) {
        std::cout << std::setw(10) << to_string(o.model) << std::setw(12)
                  << report::num(100.0 * o.full.fraction_below_10pct()) + "%" << std::setw(12)
                  << report::num(o.full.mean) << std::setw(14)
                  << (o.changed ? report::num(o.changed->mean) : std::string("-"))
                  << (o.changed ? report::num(o.changed->sd) : std::string("-")) << '\n';
    }
    return 0;
}

struct SynthFlags {
    long long workers = 500;
    long long evaluators = 200;
    long long intervals = 8;
    long long votes = 10;
    double honest = 0.8;
    double noise_width = 0.5;
    double role_overlap = 0.25;
    std::uint64_t seed = 1;
    std::string epoch = "2004-01-01";
    std::string interval = "half-year";
    std::string output = "synthetic.csv";
};

int cmd_synth(const SynthFlags& f, Manifest& manifest) {
    if (f.workers <= 0 || f.evaluators <= 0 || f.intervals <= 0 || f.votes <= 0)
        throw ConfigError("--workers, --evaluators, --intervals and --votes-per-worker must be positive");
    SyntheticSpec spec;
    spec.n_workers = static_cast<std::size_t>(f.workers);
    spec.n_evaluators = static_cast<std::size_t>(f.evaluators);
    spec.n_intervals = f.intervals;
    spec.votes_per_worker = static_cast<std::size_t>(f.votes);
    spec.honest_fraction = f.honest;
    spec.noise_width = f.noise_width;
    spec.role_overlap = f.role_overlap;
    spec.seed = f.seed;
    auto epoch = parse_timestamp(f.epoch);
    if (!epoch) throw ConfigError("malformed --epoch '" + f.epoch + "'");
    spec.epoch = *epoch;
    spec.interval_width = parse_interval_width(f.interval);

    auto data = manifest.timed("generate", [&] { return generate_synthetic(spec); });
    fs::path out(f.output);
    if (out.has_parent_path()) prepare_out_dir(out.parent_path().string());
    write_file(out, manifest, [&](auto& os) { write_generic(os, data.evaluations); });
    manifest["seed"] = f.seed;
    manifest["generator"] = {{"workers", spec.n_workers},
                             {"evaluators", spec.n_evaluators},
                             {"intervals", spec.n_intervals},
                             {"votes_per_worker", spec.votes_per_worker},
                             {"honest_fraction", spec.honest_fraction},
                             {"noise_width", spec.noise_width},
                             {"role_overlap", spec.role_overlap},
                             {"epoch", format_timestamp(spec.epoch)},
                             {"interval", f.interval},
                             {"evaluations", data.evaluations.size()},
                             {"dishonest_count", data.dishonest.size()},
                             {"dishonest", data.dishonest}};
    manifest.write(fs::path(out.string() + ".manifest.json"));
    std::cout << "wrote " << data.evaluations.size() << " evaluations (" << data.dishonest.size()
              << " dishonest evaluators) -> " << out.string() << '\n';
    return 0;
}

int cmd_report(const std::string& path, const std::string& sort_key, std::size_t top, bool evaluators) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open " + path);
    json doc;
    try {
        doc = json::parse(is);
    } catch (const json::exception& ex) {
        throw DataError(path + ": " + ex.what());
    }
    const char* section = evaluators ? "evaluators" : "workers";
    const char* value_key = evaluators ? "gamma" : "rho";
    if (!doc.contains(section)) throw DataError(path + " has no '" + section + "' section");

    struct Row {
        std::string id;
        double value;
        double weight;
    };
    std::vector<Row> rows;
    for (const auto& [id, v] : doc[section].items()) rows.push_back({id, v.at(value_key), v.at("weight")});
    const bool by_weight = sort_key == "weight";
    std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
        return by_weight ? a.weight > b.weight : a.value > b.value;
    });
    std::cout << std::left << std::setw(24) << (evaluators ? "evaluator" : "worker") << std::setw(14)
              << (evaluators ? "fairness" : "reputation") << "weight\n";
    for (std::size_t i = 0; i < rows.size() && (top == 0 || i < top); ++i)
        std::cout << std::setw(24) << rows[i].id << std::setw(14) << report::num(rows[i].value)
                  << report::num(rows[i].weight) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-discounted, fairness-weighted reputation analysis for crowdsourcing logs"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file supplying default flag values")->envname("CROWDREP_CONFIG");

    InputOptions in;
    ModelOptions mo;
    AdaptiveFlags af;
    std::string out_dir = ".";

    auto* compute = app.add_subcommand("compute", "Worker reputations and evaluator fairness ranks");
    bool dump_graph = false, dump_fairness = false;
    add_input_flags(compute, in);
    add_model_flags(compute, mo);
    compute->add_option("-o,--out-dir", out_dir, "Output directory")->capture_default_str();
    compute->add_flag("--dump-graph", dump_graph, "Also write graph.csv");
    compute->add_flag("--dump-fairness", dump_fairness, "Also write consensus.csv and pairs.csv");

    auto* baseline = app.add_subcommand("baseline", "Normal-average (ebay) and adaptive-average (pagerank) scores");
    std::vector<std::string> baseline_models{"ebay", "pagerank"};
    add_input_flags(baseline, in);
    add_model_flags(baseline, mo);
    add_adaptive_flags(baseline, af);
    baseline->add_option("--models", baseline_models, "Comma-separated subset of ebay,pagerank")->delimiter(',');
    baseline->add_option("-o,--out-dir", out_dir, "Output directory")->capture_default_str();

    auto* attack = app.add_subcommand("attack", "Unfair-vote robustness experiment across models");
    AttackSpec spec;
    std::vector<std::string> attack_models{"ours", "ebay", "pagerank"};
    add_input_flags(attack, in);
    add_model_flags(attack, mo);
    add_adaptive_flags(attack, af);
    attack->add_option("--noise", spec.noise_fraction, "Injected votes as a fraction of existing votes")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    attack->add_option("--support", spec.support_value, "Vote value injected for workers below the threshold")
        ->capture_default_str();
    attack->add_option("--attack", spec.attack_value, "Vote value injected for the other workers")
        ->capture_default_str();
    attack->add_option("--threshold", spec.threshold, "Normal-average split between support and attack")
        ->capture_default_str();
    attack->add_option("--seed", spec.seed, "Seed for --global-budget placement")->capture_default_str();
    attack->add_flag("--global-budget", spec.global_budget, "Spread noise * total votes over workers at random");
    attack->add_option("--models", attack_models, "Comma-separated subset of ours,ebay,pagerank")->delimiter(',');
    attack->add_option("-o,--out-dir", out_dir, "Output directory")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic evaluation log (generic CSV)");
    SynthFlags sf;
    synth->add_option("--workers", sf.workers)->capture_default_str();
    synth->add_option("--evaluators", sf.evaluators)->capture_default_str();
    synth->add_option("--intervals", sf.intervals)->capture_default_str();
    synth->add_option("--votes-per-worker", sf.votes)->capture_default_str();
    synth->add_option("--honest", sf.honest, "Fraction of honest evaluators")->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth->add_option("--noise-width", sf.noise_width, "Half-width of honest vote noise")->capture_default_str();
    synth->add_option("--role-overlap", sf.role_overlap, "Share of evaluators who are also workers")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth->add_option("--seed", sf.seed)->capture_default_str();
    synth->add_option("--epoch", sf.epoch, "Start of interval 1")->capture_default_str();
    synth->add_option("--interval", sf.interval, "Interval width")->capture_default_str();
    synth->add_option("-o,--output", sf.output, "Output CSV path")->capture_default_str();

    auto* rep = app.add_subcommand("report", "Print a ranked table from a compute report.json");
    std::string report_path, sort_key = "rho";
    std::size_t top = 20;
    bool show_evaluators = false;
    rep->add_option("-i,--input", report_path, "report.json written by compute")->required();
    rep->add_option("--sort", sort_key, "Sort key")->check(CLI::IsMember({"rho", "weight"}))->capture_default_str();
    rep->add_option("--top", top, "Rows to print (0 = all)")->capture_default_str();
    rep->add_flag("--evaluators", show_evaluators, "List evaluator fairness instead of worker reputation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (compute->parsed()) {
            Manifest m("compute", argc, argv);
            return cmd_compute(in, mo, out_dir, dump_graph, dump_fairness, m);
        }
        if (baseline->parsed()) {
            Manifest m("baseline", argc, argv);
            return cmd_baseline(in, mo, af, baseline_models, out_dir, m);
        }
        if (attack->parsed()) {
            Manifest m("attack", argc, argv);
            return cmd_attack(in, mo, af, spec, attack_models, out_dir, m);
        }
        if (synth->parsed()) {
            Manifest m("synth", argc, argv);
            return cmd_synth(sf, m);
        }
        if (rep->parsed()) return cmd_report(report_path, sort_key, top, show_evaluators);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

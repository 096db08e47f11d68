#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "crowdrep/config.hpp"
#include "crowdrep/csv.hpp"
#include "crowdrep/error.hpp"
#include "crowdrep/evaluation.hpp"
#include "crowdrep/timeutil.hpp"

namespace crowdrep {

/// A row the parser refused, with its 1-based physical line number.
struct RejectedRow {
    std::size_t line = 0;
    std::string reason;
};

struct ParseResult {
    std::vector<Evaluation> evaluations;
    std::vector<RejectedRow> rejected;
    std::vector<std::string> warnings;
    std::optional<Timestamp> epoch; ///< epoch actually used for labelling
};

/// One row of the Wikipedia adminship-election vote log.
struct RawWikiVote {
    Timestamp election_close{};
    std::string nominator;
    std::string nominee;
    int election_status = 0; ///< parsed, unused by the model
    long long voter_id = 0;
    std::string voter_name;
    int vote = 0; ///< -1, 0 or 1
    Timestamp vote_time{};
};

enum class WikiDialect { tsv, csv };

struct WikiOptions {
    WikiDialect dialect = WikiDialect::tsv;
    bool exclude_self_votes = false;
};

/// Maps a {-1, 0, 1} vote onto the {1, 2, 3} evaluation scale.
inline double wiki_vote_value(int vote) { return static_cast<double>(vote + 2); }

/// Parses the eight log columns; returns the rejection reason on failure.
inline std::variant<RawWikiVote, std::string> parse_wiki_row(const std::vector<std::string>& f) {
    if (f.size() != 8) return "expected 8 fields, found " + std::to_string(f.size());
    RawWikiVote row;
    auto close = parse_timestamp(f[0]);
    if (!close) return "malformed election closing time '" + f[0] + "'";
    row.election_close = *close;
    row.nominator = std::string(csv::trim(f[1]));
    row.nominee = std::string(csv::trim(f[2]));
    auto status = csv::parse_number<int>(f[3]);
    if (!status || (*status != 0 && *status != 1)) return "election status must be 0 or 1, got '" + f[3] + "'";
    row.election_status = *status;
    auto vid = csv::parse_number<long long>(f[4]);
    if (!vid) return "malformed voter id '" + f[4] + "'";
    row.voter_id = *vid;
    row.voter_name = std::string(csv::trim(f[5]));
    auto vote = csv::parse_number<int>(f[6]);
    if (!vote || *vote < -1 || *vote > 1) return "vote must be -1, 0 or 1, got '" + f[6] + "'";
    row.vote = *vote;
    auto when = parse_timestamp(f[7]);
    if (!when) return "malformed vote time '" + f[7] + "'";
    row.vote_time = *when;
    if (row.nominee.empty() || row.voter_name.empty()) return "empty nominee or voter name";
    return row;
}

namespace detail {

struct PendingRow {
    Evaluation eval;
    std::size_t line;
};

inline void assign_labels(std::vector<PendingRow>& pending, const IntervalScheme& scheme, ParseResult& out) {
    if (pending.empty()) {
        out.warnings.emplace_back("no records in input");
        return;
    }
    Timestamp epoch;
    if (scheme.epoch) {
        epoch = *scheme.epoch;
    } else {
        auto earliest = std::min_element(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
            return a.eval.timestamp < b.eval.timestamp;
        });
        epoch = start_of_day(earliest->eval.timestamp);
    }
    out.epoch = epoch;
    out.evaluations.reserve(pending.size());
    for (auto& p : pending) {
        if (p.eval.timestamp < epoch) {
            out.rejected.push_back({p.line, "timestamp " + format_timestamp(p.eval.timestamp) +
                                                " precedes epoch " + format_timestamp(epoch)});
            continue;
        }
        p.eval.time_label = label_of(p.eval.timestamp, epoch, scheme.width);
        out.evaluations.push_back(std::move(p.eval));
    }
    std::sort(out.rejected.begin(), out.rejected.end(),
              [](const auto& a, const auto& b) { return a.line < b.line; });
}

inline bool is_blank_or_comment(std::string_view line) {
    line = csv::trim(line);
    return line.empty() || line.front() == '#';
}

} // namespace detail

/// Reads a vote log in the election-log column order. One evaluation per vote:
/// evaluator = voter name, worker = nominee, value = vote + 2, credit = 1.
/// A leading header line (non-numeric status column) is skipped.
inline ParseResult parse_wikilog(std::istream& in, const IntervalScheme& scheme, const WikiOptions& opts = {}) {
    ParseResult out;
    std::vector<detail::PendingRow> pending;
    const char delim = opts.dialect == WikiDialect::tsv ? '\t' : ',';
    std::string line;
    std::size_t lineno = 0;
    bool first_record = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_blank_or_comment(line)) continue;
        auto fields = csv::split(line, delim);
        if (first_record) {
            first_record = false;
            if (fields.size() == 8 && !csv::parse_number<int>(fields[3])) continue;
        }
        auto parsed = parse_wiki_row(fields);
        if (auto* reason = std::get_if<std::string>(&parsed)) {
            out.rejected.push_back({lineno, std::move(*reason)});
            continue;
        }
        auto& row = std::get<RawWikiVote>(parsed);
        if (opts.exclude_self_votes && row.voter_name == row.nominee) {
            out.rejected.push_back({lineno, "self-vote excluded"});
            continue;
        }
        Evaluation e;
        e.evaluator = std::move(row.voter_name);
        e.worker = std::move(row.nominee);
        e.value = wiki_vote_value(row.vote);
        e.timestamp = row.vote_time;
        e.credit = 1.0;
        pending.push_back({std::move(e), lineno});
    }
    detail::assign_labels(pending, scheme, out);
    return out;
}

/// Reads the generic CSV: header `evaluator,worker,value,timestamp[,credit]`,
/// columns matched by name. Credit defaults to 1.
inline ParseResult parse_generic(std::istream& in, const IntervalScheme& scheme, const EngineConfig& config) {
    ParseResult out;
    std::vector<detail::PendingRow> pending;
    std::string line;
    std::size_t lineno = 0;

    std::unordered_map<std::string, std::size_t> col;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_blank_or_comment(line)) continue;
        auto header = csv::split(line);
        for (std::size_t i = 0; i < header.size(); ++i) col[std::string(csv::trim(header[i]))] = i;
        break;
    }
    if (col.empty()) {
        out.warnings.emplace_back("no records in input");
        return out;
    }
    for (const char* required : {"evaluator", "worker", "value", "timestamp"})
        if (!col.count(required))
            throw DataError(std::string("generic CSV header lacks the '") + required + "' column");
    const bool has_credit = col.count("credit") != 0;
    std::size_t width = 0;
    for (const auto& [name, idx] : col) width = std::max(width, idx + 1);

    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_blank_or_comment(line)) continue;
        auto f = csv::split(line);
        if (f.size() < width) {
            out.rejected.push_back({lineno, "expected " + std::to_string(width) + " fields, found " +
                                                std::to_string(f.size())});
            continue;
        }
        Evaluation e;
        e.evaluator = std::string(csv::trim(f[col["evaluator"]]));
        e.worker = std::string(csv::trim(f[col["worker"]]));
        if (e.evaluator.empty() || e.worker.empty()) {
            out.rejected.push_back({lineno, "empty evaluator or worker"});
            continue;
        }
        auto value = csv::parse_number<double>(f[col["value"]]);
        if (!value) {
            out.rejected.push_back({lineno, "malformed value '" + f[col["value"]] + "'"});
            continue;
        }
        if (!(*value >= 0.0 && *value <= config.scale_max)) {
            out.rejected.push_back({lineno, "value " + f[col["value"]] + " outside [0, " +
                                                csv::exact(config.scale_max) + "]"});
            continue;
        }
        e.value = *value;
        auto ts = parse_timestamp(f[col["timestamp"]]);
        if (!ts) {
            out.rejected.push_back({lineno, "malformed timestamp '" + f[col["timestamp"]] + "'"});
            continue;
        }
        e.timestamp = *ts;
        if (has_credit && !csv::trim(f[col["credit"]]).empty()) {
            auto credit = csv::parse_number<double>(f[col["credit"]]);
            if (!credit || !(*credit > 0.0)) {
                out.rejected.push_back({lineno, "credit must be a positive number, got '" + f[col["credit"]] + "'"});
                continue;
            }
            e.credit = *credit;
        }
        pending.push_back({std::move(e), lineno});
    }
    detail::assign_labels(pending, scheme, out);
    return out;
}

/// Writes evaluations in the generic CSV format; values round-trip exactly.
inline void write_generic(std::ostream& os, std::span<const Evaluation> evals) {
    os << "evaluator,worker,value,timestamp,credit\n";
    for (const auto& e : evals)
        os << csv::quote(e.evaluator) << ',' << csv::quote(e.worker) << ',' << csv::exact(e.value) << ','
           << format_timestamp(e.timestamp) << ',' << csv::exact(e.credit) << '\n';
}

} // namespace crowdrep

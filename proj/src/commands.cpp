#include "pmibias/commands.hpp"

#include "pmibias/error.hpp"
#include "pmibias/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace pmibias::commands {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::string_view kBiasHeader =
    "context\tf_AC\tf_AnC\tf_BC\tf_BnC\tbias\tse\tci_low\tci_high\tp\tq\tratio_A\tratio_B\tflags";

using Batch = std::vector<corpus::RawDocument>;

// Feeds the corpus to `process` in batches of at most `batch_size` documents.
corpus::IngestStats stream_batches(const std::filesystem::path& source, corpus::InputFormat format,
                                   std::size_t batch_size,
                                   const std::function<void(const Batch&)>& process) {
    Batch batch;
    batch.reserve(batch_size);
    auto stats = corpus::ingest(source, format, [&](corpus::RawDocument&& doc) {
        batch.push_back(std::move(doc));
        if (batch.size() >= batch_size) {
            process(batch);
            batch.clear();
        }
    });
    if (!batch.empty()) {
        process(batch);
    }
    return stats;
}

void check_targets_match(const cooccur::TargetCounts& counts, const study::WordLists& lists) {
    for (const auto* set : {&lists.a, &lists.b}) {
        const auto& stored = counts.target_set(set->name);
        if (stored.words != set->words) {
            throw ConfigError("target set " + set->name +
                              " of the word lists does not match the counts file");
        }
    }
}

bool any_in_vocabulary(const cooccur::TargetCounts& counts, const cooccur::TargetSet& context) {
    return std::any_of(context.words.begin(), context.words.end(),
                       [&](const auto& w) { return counts.in_vocabulary(w); });
}

double ratio(std::uint64_t num, std::uint64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw FormatError("bad number '" + std::string(s) + "'");
    }
    return v;
}

std::uint64_t parse_count(std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw FormatError("bad count '" + std::string(s) + "'");
    }
    return v;
}

nlohmann::ordered_json json_number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return nullptr;
}

double from_json_number(const nlohmann::json& v) {
    return v.is_null() ? kNaN : v.get<double>();
}

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
    if (name == "tsv") {
        return OutputFormat::Tsv;
    }
    if (name == "json") {
        return OutputFormat::Json;
    }
    throw ConfigError("unknown output format: " + std::string(name));
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------- count

CountResult count_corpus(const std::filesystem::path& source, const study::WordLists& lists,
                         const CountOptions& options) {
    options.cooccur.validate();
    if (options.min_count < 1) {
        throw ConfigError("min-count must be at least 1");
    }
    const std::size_t threads = resolve_threads(options.threads);
    const std::size_t batch_size = std::max<std::size_t>(options.batch_size, 1);
    const auto targets = lists.targets();
    cooccur::validate_target_sets(targets);

    CountResult result;
    cooccur::CorpusSummary summary;
    summary.min_count = options.min_count;
    summary.min_doc_tokens = options.min_doc_tokens;

    // Pass 1: raw frequencies.
    std::vector<corpus::FrequencyCounter> freq(threads);
    std::vector<std::uint64_t> kept(threads, 0);
    result.ingest = stream_batches(source, options.input_format, batch_size, [&](const Batch& batch) {
        parallel_for_chunks(batch.size(), threads, [&](std::size_t t, std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                if (auto doc = corpus::preprocess(batch[i], options.min_doc_tokens)) {
                    freq[t].add(*doc);
                    ++kept[t];
                }
            }
        });
    });
    for (std::size_t t = 1; t < threads; ++t) {
        freq[0].merge(freq[t]);
        kept[0] += kept[t];
    }
    summary.documents_read = result.ingest.documents;
    summary.documents_kept = kept[0];
    summary.records_skipped = result.ingest.skipped;
    summary.tokens = freq[0].tokens();
    result.vocabulary = freq[0].finalize(options.min_count);
    freq.clear();

    // Pass 2: windows around target words.
    std::vector<cooccur::CooccurrenceCounter> counters(
        threads, cooccur::CooccurrenceCounter(result.vocabulary, targets, options.cooccur));
    stream_batches(source, options.input_format, batch_size, [&](const Batch& batch) {
        parallel_for_chunks(batch.size(), threads, [&](std::size_t t, std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                if (auto doc = corpus::preprocess(batch[i], options.min_doc_tokens)) {
                    counters[t].add(*doc);
                }
            }
        });
    });
    for (std::size_t t = 1; t < threads; ++t) {
        counters[0].merge(counters[t]);
    }
    result.counts = counters[0].result(options.per_word);
    result.counts.corpus = summary;

    result.warnings = result.ingest.warnings;
    if (summary.documents_kept == 0) {
        result.warnings.push_back("corpus produced no documents; all counts are zero");
    }
    auto coverage = [&](const cooccur::TargetSet& set) {
        for (const auto& w : set.words) {
            if (!result.vocabulary.contains(w)) {
                result.warnings.push_back("word '" + w + "' of " + set.name +
                                          " is not in the vocabulary");
            }
        }
    };
    coverage(lists.a);
    coverage(lists.b);
    for (const auto& c : lists.contexts) {
        coverage(c);
    }
    return result;
}

// ----------------------------------------------------------------- bias

std::string flags_to_string(unsigned flags) {
    static constexpr std::pair<unsigned, std::string_view> names[] = {
        {kFlagSmoothed, "smoothed"},
        {kFlagDegenerate, "degenerate"},
        {kFlagUndefinedContext, "undefined_context"},
        {kFlagNoTargetEvents, "no_target_events"},
    };
    std::string out;
    for (const auto& [bit, name] : names) {
        if (flags & bit) {
            if (!out.empty()) {
                out += ',';
            }
            out += name;
        }
    }
    return out.empty() ? "-" : out;
}

unsigned flags_from_string(std::string_view text) {
    if (text == "-") {
        return 0;
    }
    unsigned flags = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        const auto name = text.substr(start, comma - start);
        if (name == "smoothed") {
            flags |= kFlagSmoothed;
        } else if (name == "degenerate") {
            flags |= kFlagDegenerate;
        } else if (name == "undefined_context") {
            flags |= kFlagUndefinedContext;
        } else if (name == "no_target_events") {
            flags |= kFlagNoTargetEvents;
        } else {
            throw FormatError("unknown flag '" + std::string(name) + "'");
        }
        start = comma + 1;
    }
    return flags;
}

BiasReport bias_report(const cooccur::TargetCounts& counts, const study::WordLists& lists,
                       const biasmetric::EstimateOptions& options) {
    check_targets_match(counts, lists);
    const auto row_a = counts.pooled(lists.a.name);
    const auto row_b = counts.pooled(lists.b.name);

    BiasReport report;
    std::vector<std::size_t> estimated;
    for (const auto& context : lists.contexts) {
        const auto table = cooccur::build_contingency(row_a, row_b, context);
        BiasReportRow row;
        row.context = context.name;
        row.f_ac = table.f_ac;
        row.f_anc = table.f_anc;
        row.f_bc = table.f_bc;
        row.f_bnc = table.f_bnc;
        row.ratio_a = ratio(table.f_ac, table.f_anc);
        row.ratio_b = ratio(table.f_bc, table.f_bnc);
        if (options.smoothing > 0.0) {
            row.flags |= kFlagSmoothed;
        }
        try {
            if (!any_in_vocabulary(counts, context)) {
                throw UndefinedContextError("no word of context set " + context.name +
                                            " is in the vocabulary");
            }
            const auto e = biasmetric::estimate(table, options);
            row.bias = e.bias;
            row.se = e.se;
            row.ci_low = e.ci_low;
            row.ci_high = e.ci_high;
            row.p = e.p_value;
            estimated.push_back(report.rows.size());
        } catch (const DegenerateCellError& e) {
            row.flags |= kFlagDegenerate;
            report.messages.push_back(e.what());
        } catch (const UndefinedContextError& e) {
            row.flags |= kFlagUndefinedContext;
            report.messages.push_back(e.what());
        } catch (const NoTargetEventsError& e) {
            row.flags |= kFlagNoTargetEvents;
            report.messages.push_back(e.what());
        }
        if (!row.estimated()) {
            row.bias = row.se = row.ci_low = row.ci_high = row.p = row.q = kNaN;
            ++report.warnings;
        }
        report.rows.push_back(std::move(row));
    }

    std::vector<double> p;
    for (const auto i : estimated) {
        p.push_back(report.rows[i].p);
    }
    const auto q = stats::bh_adjust(p);
    for (std::size_t k = 0; k < estimated.size(); ++k) {
        report.rows[estimated[k]].q = q[k];
    }
    return report;
}

void write_bias_report(const std::vector<BiasReportRow>& rows, std::ostream& out,
                       OutputFormat format) {
    if (format == OutputFormat::Json) {
        auto doc = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            doc.push_back({{"context", r.context},
                           {"f_AC", r.f_ac},
                           {"f_AnC", r.f_anc},
                           {"f_BC", r.f_bc},
                           {"f_BnC", r.f_bnc},
                           {"bias", json_number(r.bias)},
                           {"se", json_number(r.se)},
                           {"ci_low", json_number(r.ci_low)},
                           {"ci_high", json_number(r.ci_high)},
                           {"p", json_number(r.p)},
                           {"q", json_number(r.q)},
                           {"ratio_A", json_number(r.ratio_a)},
                           {"ratio_B", json_number(r.ratio_b)},
                           {"flags", flags_to_string(r.flags)}});
        }
        out << doc.dump(2) << '\n';
        return;
    }
    out << kBiasHeader << '\n';
    for (const auto& r : rows) {
        out << r.context << '\t' << r.f_ac << '\t' << r.f_anc << '\t' << r.f_bc << '\t' << r.f_bnc
            << '\t' << format_double(r.bias) << '\t' << format_double(r.se) << '\t'
            << format_double(r.ci_low) << '\t' << format_double(r.ci_high) << '\t'
            << format_double(r.p) << '\t' << format_double(r.q) << '\t'
            << format_double(r.ratio_a) << '\t' << format_double(r.ratio_b) << '\t'
            << flags_to_string(r.flags) << '\n';
    }
}

std::vector<BiasReportRow> read_bias_report(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    std::vector<BiasReportRow> rows;

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        auto doc = nlohmann::json::parse(text, nullptr, false);
        if (doc.is_discarded() || !doc.is_array()) {
            throw FormatError("bias report: invalid JSON");
        }
        try {
            for (const auto& r : doc) {
                BiasReportRow row;
                row.context = r.at("context").get<std::string>();
                row.f_ac = r.at("f_AC").get<std::uint64_t>();
                row.f_anc = r.at("f_AnC").get<std::uint64_t>();
                row.f_bc = r.at("f_BC").get<std::uint64_t>();
                row.f_bnc = r.at("f_BnC").get<std::uint64_t>();
                row.bias = from_json_number(r.at("bias"));
                row.se = from_json_number(r.at("se"));
                row.ci_low = from_json_number(r.at("ci_low"));
                row.ci_high = from_json_number(r.at("ci_high"));
                row.p = from_json_number(r.at("p"));
                row.q = from_json_number(r.at("q"));
                row.ratio_a = from_json_number(r.at("ratio_A"));
                row.ratio_b = from_json_number(r.at("ratio_B"));
                row.flags = flags_from_string(r.at("flags").get<std::string>());
                rows.push_back(std::move(row));
            }
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("bias report: ") + e.what());
        }
        return rows;
    }

    std::istringstream lines(text);
    std::string line;
    if (!std::getline(lines, line) || line != kBiasHeader) {
        throw FormatError("bias report: unexpected header");
    }
    std::size_t line_no = 1;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> f;
        std::string_view rest = line;
        while (true) {
            const auto tab = rest.find('\t');
            f.push_back(rest.substr(0, tab));
            if (tab == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(tab + 1);
        }
        if (f.size() != 14) {
            throw FormatError("bias report line " + std::to_string(line_no) + ": expected 14 columns");
        }
        try {
            BiasReportRow row;
            row.context = std::string(f[0]);
            row.f_ac = parse_count(f[1]);
            row.f_anc = parse_count(f[2]);
            row.f_bc = parse_count(f[3]);
            row.f_bnc = parse_count(f[4]);
            row.bias = parse_double(f[5]);
            row.se = parse_double(f[6]);
            row.ci_low = parse_double(f[7]);
            row.ci_high = parse_double(f[8]);
            row.p = parse_double(f[9]);
            row.q = parse_double(f[10]);
            row.ratio_a = parse_double(f[11]);
            row.ratio_b = parse_double(f[12]);
            row.flags = flags_from_string(f[13]);
            rows.push_back(std::move(row));
        } catch (const FormatError& e) {
            throw FormatError("bias report line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

void print_bias_summary(const std::vector<BiasReportRow>& rows, std::ostream& out) {
    const auto old_flags = out.flags();
    const auto old_precision = out.precision();
    out << std::left << std::setw(20) << "context" << std::right << std::setw(10) << "bias"
        << std::setw(10) << "se" << std::setw(22) << "CI" << std::setw(12) << "p"
        << std::setw(12) << "q" << "  flags\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& r : rows) {
        out << std::left << std::setw(20) << r.context << std::right;
        if (r.estimated()) {
            std::ostringstream ci;
            ci << std::fixed << std::setprecision(4) << '(' << r.ci_low << ", " << r.ci_high << ')';
            std::ostringstream p;
            std::ostringstream q;
            p << std::setprecision(3) << std::scientific << r.p;
            q << std::setprecision(3) << std::scientific << r.q;
            out << std::setw(10) << r.bias << std::setw(10) << r.se << std::setw(22) << ci.str()
                << std::setw(12) << p.str() << std::setw(12) << q.str();
        } else {
            out << std::setw(10) << "-" << std::setw(10) << "-" << std::setw(22) << "-"
                << std::setw(12) << "-" << std::setw(12) << "-";
        }
        out << "  " << flags_to_string(r.flags) << '\n';
    }
    out.flags(old_flags);
    out.precision(old_precision);
}

// ------------------------------------------------------------ correlate

CorrelationStudy correlate(const std::vector<BiasReportRow>& rows, const study::GroundTruth& truth) {
    CorrelationStudy study;
    std::map<std::string, const BiasReportRow*, std::less<>> by_label;
    for (const auto& r : rows) {
        by_label.emplace(r.context, &r);
    }
    std::set<std::string, std::less<>> truth_labels;
    for (const auto& [label, proportion] : truth) {
        truth_labels.insert(label);
        auto it = by_label.find(label);
        if (it == by_label.end()) {
            study.unmatched.push_back(label);
            continue;
        }
        const auto& r = *it->second;
        if (!r.estimated() || !(r.se > 0.0)) {
            study.excluded.push_back(label);
            continue;
        }
        study.points.push_back(
            {label, proportion, r.bias, r.ci_low, r.ci_high, r.se, 1.0 / (r.se * r.se)});
    }
    for (const auto& r : rows) {
        if (!truth_labels.contains(r.context)) {
            study.unmatched.push_back(r.context);
        }
    }
    if (study.points.size() < 3) {
        throw ConfigError("correlation needs at least 3 rows joined with the ground truth, got " +
                          std::to_string(study.points.size()));
    }
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> w;
    for (const auto& pt : study.points) {
        x.push_back(pt.proportion);
        y.push_back(pt.bias);
        w.push_back(pt.weight);
    }
    study.result.n = study.points.size();
    study.result.r = stats::pearson(x, y);
    study.result.weighted_r = stats::weighted_pearson(x, y, w);
    return study;
}

void write_correlation_summary(const CorrelationStudy& study, std::ostream& out,
                               OutputFormat format) {
    if (format == OutputFormat::Json) {
        nlohmann::ordered_json doc = {
            {"n", study.result.n},
            {"r", json_number(study.result.r)},
            {"weighted_r", json_number(study.result.weighted_r.value_or(kNaN))},
            {"weights", "1/se^2"},
            {"unmatched", study.unmatched},
            {"excluded", study.excluded},
        };
        out << doc.dump(2) << '\n';
        return;
    }
    out << "metric\tvalue\n";
    out << "n\t" << study.result.n << '\n';
    out << "r\t" << format_double(study.result.r) << '\n';
    out << "weighted_r\t" << format_double(study.result.weighted_r.value_or(kNaN)) << '\n';
    out << "unmatched\t" << study.unmatched.size() << '\n';
    out << "excluded\t" << study.excluded.size() << '\n';
}

void write_scatter(const CorrelationStudy& study, std::ostream& out) {
    out << "label\tproportion\tbias\tci_low\tci_high\tse\tweight\n";
    for (const auto& p : study.points) {
        out << p.label << '\t' << format_double(p.proportion) << '\t' << format_double(p.bias)
            << '\t' << format_double(p.ci_low) << '\t' << format_double(p.ci_high) << '\t'
            << format_double(p.se) << '\t' << format_double(p.weight) << '\n';
    }
}

// ------------------------------------------------------------- permtest

namespace {

// Context-event and total-event counts of each pooled target word.
struct WordCells {
    std::vector<std::uint64_t> context;
    std::vector<std::uint64_t> total;
};

cooccur::ContingencyTable table_for_split(const WordCells& cells, std::span<const std::size_t> side_a,
                                          std::span<const std::size_t> side_b) {
    cooccur::ContingencyTable t;
    std::uint64_t total_a = 0;
    std::uint64_t total_b = 0;
    for (const auto i : side_a) {
        t.f_ac += cells.context[i];
        total_a += cells.total[i];
    }
    for (const auto i : side_b) {
        t.f_bc += cells.context[i];
        total_b += cells.total[i];
    }
    t.f_anc = total_a - t.f_ac;
    t.f_bnc = total_b - t.f_bc;
    return t;
}

// Bias of a table, or NaN when it cannot be estimated without fabricating a value.
double split_bias(const cooccur::ContingencyTable& t, const biasmetric::EstimateOptions& options) {
    if (t.total_a() == 0 || t.total_b() == 0) {
        return kNaN;
    }
    const double s = options.smoothing;
    const bool zero_hit = static_cast<double>(t.f_ac) + s <= 0.0 || static_cast<double>(t.f_bc) + s <= 0.0;
    const bool zero_miss =
        static_cast<double>(t.f_anc) + s <= 0.0 || static_cast<double>(t.f_bnc) + s <= 0.0;
    if (zero_hit || (options.method == biasmetric::Method::LogOddsRatio && zero_miss)) {
        return kNaN;
    }
    return options.method == biasmetric::Method::ExactMl ? biasmetric::bias_exact(t, s)
                                                         : biasmetric::bias_log_odds(t, s);
}

}  // namespace

std::vector<PermtestRow> permtest(const cooccur::TargetCounts& counts, const study::WordLists& lists,
                                  const PermtestOptions& options) {
    if (!counts.per_word) {
        throw ConfigError("counts file lacks per-word target rows; re-count with --per-word");
    }
    check_targets_match(counts, lists);
    std::vector<std::string> pool = lists.a.words;
    pool.insert(pool.end(), lists.b.words.begin(), lists.b.words.end());
    const std::size_t threads = resolve_threads(options.threads);

    std::vector<PermtestRow> rows;
    std::vector<std::size_t> estimated;
    for (const auto& context : lists.contexts) {
        PermtestRow row;
        row.context = context.name;
        if (options.estimate.smoothing > 0.0) {
            row.flags |= kFlagSmoothed;
        }
        std::set<std::string, std::less<>> members(context.words.begin(), context.words.end());
        WordCells cells;
        for (const auto& word : pool) {
            const auto& r = counts.rows.at(word);
            std::uint64_t hits = 0;
            for (const auto& m : members) {
                hits += r.count(m);
            }
            cells.context.push_back(hits);
            cells.total.push_back(r.total);
        }

        std::vector<std::size_t> obs_a(lists.a.words.size());
        std::vector<std::size_t> obs_b(lists.b.words.size());
        std::iota(obs_a.begin(), obs_a.end(), 0);
        std::iota(obs_b.begin(), obs_b.end(), obs_a.size());
        auto observed = table_for_split(cells, obs_a, obs_b);
        observed.label_c = context.name;

        try {
            if (!any_in_vocabulary(counts, context)) {
                throw UndefinedContextError("no word of context set " + context.name +
                                            " is in the vocabulary");
            }
            const auto e = biasmetric::estimate(observed, options.estimate);
            row.bias = e.bias;
            row.or_p = e.p_value;
            const auto perm = stats::permutation_test(
                [&](std::span<const std::size_t> a, std::span<const std::size_t> b) {
                    return split_bias(table_for_split(cells, a, b), options.estimate);
                },
                obs_a.size(), obs_b.size(), options.n_perm, options.seed, threads);
            row.perm_p = perm.p_value;
            row.splits = perm.evaluated;
            row.exact = perm.exact;
            estimated.push_back(rows.size());
        } catch (const DegenerateCellError&) {
            row.flags |= kFlagDegenerate;
        } catch (const UndefinedContextError&) {
            row.flags |= kFlagUndefinedContext;
        } catch (const NoTargetEventsError&) {
            row.flags |= kFlagNoTargetEvents;
        }
        if (row.flags & (kFlagDegenerate | kFlagUndefinedContext | kFlagNoTargetEvents)) {
            row.bias = row.perm_p = row.perm_q = row.or_p = row.or_q = kNaN;
        }
        rows.push_back(std::move(row));
    }

    std::vector<double> perm_p;
    std::vector<double> or_p;
    for (const auto i : estimated) {
        perm_p.push_back(rows[i].perm_p);
        or_p.push_back(rows[i].or_p);
    }
    const auto perm_q = stats::bh_adjust(perm_p);
    const auto or_q = stats::bh_adjust(or_p);
    for (std::size_t k = 0; k < estimated.size(); ++k) {
        rows[estimated[k]].perm_q = perm_q[k];
        rows[estimated[k]].or_q = or_q[k];
    }
    return rows;
}

void write_permtest(const std::vector<PermtestRow>& rows, std::ostream& out, OutputFormat format) {
    if (format == OutputFormat::Json) {
        auto doc = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            doc.push_back({{"context", r.context},
                           {"bias", json_number(r.bias)},
                           {"perm_p", json_number(r.perm_p)},
                           {"perm_q", json_number(r.perm_q)},
                           {"or_p", json_number(r.or_p)},
                           {"or_q", json_number(r.or_q)},
                           {"splits", r.splits},
                           {"exact", r.exact},
                           {"flags", flags_to_string(r.flags)}});
        }
        out << doc.dump(2) << '\n';
        return;
    }
    out << "context\tbias\tperm_p\tperm_q\tor_p\tor_q\tsplits\texact\tflags\n";
    for (const auto& r : rows) {
        out << r.context << '\t' << format_double(r.bias) << '\t' << format_double(r.perm_p) << '\t'
            << format_double(r.perm_q) << '\t' << format_double(r.or_p) << '\t'
            << format_double(r.or_q) << '\t' << r.splits << '\t' << (r.exact ? 1 : 0) << '\t'
            << flags_to_string(r.flags) << '\n';
    }
}

}  // namespace pmibias::commands

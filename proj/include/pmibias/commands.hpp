#pragma once

#include "pmibias/biasmetric.hpp"
#include "pmibias/cooccur.hpp"
#include "pmibias/corpus.hpp"
#include "pmibias/stats.hpp"
#include "pmibias/wordlists.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pmibias::commands {

enum class OutputFormat { Tsv, Json };
OutputFormat parse_output_format(std::string_view name);

// ---------------------------------------------------------------- count

struct CountOptions {
    corpus::InputFormat input_format = corpus::InputFormat::OneDocPerLine;
    cooccur::CooccurConfig cooccur;
    std::uint64_t min_count = corpus::kDefaultMinCount;
    std::size_t min_doc_tokens = corpus::kDefaultMinDocTokens;
    bool per_word = false;
    std::size_t threads = 1;
    std::size_t batch_size = 4096;
};

struct CountResult {
    cooccur::TargetCounts counts;
    corpus::Vocabulary vocabulary;
    corpus::IngestStats ingest;
    std::vector<std::string> warnings;
};

/// Two streaming passes over the corpus: vocabulary, then target windows.
CountResult count_corpus(const std::filesystem::path& source, const study::WordLists& lists,
                         const CountOptions& options);

// ----------------------------------------------------------------- bias

enum Flag : unsigned {
    kFlagSmoothed = 1u << 0,
    kFlagDegenerate = 1u << 1,
    kFlagUndefinedContext = 1u << 2,
    kFlagNoTargetEvents = 1u << 3,
};

std::string flags_to_string(unsigned flags);
unsigned flags_from_string(std::string_view text);

/// One line of the bias report. Numeric fields are NaN when the row could
/// not be estimated; `flags` says why.
struct BiasReportRow {
    std::string context;
    std::uint64_t f_ac = 0;
    std::uint64_t f_anc = 0;
    std::uint64_t f_bc = 0;
    std::uint64_t f_bnc = 0;
    double bias = 0.0;
    double se = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p = 1.0;
    double q = 1.0;
    double ratio_a = 0.0;
    double ratio_b = 0.0;
    unsigned flags = 0;

    bool estimated() const noexcept {
        return (flags & (kFlagDegenerate | kFlagUndefinedContext | kFlagNoTargetEvents)) == 0;
    }
};

struct BiasReport {
    std::vector<BiasReportRow> rows;
    std::size_t warnings = 0;
    std::vector<std::string> messages;
};

/// One row per context set; q is the BH adjustment over all estimated rows.
BiasReport bias_report(const cooccur::TargetCounts& counts, const study::WordLists& lists,
                       const biasmetric::EstimateOptions& options);

void write_bias_report(const std::vector<BiasReportRow>& rows, std::ostream& out,
                       OutputFormat format = OutputFormat::Tsv);
/// Reads back either output format.
std::vector<BiasReportRow> read_bias_report(std::istream& in);
/// Fixed-width summary with four decimals.
void print_bias_summary(const std::vector<BiasReportRow>& rows, std::ostream& out);

// ------------------------------------------------------------ correlate

struct ScatterPoint {
    std::string label;
    double proportion = 0.0;
    double bias = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double se = 0.0;
    double weight = 0.0;  // 1 / se^2
};

struct CorrelationStudy {
    stats::CorrelationResult result;
    std::vector<ScatterPoint> points;
    std::vector<std::string> unmatched;  // labels present on one side only
    std::vector<std::string> excluded;   // joined labels whose bias was not estimated
};

/// Joins rows to ground truth by label and correlates proportion with bias.
/// Throws ConfigError with fewer than 3 joined rows.
CorrelationStudy correlate(const std::vector<BiasReportRow>& rows, const study::GroundTruth& truth);

void write_correlation_summary(const CorrelationStudy& study, std::ostream& out,
                               OutputFormat format = OutputFormat::Tsv);
void write_scatter(const CorrelationStudy& study, std::ostream& out);

// ------------------------------------------------------------- permtest

struct PermtestOptions {
    biasmetric::EstimateOptions estimate;
    std::size_t n_perm = 20000;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

struct PermtestRow {
    std::string context;
    double bias = 0.0;
    double perm_p = 1.0;
    double perm_q = 1.0;
    double or_p = 1.0;
    double or_q = 1.0;
    std::uint64_t splits = 0;
    bool exact = false;
    unsigned flags = 0;
};

/// Requires per-word counts; throws ConfigError otherwise.
std::vector<PermtestRow> permtest(const cooccur::TargetCounts& counts, const study::WordLists& lists,
                                  const PermtestOptions& options);

void write_permtest(const std::vector<PermtestRow>& rows, std::ostream& out,
                    OutputFormat format = OutputFormat::Tsv);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace pmibias::commands

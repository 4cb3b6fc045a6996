#pragma once

#include "pmibias/corpus.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmibias::cooccur {

inline constexpr std::size_t kDefaultWindow = 10;

struct CooccurConfig {
    std::size_t window = kDefaultWindow;  // tokens on each side of a centre token
    bool respect_sentence_boundaries = true;

    void validate() const;

    friend bool operator==(const CooccurConfig&, const CooccurConfig&) = default;
};

struct TargetSet {
    std::string name;
    std::vector<std::string> words;

    bool contains(std::string_view word) const;

    friend bool operator==(const TargetSet&, const TargetSet&) = default;
};

/// Throws ConfigError for empty or duplicate set names, empty sets, a word
/// listed twice, or a word shared by two sets.
void validate_target_sets(std::span<const TargetSet> sets);

/// Co-occurrence events of one centre row with every vocabulary word.
/// Only non-zero pair counts are stored.
struct ContextRow {
    std::map<std::string, std::uint64_t, std::less<>> pairs;
    std::uint64_t total = 0;

    std::uint64_t count(std::string_view word) const;
    void add(const ContextRow& other);

    friend bool operator==(const ContextRow&, const ContextRow&) = default;
};

struct CorpusSummary {
    std::uint64_t documents_read = 0;
    std::uint64_t documents_kept = 0;
    std::uint64_t records_skipped = 0;
    std::uint64_t tokens = 0;
    std::uint64_t min_count = corpus::kDefaultMinCount;
    std::uint64_t min_doc_tokens = corpus::kDefaultMinDocTokens;

    friend bool operator==(const CorpusSummary&, const CorpusSummary&) = default;
};

/// Windowed co-occurrence counts for the target rows, and the number of
/// events each vocabulary word takes part in as a window centre. Rows are
/// keyed by target set name, or by individual target word when `per_word`.
struct TargetCounts {
    CooccurConfig config;
    bool per_word = false;
    CorpusSummary corpus;
    std::vector<TargetSet> target_sets;
    std::map<std::string, ContextRow, std::less<>> rows;
    std::map<std::string, std::uint64_t, std::less<>> marginals;
    std::uint64_t total_events = 0;

    const TargetSet& target_set(std::string_view name) const;
    bool in_vocabulary(std::string_view word) const { return marginals.contains(word); }

    /// Pooled row of a named target set.
    ContextRow pooled(std::string_view set_name) const;
    /// Pooled row of an arbitrary group of target words; requires per-word rows.
    ContextRow pooled(std::span<const std::string> words) const;

    /// Adds counts of another partition of the same corpus.
    void merge(const TargetCounts& other);

    friend bool operator==(const TargetCounts&, const TargetCounts&) = default;
};

/// Incremental counter over tokenized documents. For every in-vocabulary
/// token at position i, every in-vocabulary token at distance 1..window is one
/// event. Out-of-vocabulary tokens keep their positions but produce no events.
/// Dense storage: one vocabulary-sized row per target word.
class CooccurrenceCounter {
public:
    CooccurrenceCounter(const corpus::Vocabulary& vocab, std::vector<TargetSet> targets,
                        CooccurConfig config);

    void add(const corpus::TokenizedDocument& doc);
    void merge(const CooccurrenceCounter& other);

    TargetCounts result(bool per_word) const;

private:
    void count_span(std::span<const std::int64_t> ids);

    const corpus::Vocabulary* vocab_;
    std::vector<TargetSet> targets_;
    CooccurConfig config_;
    std::vector<std::string> target_words_;
    std::vector<std::int32_t> row_of_word_;
    std::vector<std::uint64_t> pairs_;
    std::vector<std::uint64_t> row_totals_;
    std::vector<std::uint64_t> marginals_;
    std::uint64_t total_events_ = 0;
    std::vector<std::int64_t> ids_scratch_;
    std::vector<std::uint32_t> prefix_scratch_;
};

/// Counts `docs` split across `threads` workers; the result does not depend
/// on the thread count.
TargetCounts count_target_contexts(std::span<const corpus::TokenizedDocument> docs,
                                   const corpus::Vocabulary& vocab,
                                   const std::vector<TargetSet>& targets,
                                   const CooccurConfig& config, bool per_word = false,
                                   std::size_t threads = 1);

/// The 2x2 table of context events for target sets A and B and context set C.
struct ContingencyTable {
    std::uint64_t f_ac = 0;
    std::uint64_t f_anc = 0;
    std::uint64_t f_bc = 0;
    std::uint64_t f_bnc = 0;
    std::string label_a = "A";
    std::string label_b = "B";
    std::string label_c;

    std::uint64_t total_a() const noexcept { return f_ac + f_anc; }
    std::uint64_t total_b() const noexcept { return f_bc + f_bnc; }

    /// The same table with the A and B rows exchanged.
    ContingencyTable swapped() const;

    friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;
};

/// Arithmetic core: sums the context members' cells out of two pooled rows.
ContingencyTable build_contingency(const ContextRow& row_a, const ContextRow& row_b,
                                   const TargetSet& context);

/// Validated form. Throws ConfigError when C is empty or shares a word with A
/// or B, and UndefinedContextError when no member of C is in the vocabulary.
ContingencyTable build_contingency(const TargetCounts& counts, std::string_view set_a,
                                   std::string_view set_b, const TargetSet& context);

/// Same, for an arbitrary split of target words (requires per-word rows).
ContingencyTable build_contingency(const TargetCounts& counts, std::span<const std::string> words_a,
                                   std::span<const std::string> words_b, const TargetSet& context);

/// Versioned TSV counts file. load(save(x)) == x.
void save_counts(const TargetCounts& counts, std::ostream& out);
void save_counts(const TargetCounts& counts, const std::filesystem::path& path);
/// Throws FormatError on a foreign header, an unsupported version, a malformed
/// record or a missing trailer; nothing is returned in that case.
TargetCounts load_counts(std::istream& in);
TargetCounts load_counts(const std::filesystem::path& path);

}  // namespace pmibias::cooccur

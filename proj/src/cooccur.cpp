#include "pmibias/cooccur.hpp"

#include "pmibias/error.hpp"
#include "pmibias/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace pmibias::cooccur {

namespace {

constexpr std::string_view kMagic = "pmibias-counts";
constexpr int kVersion = 1;

std::vector<std::string> unique_words(const TargetSet& set) {
    std::vector<std::string> words = set.words;
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    return words;
}

}  // namespace

void CooccurConfig::validate() const {
    if (window < 1) {
        throw ConfigError("window must be at least 1");
    }
}

bool TargetSet::contains(std::string_view word) const {
    return std::find(words.begin(), words.end(), word) != words.end();
}

void validate_target_sets(std::span<const TargetSet> sets) {
    std::map<std::string, std::string, std::less<>> owner;
    std::set<std::string, std::less<>> names;
    for (const auto& set : sets) {
        if (set.name.empty()) {
            throw ConfigError("target set with empty name");
        }
        if (!names.insert(set.name).second) {
            throw ConfigError("target set name used twice: " + set.name);
        }
        if (set.words.empty()) {
            throw ConfigError("target set " + set.name + " is empty");
        }
        for (const auto& word : set.words) {
            auto [it, inserted] = owner.emplace(word, set.name);
            if (!inserted) {
                if (it->second == set.name) {
                    throw ConfigError("word '" + word + "' listed twice in target set " + set.name);
                }
                throw ConfigError("target sets " + it->second + " and " + set.name +
                                  " overlap on '" + word + "'");
            }
        }
    }
}

std::uint64_t ContextRow::count(std::string_view word) const {
    auto it = pairs.find(word);
    return it == pairs.end() ? 0 : it->second;
}

void ContextRow::add(const ContextRow& other) {
    for (const auto& [word, n] : other.pairs) {
        pairs[word] += n;
    }
    total += other.total;
}

const TargetSet& TargetCounts::target_set(std::string_view name) const {
    for (const auto& set : target_sets) {
        if (set.name == name) {
            return set;
        }
    }
    throw ConfigError("counts have no target set named " + std::string(name));
}

ContextRow TargetCounts::pooled(std::string_view set_name) const {
    const auto& set = target_set(set_name);
    if (!per_word) {
        auto it = rows.find(set_name);
        return it == rows.end() ? ContextRow{} : it->second;
    }
    return pooled(std::span<const std::string>(set.words));
}

ContextRow TargetCounts::pooled(std::span<const std::string> words) const {
    if (!per_word) {
        throw ConfigError("counts file lacks per-word target rows; re-count with --per-word");
    }
    ContextRow out;
    for (const auto& word : words) {
        auto it = rows.find(word);
        if (it == rows.end()) {
            throw ConfigError("'" + word + "' is not a target word of these counts");
        }
        out.add(it->second);
    }
    return out;
}

void TargetCounts::merge(const TargetCounts& other) {
    if (!(config == other.config) || per_word != other.per_word ||
        !(target_sets == other.target_sets)) {
        throw ConfigError("cannot merge counts produced with different configurations");
    }
    for (const auto& [key, row] : other.rows) {
        rows[key].add(row);
    }
    for (const auto& [word, n] : other.marginals) {
        marginals[word] += n;
    }
    total_events += other.total_events;
    corpus.documents_read += other.corpus.documents_read;
    corpus.documents_kept += other.corpus.documents_kept;
    corpus.records_skipped += other.corpus.records_skipped;
    corpus.tokens += other.corpus.tokens;
}

CooccurrenceCounter::CooccurrenceCounter(const corpus::Vocabulary& vocab,
                                         std::vector<TargetSet> targets, CooccurConfig config)
    : vocab_(&vocab), targets_(std::move(targets)), config_(config) {
    config_.validate();
    validate_target_sets(targets_);
    row_of_word_.assign(vocab.size(), -1);
    for (const auto& set : targets_) {
        for (const auto& word : set.words) {
            if (auto id = vocab.id(word)) {
                row_of_word_[*id] = static_cast<std::int32_t>(target_words_.size());
            }
            target_words_.push_back(word);
        }
    }
    pairs_.assign(target_words_.size() * vocab.size(), 0);
    row_totals_.assign(target_words_.size(), 0);
    marginals_.assign(vocab.size(), 0);
}

void CooccurrenceCounter::count_span(std::span<const std::int64_t> ids) {
    const std::size_t n = ids.size();
    const std::size_t k = config_.window;
    const std::size_t vocab_size = vocab_->size();

    auto& prefix = prefix_scratch_;
    prefix.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + (ids[i] >= 0 ? 1 : 0);
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (ids[i] < 0) {
            continue;
        }
        const std::size_t lo = i >= k ? i - k : 0;
        const std::size_t hi = std::min(n - 1, i + k);
        const std::uint64_t events = prefix[hi + 1] - prefix[lo] - 1;
        const auto centre = static_cast<std::size_t>(ids[i]);
        marginals_[centre] += events;
        total_events_ += events;

        const std::int32_t row = row_of_word_[centre];
        if (row < 0) {
            continue;
        }
        std::uint64_t* cells = pairs_.data() + static_cast<std::size_t>(row) * vocab_size;
        for (std::size_t j = lo; j <= hi; ++j) {
            if (j != i && ids[j] >= 0) {
                ++cells[ids[j]];
            }
        }
        row_totals_[static_cast<std::size_t>(row)] += events;
    }
}

void CooccurrenceCounter::add(const corpus::TokenizedDocument& doc) {
    auto& ids = ids_scratch_;
    auto lookup = [&](const std::string& token) -> std::int64_t {
        auto id = vocab_->id(token);
        return id ? static_cast<std::int64_t>(*id) : -1;
    };
    if (config_.respect_sentence_boundaries) {
        for (const auto& sentence : doc.sentences) {
            ids.clear();
            for (const auto& token : sentence) {
                ids.push_back(lookup(token));
            }
            count_span(ids);
        }
    } else {
        ids.clear();
        for (const auto& sentence : doc.sentences) {
            for (const auto& token : sentence) {
                ids.push_back(lookup(token));
            }
        }
        count_span(ids);
    }
}

void CooccurrenceCounter::merge(const CooccurrenceCounter& other) {
    if (vocab_ != other.vocab_ || !(targets_ == other.targets_) || !(config_ == other.config_)) {
        throw ConfigError("cannot merge counters with different vocabularies or targets");
    }
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        pairs_[i] += other.pairs_[i];
    }
    for (std::size_t i = 0; i < row_totals_.size(); ++i) {
        row_totals_[i] += other.row_totals_[i];
    }
    for (std::size_t i = 0; i < marginals_.size(); ++i) {
        marginals_[i] += other.marginals_[i];
    }
    total_events_ += other.total_events_;
}

TargetCounts CooccurrenceCounter::result(bool per_word) const {
    const std::size_t vocab_size = vocab_->size();
    TargetCounts out;
    out.config = config_;
    out.per_word = per_word;
    out.target_sets = targets_;
    out.total_events = total_events_;
    out.corpus.min_count = vocab_->min_count();

    auto emit_row = [&](const std::string& key, std::span<const std::size_t> members) {
        ContextRow row;
        for (std::size_t w = 0; w < vocab_size; ++w) {
            std::uint64_t n = 0;
            for (const std::size_t r : members) {
                n += pairs_[r * vocab_size + w];
            }
            if (n > 0) {
                row.pairs.emplace(vocab_->words()[w], n);
            }
        }
        for (const std::size_t r : members) {
            row.total += row_totals_[r];
        }
        out.rows.emplace(key, std::move(row));
    };

    std::size_t r = 0;
    for (const auto& set : targets_) {
        std::vector<std::size_t> members;
        for (const auto& word : set.words) {
            if (per_word) {
                const std::size_t single[] = {r};
                emit_row(word, single);
            }
            members.push_back(r++);
        }
        if (!per_word) {
            emit_row(set.name, members);
        }
    }
    for (std::size_t w = 0; w < vocab_size; ++w) {
        out.marginals.emplace(vocab_->words()[w], marginals_[w]);
    }
    return out;
}

TargetCounts count_target_contexts(std::span<const corpus::TokenizedDocument> docs,
                                   const corpus::Vocabulary& vocab,
                                   const std::vector<TargetSet>& targets,
                                   const CooccurConfig& config, bool per_word,
                                   std::size_t threads) {
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(docs.size(), 1));
    std::vector<CooccurrenceCounter> partial(threads, CooccurrenceCounter(vocab, targets, config));
    parallel_for_chunks(docs.size(), threads, [&](std::size_t t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            partial[t].add(docs[i]);
        }
    });
    for (std::size_t t = 1; t < partial.size(); ++t) {
        partial[0].merge(partial[t]);
    }
    auto out = partial[0].result(per_word);
    out.corpus.documents_read = docs.size();
    out.corpus.documents_kept = docs.size();
    for (const auto& doc : docs) {
        out.corpus.tokens += doc.token_count();
    }
    return out;
}

ContingencyTable ContingencyTable::swapped() const {
    ContingencyTable t = *this;
    std::swap(t.f_ac, t.f_bc);
    std::swap(t.f_anc, t.f_bnc);
    std::swap(t.label_a, t.label_b);
    return t;
}

ContingencyTable build_contingency(const ContextRow& row_a, const ContextRow& row_b,
                                   const TargetSet& context) {
    ContingencyTable t;
    t.label_c = context.name;
    for (const auto& word : unique_words(context)) {
        t.f_ac += row_a.count(word);
        t.f_bc += row_b.count(word);
    }
    t.f_anc = row_a.total - t.f_ac;
    t.f_bnc = row_b.total - t.f_bc;
    return t;
}

namespace {

void check_context(const TargetCounts& counts, std::span<const std::string> words_a,
                   std::span<const std::string> words_b, const TargetSet& context) {
    if (context.words.empty()) {
        throw ConfigError("context set " + context.name + " is empty");
    }
    bool any_known = false;
    for (const auto& word : context.words) {
        if (std::find(words_a.begin(), words_a.end(), word) != words_a.end() ||
            std::find(words_b.begin(), words_b.end(), word) != words_b.end()) {
            throw ConfigError("context set " + context.name + " shares '" + word +
                              "' with a target set");
        }
        any_known = any_known || counts.in_vocabulary(word);
    }
    if (!any_known) {
        throw UndefinedContextError("no word of context set " + context.name +
                                    " is in the vocabulary");
    }
}

}  // namespace

ContingencyTable build_contingency(const TargetCounts& counts, std::string_view set_a,
                                   std::string_view set_b, const TargetSet& context) {
    const auto& a = counts.target_set(set_a);
    const auto& b = counts.target_set(set_b);
    check_context(counts, a.words, b.words, context);
    auto t = build_contingency(counts.pooled(set_a), counts.pooled(set_b), context);
    t.label_a = a.name;
    t.label_b = b.name;
    return t;
}

ContingencyTable build_contingency(const TargetCounts& counts, std::span<const std::string> words_a,
                                   std::span<const std::string> words_b,
                                   const TargetSet& context) {
    check_context(counts, words_a, words_b, context);
    return build_contingency(counts.pooled(words_a), counts.pooled(words_b), context);
}

// ---------------------------------------------------------------------------
// Counts file

void save_counts(const TargetCounts& c, std::ostream& out) {
    std::uint64_t records = 0;
    auto line = [&](auto&&... fields) {
        bool first = true;
        ((out << (first ? "" : "\t") << fields, first = false), ...);
        out << '\n';
        ++records;
    };
    out << kMagic << '\t' << kVersion << '\n';
    line("config", "window", c.config.window);
    line("config", "sentence_boundaries", c.config.respect_sentence_boundaries ? 1 : 0);
    line("config", "per_word", c.per_word ? 1 : 0);
    line("corpus", "documents_read", c.corpus.documents_read);
    line("corpus", "documents_kept", c.corpus.documents_kept);
    line("corpus", "records_skipped", c.corpus.records_skipped);
    line("corpus", "tokens", c.corpus.tokens);
    line("corpus", "min_count", c.corpus.min_count);
    line("corpus", "min_doc_tokens", c.corpus.min_doc_tokens);
    for (const auto& set : c.target_sets) {
        out << "set\t" << set.name;
        for (const auto& w : set.words) {
            out << '\t' << w;
        }
        out << '\n';
        ++records;
    }
    line("events", c.total_events);
    for (const auto& [key, row] : c.rows) {
        line("total", key, row.total);
        for (const auto& [word, n] : row.pairs) {
            line("pair", key, word, n);
        }
    }
    for (const auto& [word, n] : c.marginals) {
        line("marginal", word, n);
    }
    out << "end\t" << records << '\n';
}

void save_counts(const TargetCounts& counts, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    save_counts(counts, out);
    if (!out) {
        throw IoError("write failed on " + path.string());
    }
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab - start));
        if (tab == std::string_view::npos) {
            break;
        }
        start = tab + 1;
    }
    return fields;
}

std::uint64_t parse_u64(std::string_view s, std::size_t line_no) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw FormatError("counts file line " + std::to_string(line_no) + ": bad integer '" +
                          std::string(s) + "'");
    }
    return v;
}

}  // namespace

TargetCounts load_counts(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("counts file is empty");
    }
    {
        auto header = split_tabs(line);
        if (header.size() != 2 || header[0] != kMagic) {
            throw FormatError("not a counts file (bad header)");
        }
        if (header[1] != std::to_string(kVersion)) {
            throw FormatError("unsupported counts file version " + std::string(header[1]));
        }
    }

    TargetCounts c;
    std::uint64_t records = 0;
    std::size_t line_no = 1;
    bool ended = false;
    auto fail = [&](const std::string& what) -> FormatError {
        return FormatError("counts file line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (ended) {
            throw fail("data after end record");
        }
        const auto f = split_tabs(line);
        const auto kind = f[0];
        auto expect = [&](std::size_t n) {
            if (f.size() != n) {
                throw fail("expected " + std::to_string(n) + " fields for '" + std::string(kind) + "'");
            }
        };
        if (kind == "end") {
            expect(2);
            if (parse_u64(f[1], line_no) != records) {
                throw fail("record count mismatch (truncated file?)");
            }
            ended = true;
            continue;
        }
        ++records;
        if (kind == "config") {
            expect(3);
            const auto v = parse_u64(f[2], line_no);
            if (f[1] == "window") {
                c.config.window = v;
            } else if (f[1] == "sentence_boundaries") {
                c.config.respect_sentence_boundaries = v != 0;
            } else if (f[1] == "per_word") {
                c.per_word = v != 0;
            } else {
                throw fail("unknown config key");
            }
        } else if (kind == "corpus") {
            expect(3);
            const auto v = parse_u64(f[2], line_no);
            if (f[1] == "documents_read") {
                c.corpus.documents_read = v;
            } else if (f[1] == "documents_kept") {
                c.corpus.documents_kept = v;
            } else if (f[1] == "records_skipped") {
                c.corpus.records_skipped = v;
            } else if (f[1] == "tokens") {
                c.corpus.tokens = v;
            } else if (f[1] == "min_count") {
                c.corpus.min_count = v;
            } else if (f[1] == "min_doc_tokens") {
                c.corpus.min_doc_tokens = v;
            } else {
                throw fail("unknown corpus key");
            }
        } else if (kind == "set") {
            if (f.size() < 3) {
                throw fail("set record without words");
            }
            TargetSet set{std::string(f[1]), {}};
            for (std::size_t i = 2; i < f.size(); ++i) {
                set.words.emplace_back(f[i]);
            }
            c.target_sets.push_back(std::move(set));
        } else if (kind == "events") {
            expect(2);
            c.total_events = parse_u64(f[1], line_no);
        } else if (kind == "total") {
            expect(3);
            auto [it, inserted] = c.rows.try_emplace(std::string(f[1]));
            if (!inserted) {
                throw fail("duplicate total record");
            }
            it->second.total = parse_u64(f[2], line_no);
        } else if (kind == "pair") {
            expect(4);
            auto it = c.rows.find(f[1]);
            if (it == c.rows.end()) {
                throw fail("pair record before its total record");
            }
            if (!it->second.pairs.emplace(std::string(f[2]), parse_u64(f[3], line_no)).second) {
                throw fail("duplicate pair record");
            }
        } else if (kind == "marginal") {
            expect(3);
            if (!c.marginals.emplace(std::string(f[1]), parse_u64(f[2], line_no)).second) {
                throw fail("duplicate marginal record");
            }
        } else {
            throw fail("unknown record type '" + std::string(kind) + "'");
        }
    }
    if (in.bad()) {
        throw IoError("read error on counts file");
    }
    if (!ended) {
        throw FormatError("counts file is truncated (no end record)");
    }

    try {
        c.config.validate();
        validate_target_sets(c.target_sets);
    } catch (const ConfigError& e) {
        throw FormatError(std::string("counts file: ") + e.what());
    }
    for (const auto& [key, row] : c.rows) {
        std::uint64_t sum = 0;
        for (const auto& [word, n] : row.pairs) {
            sum += n;
        }
        if (sum != row.total) {
            throw FormatError("counts file: row " + key + " total does not match its pairs");
        }
        const bool known = c.per_word ? std::any_of(c.target_sets.begin(), c.target_sets.end(),
                                                    [&](const auto& s) { return s.contains(key); })
                                      : std::any_of(c.target_sets.begin(), c.target_sets.end(),
                                                    [&](const auto& s) { return s.name == key; });
        if (!known) {
            throw FormatError("counts file: row " + key + " is not a declared target");
        }
    }
    return c;
}

TargetCounts load_counts(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return load_counts(in);
}

}  // namespace pmibias::cooccur

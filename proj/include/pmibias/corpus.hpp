#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pmibias::corpus {

inline constexpr std::size_t kDefaultMinDocTokens = 50;
inline constexpr std::uint64_t kDefaultMinCount = 100;

struct RawDocument {
    std::string id;
    std::string text;
};

enum class InputFormat {
    PlainText,      // every file is one document
    OneDocPerLine,  // every line of every file is one document
    JsonLines,      // one {"id": ..., "text": ...} object per line
};

/// Accepts "plain-text", "one-doc-per-line", "wiki-extracted-json" and the
/// short forms "plain", "lines", "jsonl". Throws ConfigError otherwise.
InputFormat parse_input_format(std::string_view name);

struct IngestStats {
    std::size_t files = 0;
    std::size_t documents = 0;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

using DocumentSink = std::function<void(RawDocument&&)>;

/// Streams the documents found under `source` (a file or a directory searched
/// recursively) to `sink`. Files are visited in lexicographic path order and
/// documents within a file in file order. Malformed JSON records are skipped
/// and reported in the returned stats; unreadable sources throw IoError.
IngestStats ingest(const std::filesystem::path& source, InputFormat format,
                   const DocumentSink& sink);

std::vector<RawDocument> ingest_all(const std::filesystem::path& source, InputFormat format,
                                    IngestStats* stats = nullptr);

using Sentence = std::vector<std::string>;

struct TokenizedDocument {
    std::string id;
    std::vector<Sentence> sentences;

    std::size_t token_count() const noexcept;

    friend bool operator==(const TokenizedDocument&, const TokenizedDocument&) = default;
};

/// Sentence boundaries are '.', '!' or '?' followed by whitespace or end of text.
std::vector<std::string_view> split_sentences(std::string_view text);

/// Lowercases ASCII letters and treats every character that is not an ASCII
/// letter or digit as a delimiter. Bytes of multi-byte UTF-8 sequences are
/// delimiters too.
Sentence tokenize(std::string_view sentence);

/// Sentence-splits and tokenizes `doc`. Sentences without tokens are dropped.
/// Returns nullopt for documents with no tokens or fewer than `min_doc_tokens`.
std::optional<TokenizedDocument> preprocess(const RawDocument& doc,
                                            std::size_t min_doc_tokens = kDefaultMinDocTokens);

/// Renders tokens back to text, one ". "-terminated sentence after another.
/// preprocess(to_text(d)) reproduces the sentences of d.
std::string to_text(const TokenizedDocument& doc);

using WordId = std::uint32_t;

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};

template <class V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

/// Frequency-filtered word list with dense ids. Ids are assigned by
/// descending count, ties broken lexicographically, so that two runs over the
/// same corpus produce the same ids.
class Vocabulary {
public:
    Vocabulary() = default;

    static Vocabulary from_counts(const StringMap<std::uint64_t>& counts, std::uint64_t min_count);

    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }
    std::uint64_t min_count() const noexcept { return min_count_; }

    std::optional<WordId> id(std::string_view word) const;
    bool contains(std::string_view word) const { return id(word).has_value(); }

    const std::string& word(WordId id) const { return words_.at(id); }
    std::uint64_t count(WordId id) const { return counts_.at(id); }

    std::span<const std::string> words() const noexcept { return words_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.min_count_ == b.min_count_ && a.words_ == b.words_ && a.counts_ == b.counts_;
    }

private:
    std::uint64_t min_count_ = 1;
    std::vector<std::string> words_;
    std::vector<std::uint64_t> counts_;
    StringMap<WordId> index_;
};

/// Accumulates raw token frequencies. Merging is commutative and associative,
/// so documents may be counted in any partition.
class FrequencyCounter {
public:
    void add(const TokenizedDocument& doc);
    void merge(const FrequencyCounter& other);

    std::uint64_t tokens() const noexcept { return tokens_; }
    const StringMap<std::uint64_t>& counts() const noexcept { return counts_; }

    Vocabulary finalize(std::uint64_t min_count) const;

private:
    std::uint64_t tokens_ = 0;
    StringMap<std::uint64_t> counts_;
};

/// Throws ArgumentError when min_count is 0.
Vocabulary build_vocabulary(std::span<const TokenizedDocument> docs, std::uint64_t min_count);

/// TSV `word<TAB>id<TAB>count`, sorted by id.
void save_vocabulary(const Vocabulary& vocab, std::ostream& out);
void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);

}  // namespace pmibias::corpus

#include "pmibias/corpus.hpp"

#include "pmibias/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace pmibias::corpus {

namespace {

bool is_ascii_alnum(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<fs::path> list_files(const fs::path& source) {
    std::error_code ec;
    if (!fs::exists(source, ec)) {
        throw IoError("source does not exist: " + source.string());
    }
    std::vector<fs::path> files;
    if (fs::is_directory(source, ec)) {
        for (fs::recursive_directory_iterator it(source, ec), end; it != end; it.increment(ec)) {
            if (ec) {
                throw IoError("cannot list " + source.string() + ": " + ec.message());
            }
            if (it->is_regular_file()) {
                files.push_back(it->path());
            }
        }
        if (ec) {
            throw IoError("cannot list " + source.string() + ": " + ec.message());
        }
        std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
            return a.generic_string() < b.generic_string();
        });
    } else {
        files.push_back(source);
    }
    return files;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return in;
}

void read_json_lines(const fs::path& path, std::istream& in, IngestStats& stats,
                     const DocumentSink& sink) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return is_space(c); })) {
            continue;
        }
        const std::string where = path.generic_string() + ":" + std::to_string(line_no);
        auto record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object() || !record.contains("text") ||
            !record["text"].is_string()) {
            ++stats.skipped;
            stats.warnings.push_back("skipping malformed record at " + where);
            continue;
        }
        RawDocument doc;
        doc.text = record["text"].get<std::string>();
        if (auto id = record.find("id"); id != record.end() && id->is_string()) {
            doc.id = id->get<std::string>();
        } else if (id != record.end() && id->is_number_integer()) {
            doc.id = std::to_string(id->get<long long>());
        } else {
            doc.id = where;
        }
        ++stats.documents;
        sink(std::move(doc));
    }
}

}  // namespace

InputFormat parse_input_format(std::string_view name) {
    if (name == "plain-text" || name == "plain") {
        return InputFormat::PlainText;
    }
    if (name == "one-doc-per-line" || name == "lines") {
        return InputFormat::OneDocPerLine;
    }
    if (name == "wiki-extracted-json" || name == "jsonl") {
        return InputFormat::JsonLines;
    }
    throw ConfigError("unknown input format: " + std::string(name));
}

IngestStats ingest(const fs::path& source, InputFormat format, const DocumentSink& sink) {
    IngestStats stats;
    for (const auto& path : list_files(source)) {
        auto in = open_input(path);
        ++stats.files;
        switch (format) {
        case InputFormat::PlainText: {
            std::ostringstream text;
            text << in.rdbuf();
            ++stats.documents;
            sink(RawDocument{path.generic_string(), std::move(text).str()});
            break;
        }
        case InputFormat::OneDocPerLine: {
            std::string line;
            std::size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                ++stats.documents;
                sink(RawDocument{path.generic_string() + ":" + std::to_string(line_no),
                                 std::move(line)});
                line.clear();
            }
            break;
        }
        case InputFormat::JsonLines:
            read_json_lines(path, in, stats, sink);
            break;
        }
        if (in.bad()) {
            throw IoError("read error on " + path.string());
        }
    }
    return stats;
}

std::vector<RawDocument> ingest_all(const fs::path& source, InputFormat format,
                                    IngestStats* stats) {
    std::vector<RawDocument> docs;
    auto s = ingest(source, format, [&](RawDocument&& d) { docs.push_back(std::move(d)); });
    if (stats) {
        *stats = std::move(s);
    }
    return docs;
}

std::size_t TokenizedDocument::token_count() const noexcept {
    std::size_t n = 0;
    for (const auto& s : sentences) {
        n += s.size();
    }
    return n;
}

std::vector<std::string_view> split_sentences(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if ((c == '.' || c == '!' || c == '?') &&
            (i + 1 == text.size() || is_space(static_cast<unsigned char>(text[i + 1])))) {
            out.push_back(text.substr(start, i + 1 - start));
            start = i + 1;
        }
    }
    if (start < text.size()) {
        out.push_back(text.substr(start));
    }
    return out;
}

Sentence tokenize(std::string_view sentence) {
    Sentence tokens;
    std::string current;
    for (const char ch : sentence) {
        const auto c = static_cast<unsigned char>(ch);
        if (is_ascii_alnum(c)) {
            current.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

std::optional<TokenizedDocument> preprocess(const RawDocument& doc, std::size_t min_doc_tokens) {
    TokenizedDocument out;
    out.id = doc.id;
    std::size_t total = 0;
    for (const auto sentence : split_sentences(doc.text)) {
        auto tokens = tokenize(sentence);
        if (tokens.empty()) {
            continue;
        }
        total += tokens.size();
        out.sentences.push_back(std::move(tokens));
    }
    if (total == 0 || total < min_doc_tokens) {
        return std::nullopt;
    }
    return out;
}

std::string to_text(const TokenizedDocument& doc) {
    std::string text;
    for (const auto& sentence : doc.sentences) {
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            if (i > 0) {
                text.push_back(' ');
            }
            text += sentence[i];
        }
        text += ". ";
    }
    return text;
}

Vocabulary Vocabulary::from_counts(const StringMap<std::uint64_t>& counts, std::uint64_t min_count) {
    if (min_count == 0) {
        throw ArgumentError("min_count must be at least 1");
    }
    std::vector<std::pair<std::string_view, std::uint64_t>> kept;
    for (const auto& [word, count] : counts) {
        if (count >= min_count) {
            kept.emplace_back(word, count);
        }
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    Vocabulary v;
    v.min_count_ = min_count;
    v.words_.reserve(kept.size());
    v.counts_.reserve(kept.size());
    v.index_.reserve(kept.size());
    for (const auto& [word, count] : kept) {
        v.index_.emplace(std::string(word), static_cast<WordId>(v.words_.size()));
        v.words_.emplace_back(word);
        v.counts_.push_back(count);
    }
    return v;
}

std::optional<WordId> Vocabulary::id(std::string_view word) const {
    if (auto it = index_.find(word); it != index_.end()) {
        return it->second;
    }
    return std::nullopt;
}

void FrequencyCounter::add(const TokenizedDocument& doc) {
    for (const auto& sentence : doc.sentences) {
        for (const auto& token : sentence) {
            auto it = counts_.find(token);
            if (it == counts_.end()) {
                counts_.emplace(token, 1);
            } else {
                ++it->second;
            }
        }
        tokens_ += sentence.size();
    }
}

void FrequencyCounter::merge(const FrequencyCounter& other) {
    tokens_ += other.tokens_;
    for (const auto& [word, count] : other.counts_) {
        counts_[word] += count;
    }
}

Vocabulary FrequencyCounter::finalize(std::uint64_t min_count) const {
    return Vocabulary::from_counts(counts_, min_count);
}

Vocabulary build_vocabulary(std::span<const TokenizedDocument> docs, std::uint64_t min_count) {
    FrequencyCounter counter;
    for (const auto& doc : docs) {
        counter.add(doc);
    }
    return counter.finalize(min_count);
}

void save_vocabulary(const Vocabulary& vocab, std::ostream& out) {
    for (std::size_t id = 0; id < vocab.size(); ++id) {
        out << vocab.words()[id] << '\t' << id << '\t' << vocab.counts()[id] << '\n';
    }
}

void save_vocabulary(const Vocabulary& vocab, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    save_vocabulary(vocab, out);
    if (!out) {
        throw IoError("write failed on " + path.string());
    }
}

}  // namespace pmibias::corpus

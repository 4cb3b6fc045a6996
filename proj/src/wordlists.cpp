#include "pmibias/wordlists.hpp"

#include "pmibias/corpus.hpp"
#include "pmibias/error.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace pmibias::study {

namespace {

std::string normalize_entry(const nlohmann::ordered_json& value, const std::string& where) {
    if (!value.is_string()) {
        throw ConfigError(where + ": word list entries must be strings");
    }
    const auto raw = value.get<std::string>();
    auto tokens = corpus::tokenize(raw);
    if (tokens.size() != 1) {
        throw ConfigError(where + ": '" + raw + "' is not a single token");
    }
    return std::move(tokens.front());
}

cooccur::TargetSet read_set(const nlohmann::ordered_json& value, std::string name) {
    if (!value.is_array() || value.empty()) {
        throw ConfigError("word list " + name + " must be a non-empty array");
    }
    cooccur::TargetSet set{std::move(name), {}};
    std::set<std::string> seen;
    for (const auto& entry : value) {
        auto word = normalize_entry(entry, "word list " + set.name);
        if (!seen.insert(word).second) {
            throw ConfigError("word '" + word + "' listed twice in " + set.name);
        }
        set.words.push_back(std::move(word));
    }
    return set;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

const cooccur::TargetSet& WordLists::context(std::string_view name) const {
    for (const auto& c : contexts) {
        if (c.name == name) {
            return c;
        }
    }
    throw ConfigError("no context set named " + std::string(name));
}

WordLists parse_word_lists(std::string_view json_text) {
    auto doc = nlohmann::ordered_json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ConfigError("word lists: not a JSON object");
    }
    for (const char* key : {"A", "B", "C"}) {
        if (!doc.contains(key)) {
            throw ConfigError(std::string("word lists: missing key ") + key);
        }
    }
    WordLists lists;
    lists.a = read_set(doc["A"], "A");
    lists.b = read_set(doc["B"], "B");
    const cooccur::TargetSet pair[] = {lists.a, lists.b};
    cooccur::validate_target_sets(pair);

    const auto& contexts = doc["C"];
    if (!contexts.is_object() || contexts.empty()) {
        throw ConfigError("word lists: C must be a non-empty object of named word lists");
    }
    for (const auto& [name, words] : contexts.items()) {
        if (name.empty()) {
            throw ConfigError("word lists: context set with empty name");
        }
        auto set = read_set(words, name);
        for (const auto& w : set.words) {
            if (lists.a.contains(w) || lists.b.contains(w)) {
                throw ConfigError("context set " + name + " shares '" + w + "' with a target set");
            }
        }
        lists.contexts.push_back(std::move(set));
    }
    return lists;
}

WordLists load_word_lists(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_word_lists(text.str());
}

GroundTruth parse_ground_truth(std::istream& in) {
    GroundTruth out;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto comma = line.rfind(',');
        if (comma == std::string::npos) {
            throw ConfigError("ground truth line " + std::to_string(line_no) + ": expected label,percent");
        }
        const auto label = trim(std::string_view(line).substr(0, comma));
        const auto value = trim(std::string_view(line).substr(comma + 1));
        double percent = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), percent);
        if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
            if (out.empty() && seen.empty() && line_no == 1) {
                continue;  // header
            }
            throw ConfigError("ground truth line " + std::to_string(line_no) + ": bad number '" +
                              value + "'");
        }
        if (!(percent >= 0.0 && percent <= 100.0)) {
            throw ConfigError("ground truth line " + std::to_string(line_no) +
                              ": percent outside [0, 100]");
        }
        if (label.empty() || !seen.insert(label).second) {
            throw ConfigError("ground truth line " + std::to_string(line_no) +
                              ": empty or duplicate label");
        }
        out.emplace_back(label, percent / 100.0);
    }
    return out;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return parse_ground_truth(in);
}

}  // namespace pmibias::study

#pragma once

#include "pmibias/cooccur.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace pmibias::study {

/// Target sets A and B and the named context sets, as read from
/// `{"A": [...], "B": [...], "C": {"name": [...], ...}}`. Context sets keep
/// their file order. Entries are normalized like corpus tokens.
struct WordLists {
    cooccur::TargetSet a{"A", {}};
    cooccur::TargetSet b{"B", {}};
    std::vector<cooccur::TargetSet> contexts;

    std::vector<cooccur::TargetSet> targets() const { return {a, b}; }
    const cooccur::TargetSet& context(std::string_view name) const;
};

/// Throws ConfigError for structural problems, entries that are not a single
/// token, A and B overlapping, or a context set sharing a word with A or B.
WordLists parse_word_lists(std::string_view json_text);
WordLists load_word_lists(const std::filesystem::path& path);

/// label -> real-world proportion in [0, 1], in file order.
using GroundTruth = std::vector<std::pair<std::string, double>>;

/// CSV `label,percent` with percents in [0, 100]; a non-numeric first row is
/// taken as a header.
GroundTruth parse_ground_truth(std::istream& in);
GroundTruth load_ground_truth(const std::filesystem::path& path);

}  // namespace pmibias::study

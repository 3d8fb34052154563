#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sensoria/types.hpp"

namespace sensoria {

// Seed words per sense, in file order after case folding and dedup.
// The five (surface, coarse) sets are pairwise disjoint.
struct SeedSets {
    std::array<std::vector<Word>, kSenseCount> seeds;

    std::size_t total() const {
        std::size_t n = 0;
        for (const auto& v : seeds) n += v.size();
        return n;
    }
};

// Reads <sense>.txt for all five senses from `dir`. Entries are
// "surface/coarse" lines; '#' starts a comment. Missing file, empty list,
// or a (surface, coarse) pair shared between senses is a validation error.
SeedSets load_seeds(const std::filesystem::path& dir);

// All inflected forms of a base word, including the base itself.
// Verbs get {-s, -ed, -ing}, nouns {-s}; adjectives and adverbs are
// returned as-is. Surfaces that already look inflected are returned
// unchanged, so re-expanding an expansion is a fixed point. A small
// irregular table overrides the suffix rules.
std::vector<Word> expand_inflections(const Word& base);

// All expanded seed forms mapped to their sense. Construction re-checks
// cross-sense disjointness on the expanded sets and fails listing the
// shared pairs.
class SeedLexicon {
  public:
    explicit SeedLexicon(const SeedSets& sets);

    std::optional<Sense> sense_of(const Word& w) const {
        auto it = map_.find(w);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    const std::unordered_map<Word, Sense, WordHash>& entries() const { return map_; }
    std::size_t size() const { return map_.size(); }
    std::size_t sense_size(Sense s) const { return sense_sizes_[sense_index(s)]; }

    // expanded-list sizes outside the plausibility band [50, 400]
    const std::vector<std::string>& warnings() const { return warnings_; }

  private:
    std::unordered_map<Word, Sense, WordHash> map_;
    std::array<std::size_t, kSenseCount> sense_sizes_{};
    std::vector<std::string> warnings_;
};

}  // namespace sensoria

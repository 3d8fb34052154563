#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sensoria/lexicon.hpp"
#include "sensoria/text.hpp"
#include "sensoria/types.hpp"

namespace sensoria {

struct WindowConfig {
    int half_width = 4;
    // punctuation surfaces that truncate a window
    std::unordered_set<std::string> boundary_puncts = default_boundary_puncts();

    static std::unordered_set<std::string> default_boundary_puncts();
};

struct ContextWindow {
    Sense sense;
    Word seed;
    std::string book_id;
    std::uint64_t seed_position = 0;   // token index in the filtered stream
    std::vector<Word> members;         // source order, no punctuation, no anchor

    bool operator==(const ContextWindow&) const = default;
};

// One window per seed occurrence. The window spans up to half_width token
// positions on each side, truncated at the first boundary punctuation in
// each direction. Punctuation tokens and the anchor position itself are
// never members; other occurrences of the anchor word are.
std::vector<ContextWindow> extract_windows(const TokenStream& stream,
                                           const SeedLexicon& lexicon,
                                           const WindowConfig& config);

struct WindowCounts {
    // distinct windows per sense in which each word appears
    std::unordered_map<Word, std::array<std::int64_t, kSenseCount>, WordHash> counts;
    std::array<std::int64_t, kSenseCount> window_totals{};

    std::int64_t count(const Word& w, Sense s) const {
        auto it = counts.find(w);
        return it == counts.end() ? 0 : it->second[sense_index(s)];
    }
};

// A word appearing several times inside one window counts once for that
// window. Merge order never changes totals.
WindowCounts count_occurrences(const std::vector<ContextWindow>& windows);
void merge_counts(WindowCounts& into, const WindowCounts& from);

// binary checkpoint
void write_windows(const std::filesystem::path& file, int half_width,
                   const std::vector<ContextWindow>& windows);
struct WindowFile {
    int half_width = 0;
    std::vector<ContextWindow> windows;
};
WindowFile read_windows(const std::filesystem::path& file);

// audit dump: sense, seed, book, position, members
void dump_windows_tsv(const std::filesystem::path& file,
                      const std::vector<ContextWindow>& windows);

}  // namespace sensoria

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace sensoria {

// The five sensory modalities. Order is fixed; it is the index into every
// per-sense array in the toolkit.
enum class Sense : std::uint8_t { Sight = 0, Hearing, Touch, Taste, Smell };

inline constexpr std::size_t kSenseCount = 5;

inline constexpr std::array<Sense, kSenseCount> all_senses() {
    return {Sense::Sight, Sense::Hearing, Sense::Touch, Sense::Taste, Sense::Smell};
}

inline constexpr std::size_t sense_index(Sense s) { return static_cast<std::size_t>(s); }

std::string_view sense_name(Sense s);
std::optional<Sense> sense_from_name(std::string_view name);

// Coarse part-of-speech classes. n/v/a/r are the content-word classes;
// everything else is other or punct.
enum class Coarse : std::uint8_t { Noun = 0, Verb, Adj, Adv, Other, Punct };

char coarse_code(Coarse c);                       // 'n','v','a','r','o','p'
std::optional<Coarse> coarse_from_code(char c);

inline bool is_content(Coarse c) {
    return c == Coarse::Noun || c == Coarse::Verb || c == Coarse::Adj || c == Coarse::Adv;
}

// Identity of a lexical item: case-folded surface plus coarse POS.
// "taste"/n and "taste"/v are distinct words throughout.
struct Word {
    std::string surface;
    Coarse coarse = Coarse::Noun;

    friend auto operator<=>(const Word&, const Word&) = default;
};

struct WordHash {
    std::size_t operator()(const Word& w) const {
        std::size_t h = std::hash<std::string>{}(w.surface);
        return h ^ (static_cast<std::size_t>(w.coarse) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};

// "surface/c" form used in seed files, CSV exports and matrix labels.
std::string word_key(const Word& w);
std::optional<Word> word_from_key(std::string_view key);

// Bitmask over senses, used for multi-sense descriptor membership.
using SenseMask = std::uint8_t;

inline constexpr SenseMask sense_bit(Sense s) {
    return static_cast<SenseMask>(1u << sense_index(s));
}
inline constexpr bool mask_has(SenseMask m, Sense s) { return (m & sense_bit(s)) != 0; }
int mask_count(SenseMask m);
std::string mask_to_string(SenseMask m);  // semicolon-joined sense names

// ASCII case folding; non-ASCII bytes pass through unchanged.
std::string fold_case(std::string_view s);

}  // namespace sensoria

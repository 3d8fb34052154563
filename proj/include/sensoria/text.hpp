#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sensoria/types.hpp"

namespace sensoria {

struct TaggedToken {
    std::string surface;   // case-folded
    std::string original;  // as seen in the text
    std::string ptb_tag;
    Coarse coarse = Coarse::Other;
};

struct TokenStream {
    std::string book_id;
    std::vector<TaggedToken> tokens;
};

// Treebank-style tokenization: punctuation split off, contractions split at
// the clitic ("don't" -> "do" + "n't"), abbreviations like "Mr." kept whole.
std::vector<std::string> tokenize(std::string_view raw_text);

// Inverse good enough for the round-trip property: tokenize(detokenize(t)) == t.
std::string detokenize(const std::vector<std::string>& tokens);

// Coarse class of a Penn Treebank tag. Total: every tag maps to exactly one
// class (NN* -> n, VB* -> v, JJ* -> a, RB* -> r, punctuation tags -> punct,
// everything else -> other).
Coarse coarse_pos(std::string_view ptb_tag);

bool is_punct_tag(std::string_view ptb_tag);

enum class TaggerBackend { Builtin, Pretagged };

std::string_view tagger_backend_name(TaggerBackend b);
std::optional<TaggerBackend> tagger_backend_from_name(std::string_view name);

// Unigram baseline: embedded frequency lexicon, then suffix heuristics, then
// default NN. Punctuation gets its PTB punctuation tag.
TokenStream tag_pos_builtin(const std::vector<std::string>& surfaces, std::string book_id);

// Reader for externally tagged text: one "surface<TAB>tag" per line, blank
// line = sentence break. Malformed lines are fatal and name the line number.
TokenStream parse_pretagged(std::string_view content, std::string book_id);

struct StopEntry {
    std::string surface;            // case-folded
    std::optional<Coarse> coarse;   // restrict removal to this class when set

    friend bool operator==(const StopEntry&, const StopEntry&) = default;
};

class StopList {
  public:
    StopList() = default;
    explicit StopList(const std::vector<StopEntry>& entries);

    static StopList load(const std::filesystem::path& file);

    // True when the token matches an entry. Punctuation never matches.
    bool matches(const TaggedToken& tok) const;

    std::size_t size() const { return any_.size() + by_coarse_.size(); }

  private:
    std::unordered_set<std::string> any_;
    std::unordered_set<std::string> by_coarse_;  // keyed "surface/c"
};

// Removes stop-listed tokens; punctuation always survives (the window stage
// needs it for boundary truncation) and order is preserved.
TokenStream remove_stopwords(const TokenStream& stream, const StopList& stops);

}  // namespace sensoria

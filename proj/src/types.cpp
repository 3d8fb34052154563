#include "sensoria/types.hpp"

namespace sensoria {

std::string_view sense_name(Sense s) {
    switch (s) {
        case Sense::Sight: return "sight";
        case Sense::Hearing: return "hearing";
        case Sense::Touch: return "touch";
        case Sense::Taste: return "taste";
        case Sense::Smell: return "smell";
    }
    return "?";
}

std::optional<Sense> sense_from_name(std::string_view name) {
    std::string folded = fold_case(name);
    for (Sense s : all_senses()) {
        if (folded == sense_name(s)) return s;
    }
    return std::nullopt;
}

char coarse_code(Coarse c) {
    switch (c) {
        case Coarse::Noun: return 'n';
        case Coarse::Verb: return 'v';
        case Coarse::Adj: return 'a';
        case Coarse::Adv: return 'r';
        case Coarse::Other: return 'o';
        case Coarse::Punct: return 'p';
    }
    return '?';
}

std::optional<Coarse> coarse_from_code(char c) {
    switch (c) {
        case 'n': return Coarse::Noun;
        case 'v': return Coarse::Verb;
        case 'a': return Coarse::Adj;
        case 'r': return Coarse::Adv;
        case 'o': return Coarse::Other;
        case 'p': return Coarse::Punct;
        default: return std::nullopt;
    }
}

std::string word_key(const Word& w) {
    std::string out = w.surface;
    out += '/';
    out += coarse_code(w.coarse);
    return out;
}

std::optional<Word> word_from_key(std::string_view key) {
    // coarse code follows the LAST slash; surfaces may contain '/'.
    auto pos = key.rfind('/');
    if (pos == std::string_view::npos || pos + 2 != key.size() || pos == 0) return std::nullopt;
    auto coarse = coarse_from_code(key[pos + 1]);
    if (!coarse) return std::nullopt;
    return Word{std::string(key.substr(0, pos)), *coarse};
}

int mask_count(SenseMask m) {
    int n = 0;
    for (Sense s : all_senses())
        if (mask_has(m, s)) ++n;
    return n;
}

std::string mask_to_string(SenseMask m) {
    std::string out;
    for (Sense s : all_senses()) {
        if (!mask_has(m, s)) continue;
        if (!out.empty()) out += ';';
        out += sense_name(s);
    }
    return out;
}

std::string fold_case(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

}  // namespace sensoria

#include "sensoria/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "sensoria/error.hpp"

namespace sensoria {
namespace {

bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool all_ascii_alpha(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalpha(c) != 0;
    });
}

bool ends_with(const std::string& s, std::string_view suf) {
    return s.size() >= suf.size() &&
           s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// Final-consonant doubling for short bases: rub -> rubbed, sip -> sipping.
// Restricted to length <= 4 so longer bases keep a single consonant.
bool doubles_final(const std::string& b) {
    std::size_t n = b.size();
    if (n < 2 || n > 4) return false;
    char last = b[n - 1];
    if (is_vowel(last) || last == 'w' || last == 'x' || last == 'y') return false;
    if (!is_vowel(b[n - 2])) return false;
    return n == 2 || !is_vowel(b[n - 3]);
}

std::string plural_of(const std::string& b) {
    if (ends_with(b, "s") || ends_with(b, "x") || ends_with(b, "z") ||
        ends_with(b, "ch") || ends_with(b, "sh") || ends_with(b, "o"))
        return b + "es";
    if (b.size() > 1 && b.back() == 'y' && !is_vowel(b[b.size() - 2]))
        return b.substr(0, b.size() - 1) + "ies";
    return b + "s";
}

std::string past_of(const std::string& b) {
    if (b.back() == 'e') return b + "d";
    if (b.size() > 1 && b.back() == 'y' && !is_vowel(b[b.size() - 2]))
        return b.substr(0, b.size() - 1) + "ied";
    if (doubles_final(b)) return b + b.back() + "ed";
    return b + "ed";
}

std::string gerund_of(const std::string& b) {
    if (b.back() == 'e' && !ends_with(b, "ee") && !ends_with(b, "ye") && !ends_with(b, "oe"))
        return b.substr(0, b.size() - 1) + "ing";
    if (doubles_final(b)) return b + b.back() + "ing";
    return b + "ing";
}

// form list includes the base itself
const std::unordered_map<std::string, std::vector<std::string>>& irregulars() {
    static const std::unordered_map<std::string, std::vector<std::string>> table = {
        {"see/v", {"see", "sees", "saw", "seen", "seeing"}},
        {"hear/v", {"hear", "hears", "heard", "hearing"}},
        {"feel/v", {"feel", "feels", "felt", "feeling"}},
        {"eat/v", {"eat", "eats", "ate", "eaten", "eating"}},
        {"bite/v", {"bite", "bites", "bit", "bitten", "biting"}},
        {"drink/v", {"drink", "drinks", "drank", "drunk", "drinking"}},
        {"sing/v", {"sing", "sings", "sang", "sung", "singing"}},
        {"ring/v", {"ring", "rings", "rang", "rung", "ringing"}},
        {"hold/v", {"hold", "holds", "held", "holding"}},
        {"give/v", {"give", "gives", "gave", "given", "giving"}},
        {"take/v", {"take", "takes", "took", "taken", "taking"}},
        {"tooth/n", {"tooth", "teeth"}},
        {"teeth/n", {"teeth"}},
        {"foot/n", {"foot", "feet"}},
        {"man/n", {"man", "men"}},
        {"woman/n", {"woman", "women"}},
        {"child/n", {"child", "children"}},
        {"mouse/n", {"mouse", "mice"}},
    };
    return table;
}

// Surfaces that already carry an inflectional ending are left alone so a
// second expansion pass is a no-op.
bool looks_inflected(const std::string& s) {
    if (ends_with(s, "ing") && s.size() > 4) return true;
    if (ends_with(s, "ed") && s.size() > 3) return true;
    if (s.size() > 3 && s.back() == 's' && !ends_with(s, "ss") && !ends_with(s, "us") &&
        !ends_with(s, "is"))
        return true;
    return false;
}

}  // namespace

std::vector<Word> expand_inflections(const Word& base) {
    const std::string& b = base.surface;

    if (auto it = irregulars().find(word_key(base)); it != irregulars().end()) {
        std::vector<Word> out;
        out.reserve(it->second.size());
        for (const auto& form : it->second) out.push_back(Word{form, base.coarse});
        return out;
    }

    if (base.coarse == Coarse::Adj || base.coarse == Coarse::Adv) return {base};
    if (!all_ascii_alpha(b)) return {base};
    if (looks_inflected(b)) return {base};

    std::vector<Word> out{base};
    auto add = [&](std::string form) {
        Word w{std::move(form), base.coarse};
        if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(std::move(w));
    };
    if (base.coarse == Coarse::Verb) {
        add(plural_of(b));
        add(past_of(b));
        add(gerund_of(b));
    } else if (base.coarse == Coarse::Noun) {
        add(plural_of(b));
    }
    return out;
}

namespace {

// Fatal when a (surface, coarse) pair belongs to more than one sense.
void check_disjoint(const std::array<std::vector<Word>, kSenseCount>& per_sense,
                    const char* stage) {
    std::unordered_map<std::string, Sense> owner;
    std::vector<std::string> shared;
    for (Sense s : all_senses()) {
        for (const Word& w : per_sense[sense_index(s)]) {
            auto [it, fresh] = owner.emplace(word_key(w), s);
            if (!fresh && it->second != s)
                shared.push_back(word_key(w) + " (" + std::string(sense_name(it->second)) +
                                 ", " + std::string(sense_name(s)) + ")");
        }
    }
    if (!shared.empty()) {
        std::string msg = std::string(stage) + " seed lists overlap across senses:";
        for (const auto& pair : shared) msg += " " + pair;
        throw ValidationError(msg);
    }
}

}  // namespace

SeedSets load_seeds(const std::filesystem::path& dir) {
    SeedSets sets;
    for (Sense s : all_senses()) {
        std::filesystem::path file = dir / (std::string(sense_name(s)) + ".txt");
        std::ifstream in(file);
        if (!in) throw ValidationError("cannot open seed file: " + file.string());

        std::unordered_set<std::string> seen;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            auto last = line.find_last_not_of(" \t");
            std::string entry = line.substr(first, last - first + 1);

            auto bad = [&](const std::string& why) {
                return ValidationError("seed file " + file.string() + " line " +
                                       std::to_string(line_no) + ": " + why + " in \"" +
                                       entry + "\"");
            };
            auto slash = entry.rfind('/');
            if (slash == std::string::npos || slash == 0 || slash + 2 != entry.size())
                throw bad("expected \"surface/coarse\"");
            auto coarse = coarse_from_code(entry[slash + 1]);
            if (!coarse || *coarse == Coarse::Punct || *coarse == Coarse::Other)
                throw bad("unknown coarse code");

            Word w{fold_case(entry.substr(0, slash)), *coarse};
            if (seen.insert(word_key(w)).second) sets.seeds[sense_index(s)].push_back(std::move(w));
        }
        if (sets.seeds[sense_index(s)].empty())
            throw ValidationError("seed file " + file.string() + " contains no entries");
    }
    check_disjoint(sets.seeds, "loaded");
    return sets;
}

SeedLexicon::SeedLexicon(const SeedSets& sets) {
    std::array<std::vector<Word>, kSenseCount> expanded;
    for (Sense s : all_senses()) {
        auto& forms = expanded[sense_index(s)];
        std::unordered_set<std::string> seen;
        for (const Word& base : sets.seeds[sense_index(s)]) {
            for (const Word& form : expand_inflections(base)) {
                if (seen.insert(word_key(form)).second) forms.push_back(form);
            }
        }
    }
    check_disjoint(expanded, "expanded");

    for (Sense s : all_senses()) {
        const auto& forms = expanded[sense_index(s)];
        sense_sizes_[sense_index(s)] = forms.size();
        if (forms.size() < 50 || forms.size() > 400)
            warnings_.push_back("expanded seed list for " + std::string(sense_name(s)) +
                                " has " + std::to_string(forms.size()) +
                                " forms, outside the expected 50-400 band");
        for (const Word& form : forms) map_.emplace(form, s);
    }
}

}  // namespace sensoria

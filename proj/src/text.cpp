#include "sensoria/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sensoria/error.hpp"

namespace sensoria {
namespace {

// ---------------------------------------------------------------- utf-8 ---

std::vector<std::string_view> utf8_chars(std::string_view s) {
    std::vector<std::string_view> chars;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        if ((c & 0xE0) == 0xC0) len = 2;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xF8) == 0xF0) len = 4;
        if (i + len > s.size()) len = 1;
        chars.push_back(s.substr(i, len));
        i += len;
    }
    return chars;
}

constexpr std::string_view kOpenDouble = "“";   // left curly double quote
constexpr std::string_view kCloseDouble = "”";
constexpr std::string_view kOpenSingle = "‘";
constexpr std::string_view kCloseSingle = "’";  // also the curly apostrophe
constexpr std::string_view kEmDash = "—";
constexpr std::string_view kEnDash = "–";
constexpr std::string_view kEllipsis = "…";

bool is_dash_char(std::string_view ch) { return ch == kEmDash || ch == kEnDash; }

bool is_lead_punct(std::string_view ch) {
    if (ch.size() == 1) {
        switch (ch[0]) {
            case '(': case '[': case '{': case '$': case '#': case '*': return true;
            default: return false;
        }
    }
    return ch == kOpenDouble || ch == kOpenSingle || is_dash_char(ch);
}

bool is_trail_punct(std::string_view ch) {
    if (ch.size() == 1) {
        switch (ch[0]) {
            case ',': case ';': case ':': case '!': case '?':
            case ')': case ']': case '}': case '%': case '*': return true;
            default: return false;
        }
    }
    return ch == kCloseDouble || ch == kCloseSingle || is_dash_char(ch) || ch == kEllipsis;
}

bool is_word_char(std::string_view ch) {
    if (ch.size() > 1) return !(is_dash_char(ch) || ch == kOpenDouble || ch == kCloseDouble ||
                                ch == kOpenSingle || ch == kCloseSingle || ch == kEllipsis);
    unsigned char c = static_cast<unsigned char>(ch[0]);
    return std::isalnum(c) || c == '_' || c == '-' || c == '\'' || c == '.';
}

// Tokens that keep a final period attached.
bool keep_final_period(const std::string& base) {
    if (base.empty()) return false;
    if (base.find('.') != std::string::npos) return true;  // e.g., i.e., U.S
    if (base.size() == 1 && std::isalpha(static_cast<unsigned char>(base[0]))) return true;
    static const std::unordered_set<std::string> abbrevs = {
        "mr", "mrs", "ms", "dr", "st", "prof", "rev", "capt", "col", "gen",
        "lt", "sgt", "maj", "jr", "sr", "vs", "etc", "hon", "esq"};
    return abbrevs.count(fold_case(base)) > 0;
}

// Chunks like "'em" or "'tis" stay whole; a leading apostrophe elsewhere is
// an opening quote.
bool leading_apostrophe_is_clitic(std::string_view rest_folded) {
    static const std::unordered_set<std::string> clitics = {"s", "m", "d", "ll", "re",
                                                            "ve", "em", "tis", "twas"};
    return clitics.count(std::string(rest_folded)) > 0;
}

std::vector<std::string> split_contractions(const std::string& w) {
    std::string folded = fold_case(w);
    if (folded == "cannot") return {w.substr(0, 3), w.substr(3)};

    auto ends_with = [&](std::string_view suffix) {
        return folded.size() > suffix.size() &&
               folded.compare(folded.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    static const std::vector<std::string> suffixes = {
        "n't", "n’t", "'ll", "’ll", "'re", "’re", "'ve", "’ve",
        "'s",  "’s",  "'m",  "’m",  "'d",  "’d"};
    for (const auto& suf : suffixes) {
        if (ends_with(suf)) {
            std::size_t cut = w.size() - suf.size();
            return {w.substr(0, cut), w.substr(cut)};
        }
    }
    return {w};
}

// Splits a peeled chunk core on dash runs, then contraction clitics.
void split_core(const std::vector<std::string_view>& chars, std::size_t begin, std::size_t end,
                std::vector<std::string>& out) {
    std::string word;
    auto flush_word = [&] {
        if (word.empty()) return;
        for (auto& part : split_contractions(word)) out.push_back(std::move(part));
        word.clear();
    };
    for (std::size_t i = begin; i < end; ++i) {
        std::string_view c = chars[i];
        if (is_dash_char(c)) {
            flush_word();
            out.emplace_back(c);
        } else if (c == "-" && i + 1 < end && chars[i + 1] == "-") {
            flush_word();
            std::string dashes;
            while (i < end && chars[i] == "-") {
                dashes += '-';
                ++i;
            }
            --i;
            out.push_back(std::move(dashes));
        } else {
            word += c;
        }
    }
    flush_word();
}

void tokenize_chunk(std::string_view chunk, std::vector<std::string>& out) {
    auto chars = utf8_chars(chunk);
    std::size_t begin = 0, end = chars.size();

    std::vector<std::string> lead, trail;

    while (begin < end) {
        std::string_view c = chars[begin];
        if (c == "\"") {
            lead.emplace_back("``");
            ++begin;
        } else if (c == "`") {
            if (begin + 1 < end && chars[begin + 1] == "`") {
                lead.emplace_back("``");
                begin += 2;
            } else {
                lead.emplace_back("`");
                ++begin;
            }
        } else if (c == "'") {
            std::string rest;
            for (std::size_t i = begin + 1; i < end; ++i) rest += chars[i];
            if (leading_apostrophe_is_clitic(fold_case(rest))) break;
            lead.emplace_back("'");
            ++begin;
        } else if (c == "." && begin + 1 < end && chars[begin + 1] == ".") {
            std::string dots;
            while (begin < end && chars[begin] == ".") {
                dots += '.';
                ++begin;
            }
            lead.push_back(std::move(dots));
        } else if (is_lead_punct(c)) {
            lead.emplace_back(c);
            ++begin;
        } else {
            break;
        }
    }

    while (end > begin) {
        std::string_view c = chars[end - 1];
        if (c == "\"") {
            trail.emplace_back("''");
            --end;
        } else if (c == "'") {
            if (end - begin == 2 && chars[begin] == "'") break;  // `'s` etc. survive peeling
            trail.emplace_back("'");
            --end;
        } else if (c == ".") {
            if (end - 1 > begin && chars[end - 2] == ".") {
                std::string dots;
                while (end > begin && chars[end - 1] == ".") {
                    dots += '.';
                    --end;
                }
                trail.push_back(std::move(dots));
            } else {
                std::string base;
                for (std::size_t i = begin; i + 1 < end; ++i) base += chars[i];
                if (keep_final_period(base)) break;
                trail.emplace_back(".");
                --end;
            }
        } else if (is_trail_punct(c)) {
            trail.emplace_back(c);
            --end;
        } else {
            break;
        }
    }

    out.insert(out.end(), lead.begin(), lead.end());
    split_core(chars, begin, end, out);
    out.insert(out.end(), trail.rbegin(), trail.rend());
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw_text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < raw_text.size()) {
        while (i < raw_text.size() && std::isspace(static_cast<unsigned char>(raw_text[i]))) ++i;
        std::size_t start = i;
        while (i < raw_text.size() && !std::isspace(static_cast<unsigned char>(raw_text[i]))) ++i;
        if (i > start) tokenize_chunk(raw_text.substr(start, i - start), out);
    }
    return out;
}

std::string detokenize(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

// ------------------------------------------------------------------ tags ---

namespace {

const std::unordered_set<std::string>& punct_tags() {
    static const std::unordered_set<std::string> tags = {
        ".",     ",",     ":",     "``",    "''",   "-LRB-", "-RRB-", "-LSB-",
        "-RSB-", "-LCB-", "-RCB-", "#",     "$",    "SYM",   "HYPH"};
    return tags;
}

bool is_punct_token(const std::string& s) {
    for (std::string_view c : utf8_chars(s)) {
        if (c.size() == 1) {
            unsigned char ch = static_cast<unsigned char>(c[0]);
            if (std::isalnum(ch)) return false;
        } else if (!(is_dash_char(c) || c == kOpenDouble || c == kCloseDouble ||
                     c == kOpenSingle || c == kCloseSingle || c == kEllipsis)) {
            return false;
        }
    }
    return !s.empty();
}

std::string punct_tag_for(const std::string& s) {
    if (s == "." || s == "!" || s == "?") return ".";
    if (s == ",") return ",";
    if (s == "``" || s == "`" || s == kOpenDouble || s == kOpenSingle) return "``";
    if (s == "''" || s == "'" || s == kCloseDouble || s == kCloseSingle) return "''";
    if (s == "(") return "-LRB-";
    if (s == ")") return "-RRB-";
    if (s == "[") return "-LSB-";
    if (s == "]") return "-RSB-";
    if (s == "{") return "-LCB-";
    if (s == "}") return "-RCB-";
    if (s == "$") return "$";
    if (s == "#") return "#";
    if (s == ":" || s == ";") return ":";
    if (!s.empty() && (s[0] == '.' || s[0] == '-')) return ":";  // dot/dash runs
    if (is_dash_char(utf8_chars(s)[0]) || s == std::string(kEllipsis)) return ":";
    return "SYM";
}

// Most frequent PTB tag for common words; the baseline tagger is a unigram
// model, so ambiguous surfaces get their single dominant reading.
const std::unordered_map<std::string, std::string>& tag_lexicon() {
    static const std::unordered_map<std::string, std::string> lex = {
        // determiners / articles
        {"the", "DT"}, {"a", "DT"}, {"an", "DT"}, {"this", "DT"}, {"that", "DT"},
        {"these", "DT"}, {"those", "DT"}, {"some", "DT"}, {"any", "DT"}, {"no", "DT"},
        {"each", "DT"}, {"every", "DT"}, {"either", "DT"}, {"neither", "DT"},
        {"another", "DT"}, {"both", "DT"}, {"all", "DT"}, {"such", "PDT"},
        // pronouns
        {"i", "PRP"}, {"you", "PRP"}, {"he", "PRP"}, {"she", "PRP"}, {"it", "PRP"},
        {"we", "PRP"}, {"they", "PRP"}, {"me", "PRP"}, {"him", "PRP"}, {"us", "PRP"},
        {"them", "PRP"}, {"himself", "PRP"}, {"herself", "PRP"}, {"itself", "PRP"},
        {"themselves", "PRP"}, {"myself", "PRP"}, {"yourself", "PRP"}, {"ourselves", "PRP"},
        {"my", "PRP$"}, {"your", "PRP$"}, {"his", "PRP$"}, {"her", "PRP$"}, {"its", "PRP$"},
        {"our", "PRP$"}, {"their", "PRP$"}, {"mine", "PRP"}, {"yours", "PRP"},
        {"hers", "PRP"}, {"ours", "PRP"}, {"theirs", "PRP"},
        {"who", "WP"}, {"whom", "WP"}, {"whose", "WP$"}, {"which", "WDT"}, {"what", "WDT"},
        // prepositions
        {"of", "IN"}, {"in", "IN"}, {"on", "IN"}, {"at", "IN"}, {"by", "IN"},
        {"with", "IN"}, {"from", "IN"}, {"into", "IN"}, {"upon", "IN"}, {"over", "IN"},
        {"under", "IN"}, {"through", "IN"}, {"between", "IN"}, {"among", "IN"},
        {"against", "IN"}, {"about", "IN"}, {"above", "IN"}, {"below", "IN"},
        {"after", "IN"}, {"before", "IN"}, {"during", "IN"}, {"without", "IN"},
        {"within", "IN"}, {"along", "IN"}, {"across", "IN"}, {"behind", "IN"},
        {"beyond", "IN"}, {"beneath", "IN"}, {"toward", "IN"}, {"towards", "IN"},
        {"near", "IN"}, {"off", "IN"}, {"around", "IN"}, {"down", "IN"}, {"past", "IN"},
        {"like", "IN"}, {"as", "IN"}, {"for", "IN"}, {"if", "IN"}, {"while", "IN"},
        {"because", "IN"}, {"though", "IN"}, {"although", "IN"}, {"until", "IN"},
        {"since", "IN"},
        // conjunctions, particles
        {"and", "CC"}, {"or", "CC"}, {"but", "CC"}, {"nor", "CC"}, {"to", "TO"},
        {"up", "RP"}, {"out", "RP"},
        // modals and light verbs
        {"can", "MD"}, {"could", "MD"}, {"will", "MD"}, {"would", "MD"}, {"shall", "MD"},
        {"should", "MD"}, {"may", "MD"}, {"might", "MD"}, {"must", "MD"},
        {"do", "VBP"}, {"does", "VBZ"}, {"did", "VBD"}, {"doing", "VBG"}, {"done", "VBN"},
        {"be", "VB"}, {"am", "VBP"}, {"is", "VBZ"}, {"are", "VBP"}, {"was", "VBD"},
        {"were", "VBD"}, {"been", "VBN"}, {"being", "VBG"},
        {"have", "VBP"}, {"has", "VBZ"}, {"had", "VBD"}, {"having", "VBG"},
        {"go", "VB"}, {"goes", "VBZ"}, {"went", "VBD"}, {"gone", "VBN"}, {"going", "VBG"},
        {"come", "VB"}, {"comes", "VBZ"}, {"came", "VBD"}, {"coming", "VBG"},
        {"make", "VB"}, {"makes", "VBZ"}, {"made", "VBD"}, {"making", "VBG"},
        // negation and common adverbs
        {"not", "RB"}, {"never", "RB"}, {"n't", "RB"}, {"n’t", "RB"},
        {"very", "RB"}, {"too", "RB"}, {"quite", "RB"}, {"almost", "RB"},
        {"always", "RB"}, {"often", "RB"}, {"soon", "RB"}, {"again", "RB"},
        {"then", "RB"}, {"now", "RB"}, {"here", "RB"}, {"perhaps", "RB"},
        {"rather", "RB"}, {"still", "RB"}, {"just", "RB"}, {"only", "RB"},
        {"even", "RB"}, {"also", "RB"}, {"once", "RB"}, {"well", "RB"},
        {"there", "EX"}, {"more", "JJR"}, {"most", "JJS"}, {"less", "JJR"},
        {"when", "WRB"}, {"where", "WRB"}, {"why", "WRB"}, {"how", "WRB"},
        {"oh", "UH"}, {"ah", "UH"},
        // frequent verbs, with the irregular past forms of the perception
        // verbs spelled out so inflected seeds anchor correctly
        {"say", "VB"}, {"says", "VBZ"}, {"said", "VBD"}, {"know", "VB"}, {"knew", "VBD"},
        {"think", "VB"}, {"thought", "VBD"}, {"take", "VB"}, {"took", "VBD"},
        {"get", "VB"}, {"got", "VBD"}, {"put", "VB"}, {"let", "VB"}, {"seem", "VB"},
        {"seemed", "VBD"}, {"stood", "VBD"}, {"sat", "VBD"}, {"ran", "VBD"},
        {"found", "VBD"}, {"felt", "VBD"}, {"heard", "VBD"}, {"saw", "VBD"},
        {"seen", "VBN"}, {"ate", "VBD"}, {"eaten", "VBN"}, {"bit", "VBD"},
        {"bitten", "VBN"}, {"drank", "VBD"}, {"drunk", "VBN"}, {"sang", "VBD"},
        {"rang", "VBD"}, {"gave", "VBD"}, {"give", "VB"}, {"held", "VBD"},
        {"kept", "VBD"}, {"left", "VBD"}, {"told", "VBD"}, {"began", "VBD"},
        // perception verbs, verb-dominant
        {"see", "VB"}, {"look", "VB"}, {"watch", "VB"}, {"observe", "VB"},
        {"notice", "VB"}, {"stare", "VB"}, {"gaze", "VB"}, {"glance", "VB"},
        {"peer", "VB"}, {"glimpse", "VB"}, {"squint", "VB"}, {"blink", "VB"},
        {"listen", "VB"}, {"hear", "VB"}, {"feel", "VB"}, {"press", "VB"},
        {"rub", "VB"}, {"grasp", "VB"}, {"stroke", "VB"}, {"caress", "VB"},
        {"grip", "VB"}, {"tingle", "VB"}, {"perceive", "VB"}, {"eat", "VB"},
        {"bite", "VB"}, {"drink", "VB"}, {"sip", "VB"}, {"chew", "VB"},
        {"swallow", "VB"}, {"savor", "VB"}, {"savour", "VB"}, {"inhale", "VB"},
        {"sniff", "VB"}, {"reek", "VB"}, {"stink", "VB"}, {"breathe", "VB"},
        // perception words, noun-dominant
        {"smell", "NN"}, {"touch", "NN"}, {"taste", "NN"}, {"sound", "NN"},
        {"view", "NN"}, {"voice", "NN"}, {"sense", "NN"}, {"sensation", "NN"},
        {"scent", "NN"}, {"odor", "NN"}, {"odour", "NN"}, {"perfume", "NN"},
        {"fragrance", "NN"}, {"aroma", "NN"}, {"essence", "NN"}, {"flavor", "NN"},
        {"flavour", "NN"}, {"palate", "NN"}, {"morsel", "NN"}, {"mouthful", "NN"},
        {"tooth", "NN"}, {"teeth", "NNS"}, {"tongue", "NN"}, {"silence", "NN"},
        {"noise", "NN"}, {"echo", "NN"}, {"whisper", "NN"}, {"murmur", "NN"},
        {"hum", "NN"}, {"tone", "NN"}, {"music", "NN"}, {"pressure", "NN"},
        {"texture", "NN"}, {"nose", "NN"}, {"whiff", "NN"}, {"fume", "NN"},
        {"incense", "NN"}, {"musk", "NN"}, {"olfaction", "NN"}, {"sight", "NN"},
        {"scene", "NN"}, {"color", "NN"}, {"colour", "NN"}, {"eye", "NN"},
        {"eyes", "NNS"}, {"face", "NN"}, {"hand", "NN"}, {"hands", "NNS"},
        {"word", "NN"}, {"words", "NNS"}, {"man", "NN"}, {"time", "NN"},
        {"moment", "NN"}, {"nothing", "NN"}, {"none", "NN"},
        // perception adjectives
        {"visual", "JJ"}, {"audible", "JJ"}, {"audio", "JJ"}, {"loud", "JJ"},
        {"quiet", "JJ"}, {"soft", "JJ"}, {"gentle", "JJ"}, {"light", "JJ"},
        {"warm", "JJ"}, {"cold", "JJ"}, {"smooth", "JJ"}, {"rough", "JJ"},
        {"sweet", "JJ"}, {"sour", "JJ"}, {"bitter", "JJ"}, {"salty", "JJ"},
        {"delicious", "JJ"}, {"pungent", "JJ"}, {"musky", "JJ"}, {"faint", "JJ"},
        {"dim", "JJ"}, {"bright", "JJ"}, {"dark", "JJ"}, {"fresh", "JJ"},
        {"old", "JJ"}, {"little", "JJ"}, {"good", "JJ"}, {"great", "JJ"},
        {"long", "JJ"}, {"new", "JJ"}, {"own", "JJ"}, {"other", "JJ"},
        {"first", "JJ"}, {"last", "JJ"}, {"much", "JJ"}, {"many", "JJ"},
    };
    return lex;
}

bool looks_numeric(const std::string& s) {
    bool has_digit = false;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c))) has_digit = true;
        else if (c != '.' && c != ',' && c != '-' && c != '+' && c != '/') return false;
    }
    return has_digit;
}

std::string suffix_tag(const std::string& folded, const std::string& original) {
    auto ends = [&](std::string_view suf) {
        return folded.size() > suf.size() &&
               folded.compare(folded.size() - suf.size(), suf.size(), suf) == 0;
    };
    if (ends("n't")) return "RB";
    if (ends("ly")) return "RB";
    if (folded.size() > 4 && ends("ing")) return "VBG";
    if (folded.size() > 3 && ends("ed")) return "VBD";
    for (std::string_view suf : {"tion", "sion", "ment", "ness", "ship", "hood",
                                 "ism", "ity", "ance", "ence", "age", "ure"})
        if (ends(suf)) return "NN";
    for (std::string_view suf : {"ous", "ful", "ive", "less", "able", "ible", "ish", "ary"})
        if (ends(suf)) return "JJ";
    if (folded.size() > 4 && ends("est")) return "JJS";
    if (folded.size() > 3 && folded.back() == 's' && !ends("ss") && !ends("us") && !ends("is"))
        return "NNS";
    if (!original.empty() && std::isupper(static_cast<unsigned char>(original[0]))) return "NNP";
    return "NN";
}

}  // namespace

Coarse coarse_pos(std::string_view ptb_tag) {
    if (ptb_tag.empty()) return Coarse::Other;
    if (is_punct_tag(ptb_tag)) return Coarse::Punct;
    if (ptb_tag.substr(0, 2) == "NN") return Coarse::Noun;
    if (ptb_tag.substr(0, 2) == "VB") return Coarse::Verb;
    if (ptb_tag.substr(0, 2) == "JJ") return Coarse::Adj;
    if (ptb_tag.substr(0, 2) == "RB") return Coarse::Adv;
    return Coarse::Other;
}

bool is_punct_tag(std::string_view ptb_tag) {
    return punct_tags().count(std::string(ptb_tag)) > 0;
}

std::string_view tagger_backend_name(TaggerBackend b) {
    return b == TaggerBackend::Builtin ? "builtin" : "pretagged";
}

std::optional<TaggerBackend> tagger_backend_from_name(std::string_view name) {
    if (name == "builtin") return TaggerBackend::Builtin;
    if (name == "pretagged") return TaggerBackend::Pretagged;
    return std::nullopt;
}

TokenStream tag_pos_builtin(const std::vector<std::string>& surfaces, std::string book_id) {
    TokenStream stream;
    stream.book_id = std::move(book_id);
    stream.tokens.reserve(surfaces.size());
    const auto& lex = tag_lexicon();
    for (const auto& s : surfaces) {
        TaggedToken tok;
        tok.original = s;
        tok.surface = fold_case(s);
        if (is_punct_token(s)) {
            tok.ptb_tag = punct_tag_for(s);
        } else if (auto it = lex.find(tok.surface); it != lex.end()) {
            tok.ptb_tag = it->second;
        } else if (looks_numeric(s)) {
            tok.ptb_tag = "CD";
        } else {
            tok.ptb_tag = suffix_tag(tok.surface, s);
        }
        tok.coarse = coarse_pos(tok.ptb_tag);
        stream.tokens.push_back(std::move(tok));
    }
    return stream;
}

TokenStream parse_pretagged(std::string_view content, std::string book_id) {
    TokenStream stream;
    stream.book_id = std::move(book_id);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    // a trailing newline ends the last line, it does not open an empty one
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        std::string_view line = content.substr(pos, eol == std::string_view::npos
                                                        ? content.size() - pos
                                                        : eol - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            // blank line marks a sentence break; windows must not cross it
            if (!stream.tokens.empty() && stream.tokens.back().ptb_tag != ".") {
                TaggedToken brk;
                brk.surface = ".";
                brk.original = ".";
                brk.ptb_tag = ".";
                brk.coarse = Coarse::Punct;
                stream.tokens.push_back(std::move(brk));
            }
        } else {
            auto tab = line.find('\t');
            if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size())
                throw ValidationError("pretagged input line " + std::to_string(line_no) +
                                      ": expected \"surface<TAB>tag\", got \"" +
                                      std::string(line) + "\"");
            TaggedToken tok;
            tok.original = std::string(line.substr(0, tab));
            tok.surface = fold_case(tok.original);
            tok.ptb_tag = std::string(line.substr(tab + 1));
            tok.coarse = coarse_pos(tok.ptb_tag);
            stream.tokens.push_back(std::move(tok));
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return stream;
}

// ------------------------------------------------------------- stop list ---

StopList::StopList(const std::vector<StopEntry>& entries) {
    for (const auto& e : entries) {
        if (e.coarse) by_coarse_.insert(e.surface + "/" + coarse_code(*e.coarse));
        else any_.insert(e.surface);
    }
}

StopList StopList::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open stop-word file: " + file.string());
    std::vector<StopEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        auto last = line.find_last_not_of(" \t");
        std::string entry = line.substr(first, last - first + 1);
        StopEntry e;
        auto slash = entry.rfind('/');
        if (slash != std::string::npos && slash + 2 == entry.size() && slash > 0) {
            auto coarse = coarse_from_code(entry[slash + 1]);
            if (!coarse)
                throw ValidationError("stop-word file line " + std::to_string(line_no) +
                                      ": unknown coarse code in \"" + entry + "\"");
            e.coarse = coarse;
            entry = entry.substr(0, slash);
        }
        e.surface = fold_case(entry);
        entries.push_back(std::move(e));
    }
    return StopList(entries);
}

bool StopList::matches(const TaggedToken& tok) const {
    if (tok.coarse == Coarse::Punct) return false;
    if (any_.count(tok.surface)) return true;
    return by_coarse_.count(tok.surface + "/" + coarse_code(tok.coarse)) > 0;
}

TokenStream remove_stopwords(const TokenStream& stream, const StopList& stops) {
    TokenStream out;
    out.book_id = stream.book_id;
    out.tokens.reserve(stream.tokens.size());
    for (const auto& tok : stream.tokens) {
        if (!stops.matches(tok)) out.tokens.push_back(tok);
    }
    return out;
}

}  // namespace sensoria

#include "sensoria/windows.hpp"

#include <algorithm>
#include <fstream>

#include "sensoria/error.hpp"

namespace sensoria {

std::unordered_set<std::string> WindowConfig::default_boundary_puncts() {
    return {".", ",", ":", ";", "!", "?", "``", "''", "\"", "'", "`",
            "“", "”", "‘", "’"};
}

std::vector<ContextWindow> extract_windows(const TokenStream& stream,
                                           const SeedLexicon& lexicon,
                                           const WindowConfig& config) {
    if (config.half_width <= 0) throw ValidationError("window half width must be positive");
    if (config.boundary_puncts.empty())
        throw ValidationError("window boundary punctuation set is empty");

    const auto& toks = stream.tokens;
    std::vector<ContextWindow> out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].coarse == Coarse::Punct) continue;
        auto sense = lexicon.sense_of(Word{toks[i].surface, toks[i].coarse});
        if (!sense) continue;

        ContextWindow win;
        win.sense = *sense;
        win.seed = Word{toks[i].surface, toks[i].coarse};
        win.book_id = stream.book_id;
        win.seed_position = i;

        std::size_t hw = static_cast<std::size_t>(config.half_width);
        std::vector<Word> left;
        for (std::size_t d = 1; d <= hw && d <= i; ++d) {
            const TaggedToken& tok = toks[i - d];
            if (config.boundary_puncts.count(tok.surface)) break;
            if (tok.coarse == Coarse::Punct) continue;
            left.push_back(Word{tok.surface, tok.coarse});
        }
        win.members.assign(left.rbegin(), left.rend());
        for (std::size_t d = 1; d <= hw && i + d < toks.size(); ++d) {
            const TaggedToken& tok = toks[i + d];
            if (config.boundary_puncts.count(tok.surface)) break;
            if (tok.coarse == Coarse::Punct) continue;
            win.members.push_back(Word{tok.surface, tok.coarse});
        }
        out.push_back(std::move(win));
    }
    return out;
}

WindowCounts count_occurrences(const std::vector<ContextWindow>& windows) {
    WindowCounts wc;
    std::unordered_set<std::string> seen;
    for (const ContextWindow& win : windows) {
        wc.window_totals[sense_index(win.sense)]++;
        seen.clear();
        for (const Word& w : win.members) {
            if (!seen.insert(word_key(w)).second) continue;
            wc.counts[w][sense_index(win.sense)]++;
        }
    }
    return wc;
}

void merge_counts(WindowCounts& into, const WindowCounts& from) {
    for (std::size_t s = 0; s < kSenseCount; ++s)
        into.window_totals[s] += from.window_totals[s];
    for (const auto& [word, per_sense] : from.counts) {
        auto& dst = into.counts[word];
        for (std::size_t s = 0; s < kSenseCount; ++s) dst[s] += per_sense[s];
    }
}

// ------------------------------------------------------------ checkpoint ---

namespace {

constexpr std::uint32_t kMagic = 0x53574e31;  // "SWN1"

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    put_u32(os, static_cast<std::uint32_t>(v));
    put_u32(os, static_cast<std::uint32_t>(v >> 32));
}

void put_str(std::ostream& os, const std::string& s) {
    put_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4] = {0, 0, 0, 0};  // short reads must not leak garbage sizes
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t get_u64(std::istream& is) {
    std::uint64_t lo = get_u32(is);
    std::uint64_t hi = get_u32(is);
    return lo | (hi << 32);
}

std::string get_str(std::istream& is) {
    std::uint32_t n = get_u32(is);
    std::string s(n, '\0');
    is.read(s.data(), static_cast<std::streamsize>(n));
    return s;
}

}  // namespace

void write_windows(const std::filesystem::path& file, int half_width,
                   const std::vector<ContextWindow>& windows) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw PipelineError("windows", "cannot write " + file.string());
    put_u32(os, kMagic);
    put_u32(os, static_cast<std::uint32_t>(half_width));
    put_u64(os, windows.size());
    for (const ContextWindow& w : windows) {
        os.put(static_cast<char>(sense_index(w.sense)));
        os.put(coarse_code(w.seed.coarse));
        put_str(os, w.seed.surface);
        put_str(os, w.book_id);
        put_u64(os, w.seed_position);
        put_u32(os, static_cast<std::uint32_t>(w.members.size()));
        for (const Word& m : w.members) {
            os.put(coarse_code(m.coarse));
            put_str(os, m.surface);
        }
    }
    if (!os) throw PipelineError("windows", "write failed: " + file.string());
}

WindowFile read_windows(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw PipelineError("windows", "cannot read " + file.string());
    if (get_u32(is) != kMagic)
        throw PipelineError("windows", "not a window checkpoint: " + file.string());
    WindowFile wf;
    wf.half_width = static_cast<int>(get_u32(is));
    std::uint64_t n = get_u64(is);
    wf.windows.reserve(n);
    for (std::uint64_t i = 0; i < n && is; ++i) {
        ContextWindow w;
        int sense_idx = is.get();
        auto coarse = coarse_from_code(static_cast<char>(is.get()));
        if (sense_idx < 0 || sense_idx >= static_cast<int>(kSenseCount) || !coarse)
            throw PipelineError("windows", "corrupt window checkpoint: " + file.string());
        w.sense = all_senses()[static_cast<std::size_t>(sense_idx)];
        w.seed.coarse = *coarse;
        w.seed.surface = get_str(is);
        w.book_id = get_str(is);
        w.seed_position = get_u64(is);
        std::uint32_t members = get_u32(is);
        w.members.reserve(members);
        for (std::uint32_t m = 0; m < members && is; ++m) {
            auto mc = coarse_from_code(static_cast<char>(is.get()));
            if (!mc) throw PipelineError("windows", "corrupt window checkpoint: " + file.string());
            w.members.push_back(Word{get_str(is), *mc});
        }
        wf.windows.push_back(std::move(w));
    }
    if (!is) throw PipelineError("windows", "truncated window checkpoint: " + file.string());
    return wf;
}

void dump_windows_tsv(const std::filesystem::path& file,
                      const std::vector<ContextWindow>& windows) {
    std::ofstream os(file);
    if (!os) throw PipelineError("windows", "cannot write " + file.string());
    os << "sense\tseed\tbook_id\tposition\tmembers\n";
    for (const ContextWindow& w : windows) {
        os << sense_name(w.sense) << '\t' << word_key(w.seed) << '\t' << w.book_id << '\t'
           << w.seed_position << '\t';
        for (std::size_t i = 0; i < w.members.size(); ++i) {
            if (i) os << ' ';
            os << word_key(w.members[i]);
        }
        os << '\n';
    }
}

}  // namespace sensoria

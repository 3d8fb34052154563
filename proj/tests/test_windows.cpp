#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "sensoria/error.hpp"
#include "sensoria/windows.hpp"
#include "oracles.hpp"

using namespace sensoria;
namespace fs = std::filesystem;

namespace {

TaggedToken tok(std::string surface, Coarse c) {
    TaggedToken t;
    t.surface = surface;
    t.original = std::move(surface);
    t.ptb_tag = (c == Coarse::Punct) ? t.surface : "XX";
    t.coarse = c;
    return t;
}

TokenStream stream_of(std::vector<TaggedToken> toks) {
    TokenStream s;
    s.book_id = "t1";
    s.tokens = std::move(toks);
    return s;
}

const SeedLexicon& tiny_lexicon() {
    static const SeedLexicon lex = [] {
        SeedSets sets;
        sets.seeds[sense_index(Sense::Sight)] = {Word{"gleam", Coarse::Noun}};
        sets.seeds[sense_index(Sense::Hearing)] = {Word{"hum", Coarse::Noun}};
        sets.seeds[sense_index(Sense::Touch)] = {Word{"stroke", Coarse::Verb}};
        sets.seeds[sense_index(Sense::Taste)] = {Word{"sip", Coarse::Verb}};
        sets.seeds[sense_index(Sense::Smell)] = {Word{"smell", Coarse::Verb}};
        return SeedLexicon(sets);
    }();
    return lex;
}

}  // namespace

TEST_CASE("comma truncates and the anchor is excluded") {
    TokenStream s = stream_of({tok("she", Coarse::Other), tok("could", Coarse::Other),
                               tok("smell", Coarse::Verb), tok("the", Coarse::Other),
                               tok("sweet", Coarse::Adj), tok("bread", Coarse::Noun),
                               tok(",", Coarse::Punct), tok("and", Coarse::Other),
                               tok("it", Coarse::Other), tok("was", Coarse::Verb),
                               tok("warm", Coarse::Adj), tok(".", Coarse::Punct)});
    WindowConfig cfg;
    cfg.half_width = 4;
    auto wins = extract_windows(s, tiny_lexicon(), cfg);
    REQUIRE(wins.size() == 1);
    CHECK(wins[0].sense == Sense::Smell);
    CHECK(wins[0].seed == Word{"smell", Coarse::Verb});
    CHECK(wins[0].seed_position == 2);
    CHECK(wins[0].book_id == "t1");
    CHECK(wins[0].members ==
          std::vector<Word>{{"she", Coarse::Other},
                            {"could", Coarse::Other},
                            {"the", Coarse::Other},
                            {"sweet", Coarse::Adj},
                            {"bread", Coarse::Noun}});
}

TEST_CASE("stream edges and seedless text") {
    WindowConfig cfg;
    cfg.half_width = 4;
    TokenStream start = stream_of({tok("smell", Coarse::Verb), tok("the", Coarse::Other),
                                   tok("bread", Coarse::Noun), tok(".", Coarse::Punct)});
    auto wins = extract_windows(start, tiny_lexicon(), cfg);
    REQUIRE(wins.size() == 1);
    CHECK(wins[0].members == std::vector<Word>{{"the", Coarse::Other},
                                               {"bread", Coarse::Noun}});

    TokenStream none = stream_of({tok("plain", Coarse::Adj), tok("text", Coarse::Noun)});
    CHECK(extract_windows(none, tiny_lexicon(), cfg).empty());
}

TEST_CASE("non-boundary punctuation occupies a position without joining") {
    // dash is not in the boundary set, so it burns one slot of the half width
    auto toks = {tok("far", Coarse::Adv),   tok("ash", Coarse::Noun),
                 tok("oak", Coarse::Noun),  tok("--", Coarse::Punct),
                 tok("elm", Coarse::Noun),  tok("smell", Coarse::Verb)};
    TokenStream s = stream_of(toks);

    WindowConfig cfg;
    cfg.half_width = 4;
    auto wide = extract_windows(s, tiny_lexicon(), cfg);
    REQUIRE(wide.size() == 1);
    CHECK(wide[0].members == std::vector<Word>{{"ash", Coarse::Noun},
                                               {"oak", Coarse::Noun},
                                               {"elm", Coarse::Noun}});

    cfg.half_width = 3;
    auto narrow = extract_windows(s, tiny_lexicon(), cfg);
    REQUIRE(narrow.size() == 1);
    CHECK(narrow[0].members == std::vector<Word>{{"oak", Coarse::Noun},
                                                 {"elm", Coarse::Noun}});
}

TEST_CASE("other occurrences of the anchor word are members") {
    TokenStream s = stream_of({tok("smell", Coarse::Verb), tok("smell", Coarse::Verb)});
    WindowConfig cfg;
    cfg.half_width = 4;
    auto wins = extract_windows(s, tiny_lexicon(), cfg);
    REQUIRE(wins.size() == 2);
    CHECK(wins[0].seed_position == 0);
    CHECK(wins[0].members == std::vector<Word>{{"smell", Coarse::Verb}});
    CHECK(wins[1].seed_position == 1);
    CHECK(wins[1].members == std::vector<Word>{{"smell", Coarse::Verb}});
}

TEST_CASE("nearby seeds of different senses each anchor a window") {
    TokenStream s = stream_of({tok("gleam", Coarse::Noun), tok("hum", Coarse::Noun)});
    WindowConfig cfg;
    cfg.half_width = 2;
    auto wins = extract_windows(s, tiny_lexicon(), cfg);
    REQUIRE(wins.size() == 2);
    CHECK(wins[0].sense == Sense::Sight);
    CHECK(wins[0].members == std::vector<Word>{{"hum", Coarse::Noun}});
    CHECK(wins[1].sense == Sense::Hearing);
    CHECK(wins[1].members == std::vector<Word>{{"gleam", Coarse::Noun}});
}

TEST_CASE("bad config is rejected") {
    TokenStream s = stream_of({tok("smell", Coarse::Verb)});
    WindowConfig cfg;
    cfg.half_width = 0;
    CHECK_THROWS_AS(extract_windows(s, tiny_lexicon(), cfg), ValidationError);
    cfg.half_width = 4;
    cfg.boundary_puncts.clear();
    CHECK_THROWS_AS(extract_windows(s, tiny_lexicon(), cfg), ValidationError);
}

namespace {

TokenStream random_stream(std::mt19937& rng, std::size_t len) {
    static const std::vector<TaggedToken> pool = {
        tok("smell", Coarse::Verb), tok("gleam", Coarse::Noun), tok("hum", Coarse::Noun),
        tok("sip", Coarse::Verb),   tok("ash", Coarse::Noun),   tok("oak", Coarse::Noun),
        tok("elm", Coarse::Noun),   tok("warm", Coarse::Adj),   tok("dim", Coarse::Adj),
        tok(",", Coarse::Punct),    tok(".", Coarse::Punct),    tok("--", Coarse::Punct),
        tok("smell", Coarse::Noun)};
    TokenStream s;
    s.book_id = "rand";
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::size_t i = 0; i < len; ++i) s.tokens.push_back(pool[pick(rng)]);
    return s;
}

}  // namespace

TEST_CASE("extraction agrees with an independent re-scan") {
    std::mt19937 rng(7101);
    std::uniform_int_distribution<std::size_t> len(0, 60);
    std::uniform_int_distribution<int> hw(1, 6);
    for (int trial = 0; trial < 50; ++trial) {
        TokenStream s = random_stream(rng, len(rng));
        WindowConfig cfg;
        cfg.half_width = hw(rng);
        auto got = extract_windows(s, tiny_lexicon(), cfg);
        auto want = oracle::naive_windows(s, tiny_lexicon(), cfg);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
    }
}

TEST_CASE("widening the half width only extends windows") {
    std::mt19937 rng(7102);
    for (int trial = 0; trial < 20; ++trial) {
        TokenStream s = random_stream(rng, 80);
        for (int hw = 1; hw < 8; ++hw) {
            WindowConfig small;
            small.half_width = hw;
            WindowConfig big;
            big.half_width = hw + 1;
            auto a = extract_windows(s, tiny_lexicon(), small);
            auto b = extract_windows(s, tiny_lexicon(), big);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(a[i].seed_position == b[i].seed_position);
                CHECK(a[i].members.size() <= b[i].members.size());
                if (a[i].members.empty()) continue;
                // the narrow member list sits contiguously inside the wide one
                auto it = std::search(b[i].members.begin(), b[i].members.end(),
                                      a[i].members.begin(), a[i].members.end());
                CHECK(it != b[i].members.end());
            }
        }
    }
}

TEST_CASE("window counts register distinct windows only") {
    auto win = [](Sense s, std::vector<Word> members) {
        ContextWindow w;
        w.sense = s;
        w.seed = Word{"seed", Coarse::Verb};
        w.book_id = "b";
        w.members = std::move(members);
        return w;
    };
    Word bread{"bread", Coarse::Noun};
    Word sweet{"sweet", Coarse::Adj};

    std::vector<ContextWindow> wins;
    wins.push_back(win(Sense::Smell, {bread, sweet, bread}));  // bread twice, one window
    wins.push_back(win(Sense::Smell, {bread}));
    wins.push_back(win(Sense::Smell, {sweet}));
    wins.push_back(win(Sense::Taste, {bread}));

    WindowCounts wc = count_occurrences(wins);
    CHECK(wc.count(bread, Sense::Smell) == 2);
    CHECK(wc.count(bread, Sense::Taste) == 1);
    CHECK(wc.count(sweet, Sense::Smell) == 2);
    CHECK(wc.count(sweet, Sense::Taste) == 0);
    CHECK(wc.window_totals[sense_index(Sense::Smell)] == 3);
    CHECK(wc.window_totals[sense_index(Sense::Taste)] == 1);
    CHECK(wc.window_totals[sense_index(Sense::Sight)] == 0);

    CHECK(count_occurrences({}).counts.empty());
}

TEST_CASE("merging split counts matches counting everything at once") {
    std::mt19937 rng(7103);
    TokenStream s = random_stream(rng, 200);
    WindowConfig cfg;
    cfg.half_width = 4;
    auto wins = extract_windows(s, tiny_lexicon(), cfg);
    REQUIRE(wins.size() > 4);

    WindowCounts whole = count_occurrences(wins);
    for (std::size_t split = 1; split < wins.size(); split += 3) {
        std::vector<ContextWindow> lo(wins.begin(), wins.begin() + split);
        std::vector<ContextWindow> hi(wins.begin() + split, wins.end());
        WindowCounts merged = count_occurrences(lo);
        merge_counts(merged, count_occurrences(hi));
        CHECK(merged.window_totals == whole.window_totals);
        REQUIRE(merged.counts.size() == whole.counts.size());
        for (const auto& [word, per_sense] : whole.counts) {
            auto it = merged.counts.find(word);
            REQUIRE(it != merged.counts.end());
            CHECK(it->second == per_sense);
        }
    }
}

TEST_CASE("checkpoint round trip is exact") {
    std::mt19937 rng(7104);
    TokenStream s = random_stream(rng, 120);
    WindowConfig cfg;
    cfg.half_width = 5;
    auto wins = extract_windows(s, tiny_lexicon(), cfg);
    REQUIRE_FALSE(wins.empty());

    fs::path dir = fs::temp_directory_path() / "sensoria-windows-test";
    fs::create_directories(dir);
    fs::path file = dir / "roundtrip.bin";
    write_windows(file, cfg.half_width, wins);

    WindowFile back = read_windows(file);
    CHECK(back.half_width == 5);
    REQUIRE(back.windows.size() == wins.size());
    for (std::size_t i = 0; i < wins.size(); ++i) CHECK(back.windows[i] == wins[i]);
}

TEST_CASE("bad checkpoints fail loudly") {
    fs::path dir = fs::temp_directory_path() / "sensoria-windows-test";
    fs::create_directories(dir);

    fs::path missing = dir / "absent.bin";
    fs::remove(missing);
    CHECK_THROWS_AS(read_windows(missing), PipelineError);

    fs::path garbage = dir / "garbage.bin";
    std::ofstream(garbage, std::ios::binary) << "not a checkpoint";
    CHECK_THROWS_WITH_AS(read_windows(garbage), doctest::Contains("not a window checkpoint"),
                         PipelineError);

    TokenStream s = stream_of({tok("smell", Coarse::Verb), tok("bread", Coarse::Noun)});
    WindowConfig cfg;
    cfg.half_width = 4;
    auto wins = extract_windows(s, tiny_lexicon(), cfg);
    fs::path whole = dir / "whole.bin";
    write_windows(whole, cfg.half_width, wins);
    fs::path cut = dir / "cut.bin";
    fs::copy_file(whole, cut, fs::copy_options::overwrite_existing);
    fs::resize_file(cut, fs::file_size(whole) - 5);
    CHECK_THROWS_AS(read_windows(cut), PipelineError);
}

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sensoria/error.hpp"
#include "sensoria/text.hpp"

using namespace sensoria;

namespace {

std::vector<std::string> toks(const std::string& s) { return tokenize(s); }

std::string tag_of(const TokenStream& stream, const std::string& surface) {
    for (const auto& t : stream.tokens)
        if (t.surface == surface) return t.ptb_tag;
    return "(absent)";
}

}  // namespace

TEST_CASE("tokenizer splits punctuation off words") {
    CHECK(toks("She could smell the sweet bread, and it was warm.") ==
          std::vector<std::string>{"She", "could", "smell", "the", "sweet", "bread", ",",
                                   "and", "it", "was", "warm", "."});
}

TEST_CASE("tokenizer converts straight quotes to tex style") {
    CHECK(toks("\"Ah,\" he said.") ==
          std::vector<std::string>{"``", "Ah", ",", "''", "he", "said", "."});
}

TEST_CASE("tokenizer splits contractions") {
    CHECK(toks("can't") == std::vector<std::string>{"ca", "n't"});
    CHECK(toks("cannot") == std::vector<std::string>{"can", "not"});
    CHECK(toks("she'll") == std::vector<std::string>{"she", "'ll"});
    CHECK(toks("it's") == std::vector<std::string>{"it", "'s"});
    CHECK(toks("I'm") == std::vector<std::string>{"I", "'m"});
    CHECK(toks("they've") == std::vector<std::string>{"they", "'ve"});
}

TEST_CASE("tokenizer keeps abbreviation periods and ellipses") {
    CHECK(toks("Mr. Smith went to St. Ives... or so.") ==
          std::vector<std::string>{"Mr.", "Smith", "went", "to", "St.", "Ives", "...", "or",
                                   "so", "."});
}

TEST_CASE("tokenizer separates dashes but keeps hyphenated compounds") {
    CHECK(toks("the rock—cold, grey—fell") ==
          std::vector<std::string>{"the", "rock", "—", "cold", ",", "grey", "—", "fell"});
    CHECK(toks("a well-worn path") == std::vector<std::string>{"a", "well-worn", "path"});
}

TEST_CASE("detokenize joins with single spaces") {
    CHECK(detokenize({"a", "b", "."}) == "a b .");
}

TEST_CASE("builtin tagger handles the frozen vocabulary cases") {
    auto stream =
        tag_pos_builtin(tokenize("She quickly found the blorptude under running water."), "b");
    CHECK(tag_of(stream, "quickly") == "RB");       // -ly adverb
    CHECK(tag_of(stream, "blorptude") == "NN");     // unknown word defaults to noun
    CHECK(tag_of(stream, "running") == "VBG");
    CHECK(tag_of(stream, "she") == "PRP");

    auto s2 = tag_pos_builtin(tokenize("The smell of bread felt warm; her eyes saw it."), "b");
    CHECK(tag_of(s2, "smell") == "NN");
    CHECK(tag_of(s2, "felt") == "VBD");
    CHECK(tag_of(s2, "warm") == "JJ");
    CHECK(tag_of(s2, "eyes") == "NNS");
    CHECK(tag_of(s2, "saw") == "VBD");
    CHECK(tag_of(s2, ";") == ":");
    CHECK(tag_of(s2, ".") == ".");

    auto s3 = tag_pos_builtin(tokenize("Harwick rang twice."), "b");
    CHECK(tag_of(s3, "harwick") == "NNP");  // unknown capitalized word
    CHECK(tag_of(s3, "rang") == "VBD");
}

TEST_CASE("coarse mapping from ptb tags") {
    CHECK(coarse_pos("NN") == Coarse::Noun);
    CHECK(coarse_pos("NNS") == Coarse::Noun);
    CHECK(coarse_pos("NNP") == Coarse::Noun);
    CHECK(coarse_pos("VB") == Coarse::Verb);
    CHECK(coarse_pos("VBD") == Coarse::Verb);
    CHECK(coarse_pos("JJ") == Coarse::Adj);
    CHECK(coarse_pos("JJR") == Coarse::Adj);
    CHECK(coarse_pos("RB") == Coarse::Adv);
    CHECK(coarse_pos("DT") == Coarse::Other);
    CHECK(coarse_pos(".") == Coarse::Punct);
    CHECK(coarse_pos("``") == Coarse::Punct);
}

TEST_CASE("pretagged input passes tags through unchanged") {
    auto stream = parse_pretagged("The\tDT\nsmell\tVB\nlingered\tVBD\n.\t.\n", "b1");
    REQUIRE(stream.tokens.size() == 4);
    CHECK(stream.book_id == "b1");
    CHECK(stream.tokens[1].surface == "smell");
    CHECK(stream.tokens[1].ptb_tag == "VB");
    CHECK(stream.tokens[1].coarse == Coarse::Verb);
    CHECK(stream.tokens[2].original == "lingered");
}

TEST_CASE("pretagged blank line becomes a sentence break") {
    auto stream = parse_pretagged("warm\tJJ\n\n\nsoft\tJJ\n", "b");
    REQUIRE(stream.tokens.size() == 3);
    CHECK(stream.tokens[1].surface == ".");
    CHECK(stream.tokens[1].coarse == Coarse::Punct);
    CHECK(stream.tokens[2].surface == "soft");
}

TEST_CASE("pretagged rejects malformed lines with their number") {
    CHECK_THROWS_WITH_AS(parse_pretagged("good\tNN\nbadline\n", "b"),
                         doctest::Contains("line 2"), ValidationError);
    CHECK_THROWS_AS(parse_pretagged("\tNN\n", "b"), ValidationError);
}

TEST_CASE("stop list matches by surface and optional part of speech") {
    StopList stops({{"the", std::nullopt}, {"sound", Coarse::Noun}});
    TaggedToken the{"the", "The", "DT", Coarse::Other};
    TaggedToken sound_n{"sound", "sound", "NN", Coarse::Noun};
    TaggedToken sound_v{"sound", "sound", "VB", Coarse::Verb};
    TaggedToken comma{",", ",", ",", Coarse::Punct};
    CHECK(stops.matches(the));
    CHECK(stops.matches(sound_n));
    CHECK_FALSE(stops.matches(sound_v));
    CHECK_FALSE(stops.matches(comma));  // punctuation is never stopped
}

TEST_CASE("stop list loads comments and pinned pos entries") {
    auto dir = std::filesystem::temp_directory_path() / "sensoria-text-test";
    std::filesystem::create_directories(dir);
    auto file = dir / "stops.txt";
    {
        std::ofstream os(file);
        os << "# a comment\n\nthe\nsound/n\n";
    }
    StopList stops = StopList::load(file);
    CHECK(stops.size() == 2);
    CHECK(stops.matches(TaggedToken{"sound", "sound", "NN", Coarse::Noun}));
    CHECK_FALSE(stops.matches(TaggedToken{"sound", "sound", "VB", Coarse::Verb}));

    {
        std::ofstream os(file);
        os << "bad/q\n";
    }
    CHECK_THROWS_WITH_AS(StopList::load(file), doctest::Contains("line 1"), ValidationError);
}

TEST_CASE("stopword removal keeps punctuation and order") {
    StopList stops({{"the", std::nullopt}});
    TokenStream stream;
    stream.book_id = "b";
    stream.tokens = {TaggedToken{"the", "The", "DT", Coarse::Other},
                     TaggedToken{"smell", "smell", "NN", Coarse::Noun},
                     TaggedToken{",", ",", ",", Coarse::Punct},
                     TaggedToken{"the", "the", "DT", Coarse::Other},
                     TaggedToken{"bread", "bread", "NN", Coarse::Noun}};
    auto filtered = remove_stopwords(stream, stops);
    REQUIRE(filtered.tokens.size() == 3);
    CHECK(filtered.tokens[0].surface == "smell");
    CHECK(filtered.tokens[1].surface == ",");
    CHECK(filtered.tokens[2].surface == "bread");
}

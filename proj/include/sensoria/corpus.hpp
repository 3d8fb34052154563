#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sensoria {

struct BookRecord {
    std::string book_id;
    std::string title;
    std::string author;                      // sentinel strings kept verbatim
    std::optional<int> author_birth_year;    // negative = BCE, range [-1000, 2100]
    std::vector<std::string> subjects;
    std::string language;                    // case-folded primary language
    std::filesystem::path text_path;         // resolved against the text root
};

struct CorpusManifest {
    std::vector<BookRecord> books;
    std::string source_label;
    std::size_t missing_text_count = 0;   // records whose text file was absent
    std::size_t skipped_records = 0;      // missing or duplicate book ids
    std::vector<std::string> warnings;
};

// Reads a JSONL (one object per line) or JSON-array metadata file. Fields:
// Num/book_id, Title, Author, "Author Birth", Subject, Language, gd-path;
// scalar and list values are both accepted. Records without an id or with a
// duplicate id are skipped with a warning; records whose text file is missing
// are counted but not fatal.
CorpusManifest load_manifest(const std::filesystem::path& metadata_file,
                             const std::filesystem::path& text_root);

// Keeps books whose language matches (case-insensitive, with en/eng/english
// treated as the same language) and where at least one subject contains
// "fiction" case-insensitively. Idempotent.
CorpusManifest filter_fiction(const CorpusManifest& manifest, std::string_view language);

// name -> count, descending by count, ties ascending by name
using FrequencyTable = std::vector<std::pair<std::string, std::size_t>>;

struct AuthorGenreStats {
    FrequencyTable authors;
    FrequencyTable genres;
};

// Top-k tables. Each book counts once toward its author and once per
// distinct subject string.
AuthorGenreStats author_genre_stats(const CorpusManifest& manifest, std::size_t k);

struct BirthHistogram {
    int floor_year = 1500;
    int bin_width = 10;
    std::size_t pre_floor_count = 0;          // all years < floor_year, one bin
    std::optional<int> pre_floor_min;         // earliest year in that bin
    std::vector<std::pair<int, std::size_t>> bins;  // (bin_start, count), contiguous
    std::size_t missing_count = 0;            // books without a birth year
};

// Bins author birth years; years below floor_year collapse into one leftmost
// bin. Sum of all bin counts plus missing_count equals the manifest size.
BirthHistogram birth_year_histogram(const CorpusManifest& manifest, int bin_width,
                                    int floor_year);

// Reads a book's text and strips recognizable boilerplate framing.
std::string load_book_text(const BookRecord& book);

// Drops everything up to a "*** START OF ... PROJECT GUTENBERG ..." marker
// line and everything from the matching END marker on. Text without markers
// is returned unchanged.
std::string strip_boilerplate(const std::string& raw);

}  // namespace sensoria

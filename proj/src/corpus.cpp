#include "sensoria/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sensoria/error.hpp"
#include "sensoria/types.hpp"

namespace sensoria {
namespace {

using nlohmann::json;

std::vector<std::string> as_string_list(const json& v) {
    std::vector<std::string> out;
    auto push = [&](const json& x) {
        if (x.is_string()) out.push_back(x.get<std::string>());
        else if (x.is_number_integer()) out.push_back(std::to_string(x.get<long long>()));
        else if (x.is_number()) out.push_back(std::to_string(x.get<double>()));
    };
    if (v.is_array())
        for (const auto& x : v) push(x);
    else
        push(v);
    return out;
}

std::string first_string(const json& obj, std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
        if (auto it = obj.find(key); it != obj.end()) {
            auto list = as_string_list(*it);
            if (!list.empty()) return list.front();
        }
    }
    return {};
}

std::string joined_string(const json& obj, const char* key, const char* sep) {
    auto it = obj.find(key);
    if (it == obj.end()) return {};
    auto list = as_string_list(*it);
    std::string out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) out += sep;
        out += list[i];
    }
    return out;
}

std::optional<int> parse_birth_year(const json& obj) {
    auto it = obj.find("Author Birth");
    if (it == obj.end()) it = obj.find("author_birth_year");
    if (it == obj.end()) return std::nullopt;
    for (const auto& s : as_string_list(*it)) {
        try {
            std::size_t used = 0;
            int year = std::stoi(s, &used);
            if (used == s.size()) return year;
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

std::vector<json> read_records(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw PipelineError("ingest", "cannot open metadata file: " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();

    auto first = content.find_first_not_of(" \t\r\n");
    std::vector<json> records;
    if (first == std::string::npos) return records;

    if (content[first] == '[') {
        json arr = json::parse(content, nullptr, true, true);
        if (!arr.is_array())
            throw ValidationError("metadata file is not a record array: " + file.string());
        for (auto& rec : arr) records.push_back(std::move(rec));
        return records;
    }

    std::istringstream lines(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        try {
            records.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ValidationError("metadata file " + file.string() + " line " +
                                  std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

bool language_matches(std::string_view book_lang, std::string_view wanted) {
    std::string a = fold_case(book_lang);
    std::string b = fold_case(wanted);
    if (a == b) return true;
    auto is_english = [](const std::string& s) {
        return s == "en" || s == "eng" || s == "english";
    };
    return is_english(a) && is_english(b);
}

FrequencyTable ranked(std::map<std::string, std::size_t> counts, std::size_t k) {
    FrequencyTable rows(counts.begin(), counts.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });
    if (rows.size() > k) rows.resize(k);
    return rows;
}

}  // namespace

CorpusManifest load_manifest(const std::filesystem::path& metadata_file,
                             const std::filesystem::path& text_root) {
    CorpusManifest manifest;
    manifest.source_label = metadata_file.stem().string();

    std::set<std::string> seen_ids;
    for (const json& rec : read_records(metadata_file)) {
        if (!rec.is_object()) {
            manifest.skipped_records++;
            manifest.warnings.push_back("skipped non-object metadata record");
            continue;
        }
        std::string id = first_string(rec, {"Num", "book_id", "id"});
        if (id.empty()) {
            manifest.skipped_records++;
            manifest.warnings.push_back("skipped record without a book id");
            continue;
        }
        if (!seen_ids.insert(id).second) {
            manifest.skipped_records++;
            manifest.warnings.push_back("skipped duplicate book id " + id);
            continue;
        }

        BookRecord book;
        book.book_id = std::move(id);
        book.title = first_string(rec, {"Title", "title"});
        book.author = joined_string(rec, "Author", "; ");
        if (book.author.empty()) book.author = joined_string(rec, "author", "; ");
        if (book.author.empty()) book.author = "(unknown)";
        book.author_birth_year = parse_birth_year(rec);
        if (book.author_birth_year &&
            (*book.author_birth_year < -1000 || *book.author_birth_year > 2100)) {
            manifest.warnings.push_back("book " + book.book_id + ": birth year " +
                                        std::to_string(*book.author_birth_year) +
                                        " out of range, treated as unknown");
            book.author_birth_year.reset();
        }
        if (auto it = rec.find("Subject"); it != rec.end()) book.subjects = as_string_list(*it);
        else if (auto it2 = rec.find("subjects"); it2 != rec.end())
            book.subjects = as_string_list(*it2);
        book.language = fold_case(first_string(rec, {"Language", "language"}));

        std::string rel = first_string(rec, {"gd-path", "text_path", "path"});
        if (rel.empty()) {
            manifest.missing_text_count++;
            continue;
        }
        book.text_path = text_root / rel;
        if (!std::filesystem::exists(book.text_path)) {
            manifest.missing_text_count++;
            continue;
        }
        manifest.books.push_back(std::move(book));
    }
    return manifest;
}

CorpusManifest filter_fiction(const CorpusManifest& manifest, std::string_view language) {
    CorpusManifest out;
    out.source_label = manifest.source_label;
    for (const BookRecord& book : manifest.books) {
        if (!language_matches(book.language, language)) continue;
        bool fiction = std::any_of(book.subjects.begin(), book.subjects.end(),
                                   [](const std::string& s) {
                                       return fold_case(s).find("fiction") != std::string::npos;
                                   });
        if (fiction) out.books.push_back(book);
    }
    return out;
}

AuthorGenreStats author_genre_stats(const CorpusManifest& manifest, std::size_t k) {
    std::map<std::string, std::size_t> author_counts;
    std::map<std::string, std::size_t> genre_counts;
    for (const BookRecord& book : manifest.books) {
        author_counts[book.author]++;
        std::set<std::string> distinct(book.subjects.begin(), book.subjects.end());
        for (const auto& subject : distinct) genre_counts[subject]++;
    }
    return AuthorGenreStats{ranked(std::move(author_counts), k),
                            ranked(std::move(genre_counts), k)};
}

BirthHistogram birth_year_histogram(const CorpusManifest& manifest, int bin_width,
                                    int floor_year) {
    if (bin_width <= 0) throw ValidationError("histogram bin width must be positive");
    BirthHistogram h;
    h.floor_year = floor_year;
    h.bin_width = bin_width;

    std::map<int, std::size_t> binned;
    for (const BookRecord& book : manifest.books) {
        if (!book.author_birth_year) {
            h.missing_count++;
            continue;
        }
        int year = *book.author_birth_year;
        if (year < floor_year) {
            h.pre_floor_count++;
            if (!h.pre_floor_min || year < *h.pre_floor_min) h.pre_floor_min = year;
            continue;
        }
        int start = floor_year + ((year - floor_year) / bin_width) * bin_width;
        binned[start]++;
    }
    if (!binned.empty()) {
        int lo = binned.begin()->first;
        int hi = binned.rbegin()->first;
        for (int start = lo; start <= hi; start += bin_width)
            h.bins.emplace_back(start, binned.count(start) ? binned[start] : 0);
    }
    return h;
}

std::string load_book_text(const BookRecord& book) {
    std::ifstream in(book.text_path, std::ios::binary);
    if (!in)
        throw PipelineError("ingest", "cannot read book text: " + book.text_path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return strip_boilerplate(buf.str());
}

std::string strip_boilerplate(const std::string& raw) {
    std::vector<std::pair<std::size_t, std::size_t>> line_spans;  // (begin, end)
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t eol = raw.find('\n', pos);
        std::size_t end = (eol == std::string::npos) ? raw.size() : eol;
        line_spans.emplace_back(pos, end);
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }

    auto marker = [&](std::size_t idx, std::string_view kind) {
        std::string line = fold_case(std::string_view(raw).substr(
            line_spans[idx].first, line_spans[idx].second - line_spans[idx].first));
        return line.find("project gutenberg") != std::string::npos &&
               line.find("***") != std::string::npos &&
               line.find(kind) != std::string::npos;
    };

    std::optional<std::size_t> start_line, end_line;
    for (std::size_t i = 0; i < line_spans.size(); ++i) {
        if (!start_line && marker(i, "start")) start_line = i;
        if (marker(i, "end")) {
            end_line = i;
            break;
        }
    }

    std::size_t begin = 0, end = raw.size();
    if (start_line && *start_line + 1 < line_spans.size())
        begin = line_spans[*start_line + 1].first;
    if (end_line && (!start_line || *end_line > *start_line)) end = line_spans[*end_line].first;
    if (begin >= end) return raw;
    return raw.substr(begin, end - begin);
}

}  // namespace sensoria

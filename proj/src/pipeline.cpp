#include "sensoria/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "sensoria/corpus.hpp"
#include "sensoria/csv.hpp"
#include "sensoria/error.hpp"
#include "sensoria/geometry.hpp"
#include "sensoria/svg.hpp"

namespace sensoria {
namespace {

using nlohmann::json;

// ------------------------------------------------------------- run config ---

const char* kFilteredManifest = "manifest_filtered.jsonl";
const char* kWindowsBin = "windows.bin";
const char* kEmbeddingBin = "embedding.bin";

std::vector<std::string> sense_columns(const std::string& prefix) {
    std::vector<std::string> cols;
    for (Sense s : all_senses()) cols.push_back(prefix + std::string(sense_name(s)));
    return cols;
}

}  // namespace

void RunConfig::validate() const {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw ValidationError(msg);
    };
    need(!out_dir.empty(), "output directory must be set");
    need(half_width > 0, "half_width must be positive");
    need(cutoff >= 1, "cutoff must be >= 1");
    need(top_k >= 1, "top_k must be >= 1");
    need(dims >= 2, "dims must be >= 2");
    need(min_count >= 1, "min_count must be >= 1");
    need(epochs >= 1, "epochs must be >= 1");
    need(negative_samples >= 1, "negative_samples must be >= 1");
    need(initial_lr > 0, "initial_lr must be positive");
    need(final_lr > 0, "final_lr must be positive");
    need(sampling_exponent >= 0, "sampling_exponent must be non-negative");
    need(n_components >= 2 && n_components <= 4, "n_components must be between 2 and 4");
    need(radius > 0, "radius must be positive");
    need(label_top_n >= 0, "label_top_n must be non-negative");
    need(bin_width > 0, "bin_width must be positive");
    need(threads >= 1, "threads must be >= 1");
    need(tagger == "builtin" || tagger == "pretagged",
         "tagger must be 'builtin' or 'pretagged', got '" + tagger + "'");
    if (subword) {
        need(subword_min_n >= 1, "subword_min_n must be >= 1");
        need(subword_max_n >= subword_min_n, "subword_max_n must be >= subword_min_n");
        need(subword_buckets >= 1, "subword_buckets must be >= 1");
    }
}

WindowConfig RunConfig::window_config() const {
    WindowConfig wc;
    wc.half_width = static_cast<int>(half_width);
    return wc;
}

DescriptorConfig RunConfig::descriptor_config() const {
    DescriptorConfig dc;
    dc.cutoff = cutoff;
    dc.top_k = static_cast<std::size_t>(top_k);
    return dc;
}

EmbeddingConfig RunConfig::embedding_config() const {
    EmbeddingConfig ec;
    ec.dims = static_cast<int>(dims);
    ec.min_count = min_count;
    ec.epochs = static_cast<int>(epochs);
    ec.negative_samples = static_cast<int>(negative_samples);
    ec.initial_lr = initial_lr;
    ec.final_lr = final_lr;
    ec.sampling_exponent = sampling_exponent;
    ec.rng_seed = static_cast<std::uint64_t>(seed);
    ec.threads = static_cast<int>(threads);
    if (subword) {
        SubwordConfig sc;
        sc.min_n = static_cast<int>(subword_min_n);
        sc.max_n = static_cast<int>(subword_max_n);
        sc.buckets = static_cast<std::uint64_t>(subword_buckets);
        ec.subword = sc;
    }
    return ec;
}

AnalysisConfig RunConfig::analysis_config() const {
    AnalysisConfig ac;
    ac.radius = radius;
    ac.top_k = static_cast<std::size_t>(top_k);
    return ac;
}

namespace {

// ---------------------------------------------------------- run metadata ---

json load_metadata(const RunConfig& cfg) {
    std::ifstream in(cfg.out("run_metadata.json"));
    if (in) {
        try {
            json meta;
            in >> meta;
            if (meta.is_object()) return meta;
        } catch (const json::exception&) {
        }
    }
    return json::object();
}

void update_metadata(const RunConfig& cfg, const std::string& stage, double seconds,
                     json stage_info) {
    json meta = load_metadata(cfg);
    meta["seed"] = cfg.seed;
    meta["threads"] = cfg.threads;
    meta["deterministic"] = cfg.threads == 1;
    meta["tagger_backend"] = cfg.tagger;
    meta["language"] = cfg.language;
    meta["decisions"] = {
        {"stopword_removal", "before window extraction"},
        {"descriptor_frequency", "per-sense context-window count"},
        {"analysis_space", "pca score space"},
        {"pca_input", "distance matrix rows"},
        {"negative_sampling_exponent", cfg.sampling_exponent},
        {"operating_point_tested",
         tested_operating_point(static_cast<int>(cfg.half_width), cfg.cutoff)},
    };
    stage_info["seconds"] = seconds;
    meta["stages"][stage] = std::move(stage_info);

    std::ofstream os(cfg.out("run_metadata.json"));
    if (!os) throw PipelineError(stage, "cannot write run metadata");
    os << meta.dump(2) << '\n';
}

// ------------------------------------------------------------ checkpoints ---

void write_filtered_manifest(const std::filesystem::path& file, const CorpusManifest& m) {
    std::ofstream os(file);
    if (!os) throw PipelineError("ingest", "cannot write " + file.string());
    for (const BookRecord& b : m.books) {
        json j;
        j["book_id"] = b.book_id;
        j["title"] = b.title;
        j["author"] = b.author;
        if (b.author_birth_year) j["birth_year"] = *b.author_birth_year;
        else j["birth_year"] = nullptr;
        j["subjects"] = b.subjects;
        j["language"] = b.language;
        j["text_path"] = b.text_path.string();
        os << j.dump() << '\n';
    }
}

std::vector<BookRecord> read_filtered_manifest(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw PipelineError("windows", "missing " + file.string() + "; run the ingest stage");
    std::vector<BookRecord> books;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw PipelineError("windows", "corrupt manifest checkpoint line " +
                                               std::to_string(line_no) + ": " + e.what());
        }
        BookRecord b;
        b.book_id = j.value("book_id", "");
        b.title = j.value("title", "");
        b.author = j.value("author", "");
        if (j.contains("birth_year") && j["birth_year"].is_number_integer())
            b.author_birth_year = j["birth_year"].get<int>();
        if (j.contains("subjects"))
            for (const auto& s : j["subjects"]) b.subjects.push_back(s.get<std::string>());
        b.language = j.value("language", "");
        b.text_path = j.value("text_path", "");
        books.push_back(std::move(b));
    }
    return books;
}

// topk.csv: sense,rank,surface,coarse,count
void write_topk(const RunConfig& cfg,
                const std::array<std::vector<DescriptorRow>, kSenseCount>& ranked) {
    csv::Writer out(cfg.out("topk.csv"));
    out.row({"sense", "rank", "surface", "coarse", "count"});
    for (Sense s : all_senses()) {
        const auto& rows = ranked[sense_index(s)];
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out.row({std::string(sense_name(s)), csv::format_int(static_cast<long long>(i + 1)),
                     rows[i].word.surface, std::string(1, coarse_code(rows[i].word.coarse)),
                     csv::format_int(rows[i].counts[sense_index(s)])});
        }
    }
}

struct TopkData {
    std::array<std::vector<Word>, kSenseCount> sets;
    std::unordered_map<Word, std::int64_t, WordHash> max_count;
};

TopkData read_topk(const RunConfig& cfg, const std::string& stage) {
    auto path = cfg.out("topk.csv");
    if (!std::filesystem::exists(path))
        throw PipelineError(stage, "missing " + path.string() + "; run the descriptors stage");
    auto rows = csv::read(path);
    TopkData data;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 5)
            throw PipelineError(stage, "corrupt topk.csv row " + std::to_string(i + 1));
        auto sense = sense_from_name(r[0]);
        auto coarse = r[3].size() == 1 ? coarse_from_code(r[3][0]) : std::nullopt;
        if (!sense || !coarse)
            throw PipelineError(stage, "corrupt topk.csv row " + std::to_string(i + 1));
        Word w{r[2], *coarse};
        data.sets[sense_index(*sense)].push_back(w);
        std::int64_t count = std::stoll(r[4]);
        auto& best = data.max_count[w];
        best = std::max(best, count);
    }
    return data;
}

WindowFile read_windows_checkpoint(const RunConfig& cfg, const std::string& stage) {
    auto path = cfg.out(kWindowsBin);
    if (!std::filesystem::exists(path))
        throw PipelineError(stage, "missing " + path.string() + "; run the windows stage");
    return read_windows(path);
}

// ---------------------------------------------------------------- stages ---

json warnings_json(const std::vector<std::string>& warnings) {
    json arr = json::array();
    for (const auto& w : warnings) arr.push_back(w);
    return arr;
}

}  // namespace

void stage_ingest(const RunConfig& cfg) {
    if (cfg.manifest.empty()) throw ValidationError("manifest path must be set");
    CorpusManifest loaded = load_manifest(cfg.manifest, cfg.text_root);
    CorpusManifest fiction = filter_fiction(loaded, cfg.language);

    write_filtered_manifest(cfg.out(kFilteredManifest), fiction);

    auto stats = author_genre_stats(fiction, 20);
    {
        csv::Writer out(cfg.out("authors.csv"));
        out.row({"rank", "name", "frequency"});
        for (std::size_t i = 0; i < stats.authors.size(); ++i)
            out.row({csv::format_int(static_cast<long long>(i + 1)), stats.authors[i].first,
                     csv::format_int(static_cast<long long>(stats.authors[i].second))});
    }
    {
        csv::Writer out(cfg.out("genres.csv"));
        out.row({"rank", "name", "frequency"});
        for (std::size_t i = 0; i < stats.genres.size(); ++i)
            out.row({csv::format_int(static_cast<long long>(i + 1)), stats.genres[i].first,
                     csv::format_int(static_cast<long long>(stats.genres[i].second))});
    }

    auto hist = birth_year_histogram(fiction, static_cast<int>(cfg.bin_width),
                                     static_cast<int>(cfg.floor_year));
    {
        csv::Writer out(cfg.out("birth_years.csv"));
        out.row({"bin_start", "bin_end", "count"});
        if (hist.pre_floor_count > 0)
            out.row({csv::format_int(*hist.pre_floor_min), csv::format_int(hist.floor_year),
                     csv::format_int(static_cast<long long>(hist.pre_floor_count))});
        for (const auto& [start, count] : hist.bins)
            out.row({csv::format_int(start), csv::format_int(start + hist.bin_width),
                     csv::format_int(static_cast<long long>(count))});
    }

    json info;
    info["manifest_records"] =
        loaded.books.size() + loaded.skipped_records + loaded.missing_text_count;
    info["loaded_books"] = loaded.books.size();
    info["fiction_books"] = fiction.books.size();
    info["missing_text_files"] = loaded.missing_text_count;
    info["skipped_records"] = loaded.skipped_records;
    info["birth_year_missing"] = hist.missing_count;
    info["warnings"] = warnings_json(loaded.warnings);
    update_metadata(cfg, "ingest", 0.0, info);  // seconds patched by run_stage
}

namespace {

TokenStream book_stream(const BookRecord& book, const RunConfig& cfg) {
    std::string raw = load_book_text(book);
    if (cfg.tagger == "pretagged") return parse_pretagged(raw, book.book_id);
    return tag_pos_builtin(tokenize(raw), book.book_id);
}

}  // namespace

void stage_windows(const RunConfig& cfg) {
    if (cfg.seeds_dir.empty()) throw ValidationError("seeds directory must be set");
    if (cfg.stopwords_file.empty()) throw ValidationError("stop-word file must be set");

    auto books = read_filtered_manifest(cfg.out(kFilteredManifest));
    SeedSets seeds = load_seeds(cfg.seeds_dir);
    SeedLexicon lexicon(seeds);
    StopList stops = StopList::load(cfg.stopwords_file);
    WindowConfig wcfg = cfg.window_config();

    std::vector<std::vector<ContextWindow>> per_book(books.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= books.size()) break;
            {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error) break;
            }
            try {
                TokenStream filtered = remove_stopwords(book_stream(books[i], cfg), stops);
                per_book[i] = extract_windows(filtered, lexicon, wcfg);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                break;
            }
        }
    };

    std::size_t worker_count =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.threads),
                              std::max<std::size_t>(books.size(), 1));
    if (worker_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < worker_count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // merge in book order so thread count never changes the output
    std::vector<ContextWindow> windows;
    for (auto& chunk : per_book) {
        windows.insert(windows.end(), std::make_move_iterator(chunk.begin()),
                       std::make_move_iterator(chunk.end()));
        chunk.clear();
    }

    write_windows(cfg.out(kWindowsBin), static_cast<int>(cfg.half_width), windows);
    if (cfg.dump_windows) dump_windows_tsv(cfg.out("windows_dump.tsv"), windows);

    WindowCounts counts = count_occurrences(windows);
    {
        csv::Writer out(cfg.out("window_totals.csv"));
        out.row({"sense", "windows"});
        for (Sense s : all_senses())
            out.row({std::string(sense_name(s)),
                     csv::format_int(counts.window_totals[sense_index(s)])});
    }
    {
        std::vector<const Word*> order;
        order.reserve(counts.counts.size());
        for (const auto& [word, _] : counts.counts) order.push_back(&word);
        std::sort(order.begin(), order.end(),
                  [](const Word* a, const Word* b) { return word_key(*a) < word_key(*b); });
        csv::Writer out(cfg.out("counts.csv"));
        std::vector<std::string> header{"surface", "coarse"};
        for (const auto& c : sense_columns("count_")) header.push_back(c);
        out.row(header);
        for (const Word* w : order) {
            const auto& per_sense = counts.counts.at(*w);
            std::vector<std::string> row{w->surface, std::string(1, coarse_code(w->coarse))};
            for (Sense s : all_senses())
                row.push_back(csv::format_int(per_sense[sense_index(s)]));
            out.row(row);
        }
    }

    json info;
    info["books"] = books.size();
    info["windows"] = windows.size();
    for (Sense s : all_senses())
        info["windows_per_sense"][std::string(sense_name(s))] =
            counts.window_totals[sense_index(s)];
    json sizes;
    for (Sense s : all_senses())
        sizes[std::string(sense_name(s))] = lexicon.sense_size(s);
    info["expanded_seed_forms"] = sizes;
    info["stopword_entries"] = stops.size();
    info["warnings"] = warnings_json(lexicon.warnings());
    update_metadata(cfg, "windows", 0.0, info);
}

void stage_descriptors(const RunConfig& cfg) {
    WindowFile wf = read_windows_checkpoint(cfg, "descriptors");
    WindowCounts counts = count_occurrences(wf.windows);
    DescriptorTable table = identify_descriptors(counts, cfg.descriptor_config());

    {
        csv::Writer out(cfg.out("descriptors.csv"));
        std::vector<std::string> header{"surface", "coarse"};
        for (const auto& c : sense_columns("count_")) header.push_back(c);
        for (const auto& c : sense_columns("pass_")) header.push_back(c);
        out.row(header);
        for (const DescriptorRow& row : table.rows) {
            std::vector<std::string> fields{row.word.surface,
                                            std::string(1, coarse_code(row.word.coarse))};
            for (Sense s : all_senses())
                fields.push_back(csv::format_int(row.counts[sense_index(s)]));
            for (Sense s : all_senses())
                fields.push_back(row.passes_sense(s) ? "1" : "0");
            out.row(fields);
        }
    }

    std::array<std::vector<DescriptorRow>, kSenseCount> ranked;
    for (Sense s : all_senses())
        ranked[sense_index(s)] = top_k(table, s, static_cast<std::size_t>(cfg.top_k));
    write_topk(cfg, ranked);

    {
        csv::Writer out(cfg.out("pos_distribution.csv"));
        out.row({"sense", "n", "v", "a", "r"});
        for (Sense s : all_senses()) {
            PosHistogram hist = pos_distribution(ranked[sense_index(s)]);
            out.row({std::string(sense_name(s)),
                     csv::format_int(static_cast<long long>(hist[0])),
                     csv::format_int(static_cast<long long>(hist[1])),
                     csv::format_int(static_cast<long long>(hist[2])),
                     csv::format_int(static_cast<long long>(hist[3]))});
        }
    }

    json info;
    info["descriptors"] = table.rows.size();
    info["cutoff"] = cfg.cutoff;
    info["half_width"] = wf.half_width;
    info["tested_operating_point"] = tested_operating_point(wf.half_width, cfg.cutoff);
    for (Sense s : all_senses())
        info["top_k_sizes"][std::string(sense_name(s))] = ranked[sense_index(s)].size();
    update_metadata(cfg, "descriptors", 0.0, info);
}

void stage_train(const RunConfig& cfg) {
    WindowFile wf = read_windows_checkpoint(cfg, "train");
    EmbeddingModel model = train_cbow(wf.windows, cfg.embedding_config());
    save_model(cfg.out(kEmbeddingBin), model);

    json info;
    info["vocabulary"] = model.vocab.size();
    info["epoch_mean_loss"] = model.epoch_losses;
    info["subword"] = cfg.subword;
    info["deterministic"] = cfg.threads == 1;
    update_metadata(cfg, "train", 0.0, info);
}

void stage_geometry(const RunConfig& cfg) {
    TopkData topk = read_topk(cfg, "geometry");
    auto model_path = cfg.out(kEmbeddingBin);
    if (!std::filesystem::exists(model_path))
        throw PipelineError("geometry", "missing " + model_path.string() +
                                            "; run the train stage");
    EmbeddingModel model = load_model(model_path);

    // union of the per-sense top-K lists, with membership masks
    std::map<std::string, std::pair<Word, SenseMask>> by_key;
    for (Sense s : all_senses()) {
        for (const Word& w : topk.sets[sense_index(s)]) {
            auto [it, _] = by_key.try_emplace(word_key(w), w, SenseMask{0});
            it->second.second = static_cast<SenseMask>(it->second.second | sense_bit(s));
        }
    }
    std::vector<Word> labels;
    std::vector<SenseMask> masks;
    for (const auto& [key, entry] : by_key) {
        labels.push_back(entry.first);
        masks.push_back(entry.second);
    }
    if (labels.size() < 3)
        throw ValidationError("geometry needs at least 3 descriptors, found " +
                              std::to_string(labels.size()) +
                              "; lower the cutoff or enlarge the corpus");

    Eigen::MatrixXd vectors(static_cast<Eigen::Index>(labels.size()), model.input.cols());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto vec = model.vector(labels[i]);
        if (!vec)
            throw ValidationError("descriptor '" + word_key(labels[i]) +
                                  "' has no embedding vector; it fell below min_count");
        vectors.row(static_cast<Eigen::Index>(i)) = vec->transpose();
    }

    Eigen::MatrixXd dist = pearson_distance_matrix(vectors);
    {
        csv::Writer out(cfg.out("distance_matrix.csv"));
        std::vector<std::string> header{"label"};
        for (const Word& w : labels) header.push_back(word_key(w));
        out.row(header);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            std::vector<std::string> row{word_key(labels[i])};
            for (std::size_t j = 0; j < labels.size(); ++j)
                row.push_back(csv::format_double(dist(static_cast<Eigen::Index>(i),
                                                      static_cast<Eigen::Index>(j))));
            out.row(row);
        }
    }

    auto pca = pca_fit(dist, static_cast<Eigen::Index>(cfg.n_components));
    {
        csv::Writer out(cfg.out("explained_variance.csv"));
        out.row({"component", "explained_variance", "ratio"});
        for (Eigen::Index k = 0; k < pca.explained_variance.size(); ++k)
            out.row({"pc" + std::to_string(k + 1),
                     csv::format_double(pca.explained_variance(k)),
                     csv::format_double(pca.explained_variance_ratio(k))});
    }
    {
        csv::Writer out(cfg.out("pca_scores.csv"));
        std::vector<std::string> header{"label", "sense"};
        for (Eigen::Index k = 0; k < pca.scores.cols(); ++k)
            header.push_back("pc" + std::to_string(k + 1));
        out.row(header);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            for (Sense s : all_senses()) {
                if (!mask_has(masks[i], s)) continue;
                std::vector<std::string> row{word_key(labels[i]), std::string(sense_name(s))};
                for (Eigen::Index k = 0; k < pca.scores.cols(); ++k)
                    row.push_back(
                        csv::format_double(pca.scores(static_cast<Eigen::Index>(i), k)));
                out.row(row);
            }
        }
    }

    json info;
    info["points"] = labels.size();
    json ratios = json::array();
    for (Eigen::Index k = 0; k < pca.explained_variance_ratio.size(); ++k)
        ratios.push_back(pca.explained_variance_ratio(k));
    info["explained_variance_ratio"] = ratios;
    update_metadata(cfg, "geometry", 0.0, info);
}

namespace {

// pca_scores.csv rows share coordinates across a label's member senses
ScoredPoints read_scores(const RunConfig& cfg, const std::string& stage) {
    auto path = cfg.out("pca_scores.csv");
    if (!std::filesystem::exists(path))
        throw PipelineError(stage, "missing " + path.string() + "; run the geometry stage");
    auto rows = csv::read(path);
    if (rows.size() < 2) throw PipelineError(stage, "pca_scores.csv has no data rows");
    const std::size_t dims = rows[0].size() - 2;

    ScoredPoints points;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::vector<double>> coords;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != dims + 2)
            throw PipelineError(stage, "corrupt pca_scores.csv row " + std::to_string(i + 1));
        auto word = word_from_key(r[0]);
        auto sense = sense_from_name(r[1]);
        if (!word || !sense)
            throw PipelineError(stage, "corrupt pca_scores.csv row " + std::to_string(i + 1));
        auto [it, fresh] = index.try_emplace(r[0], points.words.size());
        if (fresh) {
            points.words.push_back(*word);
            points.senses.push_back(0);
            std::vector<double> c;
            for (std::size_t k = 0; k < dims; ++k) c.push_back(std::stod(r[2 + k]));
            coords.push_back(std::move(c));
        }
        points.senses[it->second] =
            static_cast<SenseMask>(points.senses[it->second] | sense_bit(*sense));
    }
    points.scores.resize(static_cast<Eigen::Index>(coords.size()),
                         static_cast<Eigen::Index>(dims));
    for (std::size_t i = 0; i < coords.size(); ++i)
        for (std::size_t k = 0; k < dims; ++k)
            points.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                coords[i][k];
    return points;
}

std::string pair_label(Sense a, Sense b) {
    return std::string(sense_name(a)) + "-" + std::string(sense_name(b));
}

}  // namespace

void stage_analyze(const RunConfig& cfg) {
    ScoredPoints points = read_scores(cfg, "analyze");
    WindowFile wf = read_windows_checkpoint(cfg, "analyze");
    WindowCounts counts = count_occurrences(wf.windows);
    TopkData topk = read_topk(cfg, "analyze");

    auto stats = avg_pairwise_distance(points);
    {
        csv::Writer out(cfg.out("pair_distances.csv"));
        out.row({"sense_a", "sense_b", "same_sense", "mean_distance"});
        for (const SensePairStat& st : stats)
            out.row({std::string(sense_name(st.a)), std::string(sense_name(st.b)),
                     st.same_sense ? "1" : "0",
                     st.value ? csv::format_double(*st.value) : ""});
    }

    auto pairs = radius_pairs(points, cfg.radius);
    {
        csv::Writer out(cfg.out("radius_pairs.csv"));
        out.row({"sense_a", "sense_b", "same_sense", "count"});
        for (const SensePairCount& pc : pairs)
            out.row({std::string(sense_name(pc.a)), std::string(sense_name(pc.b)),
                     pc.same_sense ? "1" : "0", csv::format_int(pc.count)});
    }

    std::vector<std::string> overlap_warnings;
    auto overlap = multi_sense_overlap(counts, topk.sets, &overlap_warnings);
    {
        csv::Writer out(cfg.out("overlap.csv"));
        std::vector<std::string> header{"label", "senses"};
        for (const auto& c : sense_columns("freq_")) header.push_back(c);
        out.row(header);
        for (const OverlapRow& row : overlap) {
            std::vector<std::string> fields{word_key(row.word), mask_to_string(row.senses)};
            for (Sense s : all_senses()) {
                const auto& v = row.normalized[sense_index(s)];
                fields.push_back(v ? csv::format_double(*v) : "");
            }
            out.row(fields);
        }
    }

    json info;
    info["points"] = points.size();
    info["radius"] = cfg.radius;
    info["overlap_descriptors"] = overlap.size();
    info["warnings"] = warnings_json(overlap_warnings);
    update_metadata(cfg, "analyze", 0.0, info);
}

namespace {

std::vector<std::vector<std::string>> read_required_csv(const RunConfig& cfg,
                                                        const std::string& name) {
    auto path = cfg.out(name);
    if (!std::filesystem::exists(path))
        throw PipelineError("report", "missing " + path.string() +
                                          "; run the earlier stages first");
    return csv::read(path);
}

void report_birth_years(const RunConfig& cfg) {
    auto rows = read_required_csv(cfg, "birth_years.csv");
    svg::Bars chart;
    chart.title = "Author birth decades";
    chart.y_label = "books";
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 3) continue;
        long long start = std::stoll(rows[i][0]);
        long long end = std::stoll(rows[i][1]);
        std::string label = (end - start) != cfg.bin_width
                                ? "<" + std::to_string(end)
                                : std::to_string(start);
        chart.bars.push_back({label, static_cast<double>(std::stoll(rows[i][2])), "#5b7fa6"});
    }
    svg::write_bars(cfg.out("birth_years.svg"), chart);
}

void report_pos_distribution(const RunConfig& cfg) {
    auto rows = read_required_csv(cfg, "pos_distribution.csv");
    svg::GroupedBars chart;
    chart.title = "Top descriptor part-of-speech mix";
    chart.y_label = "descriptors";
    chart.series = {"noun", "verb", "adjective", "adverb"};
    chart.series_colors = {"#4c72b0", "#dd8452", "#55a868", "#c44e52"};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 5) continue;
        chart.groups.push_back(rows[i][0]);
        chart.values.push_back({static_cast<double>(std::stoll(rows[i][1])),
                                static_cast<double>(std::stoll(rows[i][2])),
                                static_cast<double>(std::stoll(rows[i][3])),
                                static_cast<double>(std::stoll(rows[i][4]))});
    }
    svg::write_grouped_bars(cfg.out("pos_distribution.svg"), chart);
}

void report_pair_bars(const RunConfig& cfg, const std::string& input, const std::string& output,
                      const std::string& title, const std::string& y_label,
                      const std::string& same_color, const std::string& cross_color) {
    auto rows = read_required_csv(cfg, input);
    svg::Bars chart;
    chart.title = title;
    chart.y_label = y_label;
    chart.legend = {{"same sense", same_color}, {"cross sense", cross_color}};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 4 || rows[i][3].empty()) continue;
        bool same = rows[i][2] == "1";
        auto a = sense_from_name(rows[i][0]);
        auto b = sense_from_name(rows[i][1]);
        if (!a || !b) continue;
        std::string label = same ? std::string(sense_name(*a)) : pair_label(*a, *b);
        chart.bars.push_back({label, std::stod(rows[i][3]), same ? same_color : cross_color});
    }
    svg::write_bars(cfg.out(output), chart);
}

void report_overlap(const RunConfig& cfg, const SenseColorScheme& colors) {
    auto rows = read_required_csv(cfg, "overlap.csv");
    svg::GroupedBars chart;
    chart.title = "Multi-sense descriptors, normalized window frequency";
    chart.y_label = "windows containing word / sense total";
    for (Sense s : all_senses()) {
        chart.series.push_back(std::string(sense_name(s)));
        chart.series_colors.push_back(colors.color(s));
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 2 + kSenseCount) continue;
        chart.groups.push_back(rows[i][0]);
        std::vector<double> vals;
        for (std::size_t s = 0; s < kSenseCount; ++s) {
            const std::string& cell = rows[i][2 + s];
            vals.push_back(cell.empty() ? 0.0 : std::stod(cell));
        }
        chart.values.push_back(std::move(vals));
    }
    svg::write_grouped_bars(cfg.out("overlap.svg"), chart);
}

void report_scatter(const RunConfig& cfg, const SenseColorScheme& colors) {
    auto rows = read_required_csv(cfg, "pca_scores.csv");
    auto variance = read_required_csv(cfg, "explained_variance.csv");
    TopkData topk = read_topk(cfg, "report");

    auto axis_label = [&](std::size_t component) {
        std::string name = "PC" + std::to_string(component + 1);
        std::size_t row = component + 1;
        if (row < variance.size() && variance[row].size() == 3) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.1f", std::stod(variance[row][2]) * 100.0);
            return name + " (" + std::string(buf) + "%)";
        }
        return name;
    };

    // deterministic per-sense offset so multi-sense markers stay visible
    double xlo = 0, xhi = 0;
    bool first = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() < 4) continue;
        double x = std::stod(rows[i][2]);
        if (first || x < xlo) xlo = x;
        if (first || x > xhi) xhi = x;
        first = false;
    }
    double offset_step = (xhi - xlo) * 0.012;
    if (offset_step <= 0) offset_step = 0.01;

    std::unordered_map<std::string, int> seen_per_label;
    std::vector<std::pair<std::string, std::int64_t>> ranked(topk.max_count.size());
    {
        std::size_t i = 0;
        for (const auto& [word, count] : topk.max_count)
            ranked[i++] = {word_key(word), count};
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (ranked.size() > static_cast<std::size_t>(cfg.label_top_n))
            ranked.resize(static_cast<std::size_t>(cfg.label_top_n));
    }
    std::unordered_set<std::string> labeled;
    for (const auto& [key, _] : ranked) labeled.insert(key);

    svg::Scatter chart;
    chart.title = "Descriptors in the first two components";
    chart.x_label = axis_label(0);
    chart.y_label = axis_label(1);
    for (Sense s : all_senses())
        chart.legend.emplace_back(std::string(sense_name(s)), colors.color(s));

    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() < 4) continue;
        auto sense = sense_from_name(rows[i][1]);
        if (!sense) continue;
        int slot = seen_per_label[rows[i][0]]++;
        svg::Scatter::Point p;
        p.x = std::stod(rows[i][2]) + offset_step * slot;
        p.y = std::stod(rows[i][3]);
        p.color = colors.color(*sense);
        p.label = rows[i][0];
        p.show_label = slot == 0 && labeled.count(rows[i][0]) > 0;
        chart.points.push_back(std::move(p));
    }
    svg::write_scatter(cfg.out("pca_scatter.svg"), chart);
}

}  // namespace

void stage_report(const RunConfig& cfg) {
    SenseColorScheme colors = SenseColorScheme::defaults();
    report_birth_years(cfg);
    report_pos_distribution(cfg);
    report_pair_bars(cfg, "pair_distances.csv", "pair_distances.svg",
                     "Mean pairwise distance by sense pair", "mean distance", "#d02090",
                     "#9a9a9a");
    report_pair_bars(cfg, "radius_pairs.csv", "radius_pairs.svg",
                     "Neighboring descriptor pairs within radius", "pairs", "#d62728",
                     "#2a9d8f");
    report_overlap(cfg, colors);
    report_scatter(cfg, colors);

    json info;
    info["figures"] = {"birth_years.svg", "pos_distribution.svg", "pair_distances.svg",
                       "radius_pairs.svg", "overlap.svg", "pca_scatter.svg"};
    update_metadata(cfg, "report", 0.0, info);
}

void run_stage(const RunConfig& cfg, const std::string& stage_name) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);

    using StageFn = void (*)(const RunConfig&);
    static const std::vector<std::pair<std::string, StageFn>> stages = {
        {"ingest", stage_ingest},       {"windows", stage_windows},
        {"descriptors", stage_descriptors}, {"train", stage_train},
        {"geometry", stage_geometry},   {"analyze", stage_analyze},
        {"report", stage_report},
    };

    std::vector<std::pair<std::string, StageFn>> to_run;
    if (stage_name == "run-all") {
        to_run = stages;
    } else {
        for (const auto& entry : stages)
            if (entry.first == stage_name) to_run.push_back(entry);
        if (to_run.empty())
            throw ValidationError("unknown stage: " + stage_name);
    }

    std::error_code ec;
    std::filesystem::remove(cfg.out("FAILED"), ec);

    for (const auto& [name, fn] : to_run) {
        auto started = std::chrono::steady_clock::now();
        try {
            fn(cfg);
        } catch (const std::exception& e) {
            std::ofstream marker(cfg.out("FAILED"));
            marker << name << ": " << e.what() << '\n';
            throw;
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                       started)
                             .count();
        // patch the stage timing over the info the stage already wrote
        json meta = load_metadata(cfg);
        if (meta.contains("stages") && meta["stages"].contains(name)) {
            meta["stages"][name]["seconds"] = seconds;
            std::ofstream os(cfg.out("run_metadata.json"));
            os << meta.dump(2) << '\n';
        }
    }
}

}  // namespace sensoria

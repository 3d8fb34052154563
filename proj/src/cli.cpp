#include "sensoria/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sensoria/error.hpp"
#include "sensoria/pipeline.hpp"

namespace sensoria::cli {
namespace {

const char* kStageNames[] = {"ingest",   "windows", "descriptors", "train",
                             "geometry", "analyze", "report",      "run-all"};

struct Wiring {
    CLI::Option* dims = nullptr;
    CLI::Option* min_count = nullptr;
    CLI::Option* epochs = nullptr;
};

Wiring wire(CLI::App& app, RunConfig& cfg) {
    app.set_config("--config", "", "read options from an INI file");
    app.allow_config_extras(false);
    app.require_subcommand(1);
    app.get_formatter()->column_width(30);

    app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed for training")->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker thread count")->capture_default_str();

    app.add_option("--manifest", cfg.manifest, "corpus metadata file (JSON lines or array)");
    app.add_option("--text-root", cfg.text_root, "directory that text paths resolve against");
    app.add_option("--seeds", cfg.seeds_dir, "directory with one seed list per sense");
    app.add_option("--stopwords", cfg.stopwords_file, "stop-word list file");
    app.add_option("--language", cfg.language, "language filter for ingest")
        ->capture_default_str();
    app.add_option("--tagger", cfg.tagger, "part-of-speech backend: builtin or pretagged")
        ->capture_default_str();

    app.add_option("--half-width", cfg.half_width, "context window half-width in tokens")
        ->capture_default_str();
    app.add_option("--cutoff", cfg.cutoff, "window count a descriptor needs per sense")
        ->capture_default_str();
    app.add_option("--top-k", cfg.top_k, "descriptor list length per sense")
        ->capture_default_str();

    Wiring w;
    w.dims = app.add_option("--dims", cfg.dims, "embedding dimensions")->capture_default_str();
    w.min_count =
        app.add_option("--min-count", cfg.min_count, "minimum token frequency in vocabulary")
            ->capture_default_str();
    w.epochs = app.add_option("--epochs", cfg.epochs, "training epochs")->capture_default_str();
    app.add_option("--negative", cfg.negative_samples, "negative samples per target")
        ->capture_default_str();
    app.add_option("--initial-lr", cfg.initial_lr, "starting learning rate")
        ->capture_default_str();
    app.add_option("--final-lr", cfg.final_lr, "ending learning rate")->capture_default_str();
    app.add_option("--sampling-exponent", cfg.sampling_exponent,
                   "negative sampling frequency exponent")
        ->capture_default_str();
    app.add_flag("--subword", cfg.subword, "compose vectors from character n-grams");
    app.add_option("--subword-min-n", cfg.subword_min_n, "shortest character n-gram")
        ->capture_default_str();
    app.add_option("--subword-max-n", cfg.subword_max_n, "longest character n-gram")
        ->capture_default_str();
    app.add_option("--subword-buckets", cfg.subword_buckets, "hashed n-gram table size")
        ->capture_default_str();

    app.add_option("--components", cfg.n_components, "principal components to keep (2-4)")
        ->capture_default_str();
    app.add_option("--radius", cfg.radius, "neighbor radius in score space")
        ->capture_default_str();
    app.add_option("--label-top-n", cfg.label_top_n, "labels drawn on the scatter plot")
        ->capture_default_str();
    app.add_option("--bin-width", cfg.bin_width, "birth-year histogram bin width")
        ->capture_default_str();
    app.add_option("--floor-year", cfg.floor_year, "years before this collapse into one bin")
        ->capture_default_str();
    app.add_flag("--dump-windows", cfg.dump_windows, "also write windows as TSV");

    for (const char* name : kStageNames) {
        auto* sub = app.add_subcommand(name, "");
        sub->fallthrough();
    }
    app.get_subcommand("ingest")->description(
        "load the manifest, filter fiction, write corpus summaries");
    app.get_subcommand("windows")->description("extract sense context windows from the corpus");
    app.get_subcommand("descriptors")
        ->description("count window frequencies and rank descriptor lists");
    app.get_subcommand("train")->description("train the context embedding on the windows");
    app.get_subcommand("geometry")
        ->description("distance matrix and principal components for top descriptors");
    app.get_subcommand("analyze")
        ->description("sense-pair distances, neighbor counts, multi-sense overlap");
    app.get_subcommand("report")->description("render the SVG figures from stage outputs");
    app.get_subcommand("run-all")->description("run every stage in order");
    return w;
}

}  // namespace

int run(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"sensoria: how fiction shares descriptive words across the five senses"};
    Wiring opts = wire(app, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        // the subword extension defaults to a smaller model unless overridden
        if (cfg.subword) {
            if (opts.dims->count() == 0) {
                cfg.dims = 100;
                opts.dims->default_str("100");
            }
            if (opts.min_count->count() == 0) {
                cfg.min_count = 5;
                opts.min_count->default_str("5");
            }
            if (opts.epochs->count() == 0) {
                cfg.epochs = 5;
                opts.epochs->default_str("5");
            }
        }
        cfg.validate();

        std::filesystem::create_directories(cfg.out_dir);
        {
            std::ofstream resolved(cfg.out("run_config.ini"));
            if (!resolved)
                throw PipelineError("config", "cannot write resolved configuration");
            resolved << app.config_to_str(true, true);
        }

        run_stage(cfg, app.get_subcommands().front()->get_name());
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const PipelineError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("sensoria");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace sensoria::cli

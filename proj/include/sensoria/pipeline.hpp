#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "sensoria/analyses.hpp"
#include "sensoria/descriptors.hpp"
#include "sensoria/embedding.hpp"
#include "sensoria/windows.hpp"

namespace sensoria {

// Resolved settings for one run. Written beside the outputs so a run can be
// reproduced from its own directory.
struct RunConfig {
    // inputs
    std::string manifest;
    std::string text_root;
    std::string seeds_dir;
    std::string stopwords_file;
    std::string out_dir = "out";
    std::string language = "en";
    std::string tagger = "builtin";  // or "pretagged": text files are token/tag TSVs

    // windows
    std::int64_t half_width = 4;

    // descriptors
    std::int64_t cutoff = 30;
    std::int64_t top_k = 200;

    // embedding
    std::int64_t dims = 200;
    std::int64_t min_count = 10;
    std::int64_t epochs = 20;
    std::int64_t negative_samples = 5;
    double initial_lr = 0.025;
    double final_lr = 1e-4;
    double sampling_exponent = 0.75;
    bool subword = false;
    std::int64_t subword_min_n = 3;
    std::int64_t subword_max_n = 6;
    std::int64_t subword_buckets = 200000;

    // geometry and analyses
    std::int64_t n_components = 2;
    double radius = 30.0;

    // figures
    std::int64_t label_top_n = 12;
    std::int64_t bin_width = 10;
    std::int64_t floor_year = 1500;
    bool dump_windows = false;

    // run
    std::int64_t seed = 42;
    std::int64_t threads = 1;

    void validate() const;

    WindowConfig window_config() const;
    DescriptorConfig descriptor_config() const;
    EmbeddingConfig embedding_config() const;
    AnalysisConfig analysis_config() const;

    std::filesystem::path out(const std::string& name) const {
        return std::filesystem::path(out_dir) / name;
    }
};

// Stage entry points. Each stage reads its inputs from earlier stages'
// checkpoint files in out_dir and writes its own outputs there. A fatal
// error leaves a FAILED marker naming the stage beside any partial outputs.
void stage_ingest(const RunConfig& cfg);
void stage_windows(const RunConfig& cfg);
void stage_descriptors(const RunConfig& cfg);
void stage_train(const RunConfig& cfg);
void stage_geometry(const RunConfig& cfg);
void stage_analyze(const RunConfig& cfg);
void stage_report(const RunConfig& cfg);

// Runs one named stage (or "run-all") with timing, metadata updates, and
// the failure marker contract.
void run_stage(const RunConfig& cfg, const std::string& stage_name);

}  // namespace sensoria

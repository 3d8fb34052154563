#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "sensoria/types.hpp"
#include "sensoria/windows.hpp"

namespace sensoria {

struct SubwordConfig {
    int min_n = 3;
    int max_n = 6;
    std::uint64_t buckets = 200000;

    bool operator==(const SubwordConfig&) const = default;
};

struct EmbeddingConfig {
    int dims = 200;
    std::int64_t min_count = 10;
    int epochs = 20;
    int negative_samples = 5;
    double initial_lr = 0.025;
    double final_lr = 1e-4;
    double sampling_exponent = 0.75;
    std::uint64_t rng_seed = 42;
    int threads = 1;                      // >1 relaxes determinism
    std::optional<SubwordConfig> subword;

    bool operator==(const EmbeddingConfig&) const = default;
};

struct Vocabulary {
    std::vector<Word> words;           // descending frequency, lexicographic ties
    std::vector<std::int64_t> freqs;   // aligned with words
    std::unordered_map<std::string, std::int32_t> index;  // word key -> id

    std::int32_t id_of(const Word& w) const {
        auto it = index.find(word_key(w));
        return it == index.end() ? -1 : it->second;
    }
    std::size_t size() const { return words.size(); }
};

// Counts every token a window contributes for training (the anchor seed and
// all members); keeps words with total count >= min_count.
Vocabulary build_vocab(const std::vector<ContextWindow>& windows, std::int64_t min_count);

struct EmbeddingModel {
    Vocabulary vocab;
    EmbeddingConfig config;
    Eigen::MatrixXd input;           // |V| x dims, the word vectors
    Eigen::MatrixXd output;          // |V| x dims
    Eigen::MatrixXd subword_input;   // buckets x dims when subword is enabled
    std::vector<double> epoch_losses;

    // In-vocab lookup; with subword enabled, out-of-vocabulary words compose
    // from character n-gram vectors. Otherwise an explicit not-found.
    std::optional<Eigen::VectorXd> vector(const Word& w) const;
};

// One training instance per window: each in-vocabulary token becomes the
// predicted target with the remaining tokens as averaged context.
// Single-threaded runs are bitwise deterministic for a fixed seed.
EmbeddingModel train_cbow(const std::vector<ContextWindow>& windows,
                          const EmbeddingConfig& config);

// bit-exact round trip
void save_model(const std::filesystem::path& file, const EmbeddingModel& model);
EmbeddingModel load_model(const std::filesystem::path& file);

// --- pieces shared with the gradient tests -------------------------------

struct CbowItem {
    std::vector<std::int32_t> context;  // vocabulary ids, nonempty
    std::int32_t target = 0;
    std::vector<std::int32_t> negatives;
};

// Negative-sampling loss summed over items:
//   L = -log s(h.o_t) - sum_neg log s(-h.o_n),  h = mean of context vectors
double cbow_batch_loss(const Eigen::MatrixXd& input, const Eigen::MatrixXd& output,
                       const std::vector<CbowItem>& batch);

// Analytic gradients of cbow_batch_loss with respect to both matrices.
void cbow_batch_gradients(const Eigen::MatrixXd& input, const Eigen::MatrixXd& output,
                          const std::vector<CbowItem>& batch, Eigen::MatrixXd& grad_input,
                          Eigen::MatrixXd& grad_output);

// character n-gram bucket ids for a surface wrapped in '<' '>' markers
std::vector<std::uint64_t> subword_buckets(const std::string& surface,
                                           const SubwordConfig& cfg);

// deterministic helpers, fixed across platforms
double uniform_unit(std::mt19937_64& rng);  // [0, 1) with 53-bit resolution
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace sensoria

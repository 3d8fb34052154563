#include "sensoria/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include "sensoria/error.hpp"

namespace sensoria {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + exp(x)) without overflow
double softplus(double x) {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Cumulative-weight sampler over freq^exponent; binary search keeps draws
// identical across platforms.
class NegativeSampler {
  public:
    NegativeSampler(const std::vector<std::int64_t>& freqs, double exponent) {
        cumulative_.reserve(freqs.size());
        double acc = 0.0;
        for (std::int64_t f : freqs) {
            acc += std::pow(static_cast<double>(f), exponent);
            cumulative_.push_back(acc);
        }
    }

    std::int32_t draw(std::mt19937_64& rng) const {
        double u = uniform_unit(rng) * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) --it;
        return static_cast<std::int32_t>(it - cumulative_.begin());
    }

  private:
    std::vector<double> cumulative_;
};

struct TrainingWindow {
    std::vector<std::int32_t> ids;  // anchor first, then members, vocab-filtered
};

std::vector<TrainingWindow> prepare_windows(const std::vector<ContextWindow>& windows,
                                            const Vocabulary& vocab) {
    std::vector<TrainingWindow> prepared;
    prepared.reserve(windows.size());
    for (const ContextWindow& win : windows) {
        TrainingWindow tw;
        if (auto id = vocab.id_of(win.seed); id >= 0) tw.ids.push_back(id);
        for (const Word& m : win.members)
            if (auto id = vocab.id_of(m); id >= 0) tw.ids.push_back(id);
        if (tw.ids.size() >= 2) prepared.push_back(std::move(tw));
    }
    return prepared;
}

// n-gram bucket ids per vocabulary word, empty lists when subword is off
std::vector<std::vector<std::uint64_t>> vocab_buckets(const Vocabulary& vocab,
                                                      const std::optional<SubwordConfig>& sub) {
    std::vector<std::vector<std::uint64_t>> out(vocab.size());
    if (!sub) return out;
    for (std::size_t i = 0; i < vocab.size(); ++i)
        out[i] = subword_buckets(vocab.words[i].surface, *sub);
    return out;
}

struct ItemResult {
    double loss = 0.0;
};

// One CBOW step: predict ids[t] from the rest of the window, update in place.
// grad_scale carries the learning rate; pass 0 to only evaluate the loss.
ItemResult cbow_step(Eigen::MatrixXd& input, Eigen::MatrixXd& output,
                     Eigen::MatrixXd& subword, const std::vector<std::vector<std::uint64_t>>& buckets,
                     const std::vector<std::int32_t>& ids, std::size_t t,
                     const NegativeSampler& sampler, std::mt19937_64& rng, int negative_samples,
                     double lr, bool use_subword) {
    const std::int32_t target = ids[t];
    const std::size_t context_size = ids.size() - 1;
    const auto dims = input.cols();

    Eigen::VectorXd h = Eigen::VectorXd::Zero(dims);
    for (std::size_t c = 0; c < ids.size(); ++c) {
        if (c == t) continue;
        if (use_subword) {
            const auto& bs = buckets[static_cast<std::size_t>(ids[c])];
            Eigen::VectorXd rep = input.row(ids[c]);
            for (std::uint64_t b : bs) rep += subword.row(static_cast<Eigen::Index>(b));
            h += rep / static_cast<double>(1 + bs.size());
        } else {
            h += input.row(ids[c]);
        }
    }
    h /= static_cast<double>(context_size);

    ItemResult res;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dims);

    auto push_pair = [&](std::int32_t word, double label) {
        double s = h.dot(output.row(word));
        res.loss += label > 0 ? softplus(-s) : softplus(s);
        double g = sigmoid(s) - label;
        e += g * output.row(word).transpose();
        if (lr != 0.0) output.row(word) -= (lr * g) * h.transpose();
    };

    push_pair(target, 1.0);
    for (int k = 0; k < negative_samples; ++k) {
        std::int32_t neg = sampler.draw(rng);
        if (neg == target) continue;
        push_pair(neg, 0.0);
    }

    if (lr != 0.0) {
        Eigen::VectorXd delta = (lr / static_cast<double>(context_size)) * e;
        for (std::size_t c = 0; c < ids.size(); ++c) {
            if (c == t) continue;
            if (use_subword) {
                const auto& bs = buckets[static_cast<std::size_t>(ids[c])];
                Eigen::VectorXd part = delta / static_cast<double>(1 + bs.size());
                input.row(ids[c]) -= part.transpose();
                for (std::uint64_t b : bs)
                    subword.row(static_cast<Eigen::Index>(b)) -= part.transpose();
            } else {
                input.row(ids[c]) -= delta.transpose();
            }
        }
    }
    return res;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::uint64_t> subword_buckets(const std::string& surface,
                                           const SubwordConfig& cfg) {
    std::string wrapped = "<" + surface + ">";
    std::vector<std::uint64_t> out;
    for (int n = cfg.min_n; n <= cfg.max_n; ++n) {
        if (static_cast<std::size_t>(n) > wrapped.size()) break;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= wrapped.size(); ++i)
            out.push_back(fnv1a(std::string_view(wrapped).substr(i, n)) % cfg.buckets);
    }
    return out;
}

Vocabulary build_vocab(const std::vector<ContextWindow>& windows, std::int64_t min_count) {
    std::unordered_map<Word, std::int64_t, WordHash> counts;
    for (const ContextWindow& win : windows) {
        counts[win.seed]++;
        for (const Word& m : win.members) counts[m]++;
    }

    std::vector<std::pair<Word, std::int64_t>> kept;
    for (const auto& [word, count] : counts)
        if (count >= min_count) kept.emplace_back(word, count);
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return word_key(a.first) < word_key(b.first);
    });

    Vocabulary vocab;
    vocab.words.reserve(kept.size());
    vocab.freqs.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        vocab.words.push_back(kept[i].first);
        vocab.freqs.push_back(kept[i].second);
        vocab.index.emplace(word_key(kept[i].first), static_cast<std::int32_t>(i));
    }
    if (vocab.words.empty())
        throw ValidationError("embedding vocabulary is empty; lower min_count or widen windows");
    return vocab;
}

double cbow_batch_loss(const Eigen::MatrixXd& input, const Eigen::MatrixXd& output,
                       const std::vector<CbowItem>& batch) {
    double loss = 0.0;
    for (const CbowItem& item : batch) {
        Eigen::VectorXd h = Eigen::VectorXd::Zero(input.cols());
        for (auto c : item.context) h += input.row(c);
        h /= static_cast<double>(item.context.size());
        loss += softplus(-h.dot(output.row(item.target)));
        for (auto n : item.negatives) loss += softplus(h.dot(output.row(n)));
    }
    return loss;
}

void cbow_batch_gradients(const Eigen::MatrixXd& input, const Eigen::MatrixXd& output,
                          const std::vector<CbowItem>& batch, Eigen::MatrixXd& grad_input,
                          Eigen::MatrixXd& grad_output) {
    grad_input = Eigen::MatrixXd::Zero(input.rows(), input.cols());
    grad_output = Eigen::MatrixXd::Zero(output.rows(), output.cols());
    for (const CbowItem& item : batch) {
        Eigen::VectorXd h = Eigen::VectorXd::Zero(input.cols());
        for (auto c : item.context) h += input.row(c);
        h /= static_cast<double>(item.context.size());

        Eigen::VectorXd e = Eigen::VectorXd::Zero(input.cols());
        double g = sigmoid(h.dot(output.row(item.target))) - 1.0;
        e += g * output.row(item.target).transpose();
        grad_output.row(item.target) += g * h.transpose();
        for (auto n : item.negatives) {
            double gn = sigmoid(h.dot(output.row(n)));
            e += gn * output.row(n).transpose();
            grad_output.row(n) += gn * h.transpose();
        }
        Eigen::VectorXd per_context = e / static_cast<double>(item.context.size());
        for (auto c : item.context) grad_input.row(c) += per_context.transpose();
    }
}

EmbeddingModel train_cbow(const std::vector<ContextWindow>& windows,
                          const EmbeddingConfig& config) {
    if (config.dims < 2) throw ValidationError("embedding dims must be >= 2");
    if (config.epochs < 1) throw ValidationError("embedding epochs must be >= 1");
    if (config.min_count < 1) throw ValidationError("embedding min_count must be >= 1");

    EmbeddingModel model;
    model.config = config;
    model.vocab = build_vocab(windows, config.min_count);

    auto prepared = prepare_windows(windows, model.vocab);
    if (prepared.empty())
        throw ValidationError("no training windows survive the vocabulary filter");

    const auto n = static_cast<Eigen::Index>(model.vocab.size());
    const Eigen::Index dims = config.dims;
    const bool use_subword = config.subword.has_value();

    std::mt19937_64 rng(config.rng_seed);
    model.input.resize(n, dims);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < dims; ++j)
            model.input(i, j) = (uniform_unit(rng) - 0.5) / static_cast<double>(dims);
    model.output = Eigen::MatrixXd::Zero(n, dims);
    if (use_subword) {
        auto buckets = static_cast<Eigen::Index>(config.subword->buckets);
        model.subword_input.resize(buckets, dims);
        for (Eigen::Index i = 0; i < buckets; ++i)
            for (Eigen::Index j = 0; j < dims; ++j)
                model.subword_input(i, j) = (uniform_unit(rng) - 0.5) / static_cast<double>(dims);
    }

    const auto buckets = vocab_buckets(model.vocab, config.subword);
    const NegativeSampler sampler(model.vocab.freqs, config.sampling_exponent);

    std::size_t items_per_epoch = 0;
    for (const auto& tw : prepared) items_per_epoch += tw.ids.size();
    const double total_items =
        static_cast<double>(items_per_epoch) * static_cast<double>(config.epochs);

    std::vector<std::size_t> order(prepared.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    const int thread_count = std::max(1, config.threads);
    std::size_t processed_total = 0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        deterministic_shuffle(order, rng);
        double epoch_loss = 0.0;
        std::size_t epoch_items = 0;

        if (thread_count == 1) {
            for (std::size_t oi : order) {
                const auto& ids = prepared[oi].ids;
                for (std::size_t t = 0; t < ids.size(); ++t) {
                    double frac = static_cast<double>(processed_total) / total_items;
                    double lr = config.initial_lr +
                                (config.final_lr - config.initial_lr) * frac;
                    auto res = cbow_step(model.input, model.output, model.subword_input,
                                         buckets, ids, t, sampler, rng,
                                         config.negative_samples, lr, use_subword);
                    epoch_loss += res.loss;
                    ++processed_total;
                    ++epoch_items;
                }
            }
        } else {
            // hogwild updates: racy by design, flagged nondeterministic upstream
            std::atomic<std::size_t> shared_processed{processed_total};
            std::atomic<std::size_t> next_chunk{0};
            std::vector<double> thread_loss(static_cast<std::size_t>(thread_count), 0.0);
            std::vector<std::size_t> thread_items(static_cast<std::size_t>(thread_count), 0);
            const std::size_t chunk = 64;

            auto worker = [&](int tid) {
                std::mt19937_64 local_rng(config.rng_seed ^
                                          (0x9e3779b97f4a7c15ull *
                                           (static_cast<std::uint64_t>(epoch) * thread_count +
                                            static_cast<std::uint64_t>(tid) + 1)));
                for (;;) {
                    std::size_t begin = next_chunk.fetch_add(chunk);
                    if (begin >= order.size()) break;
                    std::size_t end = std::min(order.size(), begin + chunk);
                    for (std::size_t k = begin; k < end; ++k) {
                        const auto& ids = prepared[order[k]].ids;
                        for (std::size_t t = 0; t < ids.size(); ++t) {
                            std::size_t done = shared_processed.fetch_add(1);
                            double frac = static_cast<double>(done) / total_items;
                            double lr = config.initial_lr +
                                        (config.final_lr - config.initial_lr) * frac;
                            auto res = cbow_step(model.input, model.output,
                                                 model.subword_input, buckets, ids, t, sampler,
                                                 local_rng, config.negative_samples, lr,
                                                 use_subword);
                            thread_loss[static_cast<std::size_t>(tid)] += res.loss;
                            thread_items[static_cast<std::size_t>(tid)]++;
                        }
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int tid = 0; tid < thread_count; ++tid) pool.emplace_back(worker, tid);
            for (auto& th : pool) th.join();
            processed_total = shared_processed.load();
            for (int tid = 0; tid < thread_count; ++tid) {
                epoch_loss += thread_loss[static_cast<std::size_t>(tid)];
                epoch_items += thread_items[static_cast<std::size_t>(tid)];
            }
        }

        double mean_loss = epoch_loss / static_cast<double>(std::max<std::size_t>(epoch_items, 1));
        if (!std::isfinite(mean_loss))
            throw PipelineError("train", "non-finite training loss at epoch " +
                                             std::to_string(epoch + 1) + " (mean " +
                                             std::to_string(mean_loss) + "); try a lower " +
                                             "learning rate");
        model.epoch_losses.push_back(mean_loss);
    }
    return model;
}

std::optional<Eigen::VectorXd> EmbeddingModel::vector(const Word& w) const {
    auto id = vocab.id_of(w);
    if (!config.subword) {
        if (id < 0) return std::nullopt;
        return Eigen::VectorXd(input.row(id));
    }
    auto bs = subword_buckets(w.surface, *config.subword);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(input.cols());
    std::size_t parts = 0;
    if (id >= 0) {
        acc += input.row(id);
        ++parts;
    }
    for (std::uint64_t b : bs) {
        acc += subword_input.row(static_cast<Eigen::Index>(b));
        ++parts;
    }
    if (parts == 0) return std::nullopt;
    return Eigen::VectorXd(acc / static_cast<double>(parts));
}

// ----------------------------------------------------------- model file ---

namespace {

constexpr std::uint32_t kModelMagic = 0x53454d31;  // "SEM1"

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

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    put_u64(os, bits);
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

double get_f64(std::istream& is) {
    std::uint64_t bits = get_u64(is);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

std::string get_str(std::istream& is) {
    std::uint32_t n = get_u32(is);
    std::string s(n, '\0');
    is.read(s.data(), static_cast<std::streamsize>(n));
    return s;
}

void put_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
    put_u64(os, static_cast<std::uint64_t>(m.rows()));
    put_u64(os, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) put_f64(os, m(i, j));
}

Eigen::MatrixXd get_matrix(std::istream& is) {
    auto rows = static_cast<Eigen::Index>(get_u64(is));
    auto cols = static_cast<Eigen::Index>(get_u64(is));
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = get_f64(is);
    return m;
}

}  // namespace

void save_model(const std::filesystem::path& file, const EmbeddingModel& model) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw PipelineError("train", "cannot write model file: " + file.string());
    put_u32(os, kModelMagic);
    const EmbeddingConfig& c = model.config;
    put_u32(os, static_cast<std::uint32_t>(c.dims));
    put_u64(os, static_cast<std::uint64_t>(c.min_count));
    put_u32(os, static_cast<std::uint32_t>(c.epochs));
    put_u32(os, static_cast<std::uint32_t>(c.negative_samples));
    put_f64(os, c.initial_lr);
    put_f64(os, c.final_lr);
    put_f64(os, c.sampling_exponent);
    put_u64(os, c.rng_seed);
    put_u32(os, static_cast<std::uint32_t>(c.threads));
    os.put(c.subword ? 1 : 0);
    if (c.subword) {
        put_u32(os, static_cast<std::uint32_t>(c.subword->min_n));
        put_u32(os, static_cast<std::uint32_t>(c.subword->max_n));
        put_u64(os, c.subword->buckets);
    }
    put_u64(os, model.vocab.size());
    for (std::size_t i = 0; i < model.vocab.size(); ++i) {
        os.put(coarse_code(model.vocab.words[i].coarse));
        put_str(os, model.vocab.words[i].surface);
        put_u64(os, static_cast<std::uint64_t>(model.vocab.freqs[i]));
    }
    put_u64(os, model.epoch_losses.size());
    for (double loss : model.epoch_losses) put_f64(os, loss);
    put_matrix(os, model.input);
    put_matrix(os, model.output);
    os.put(model.subword_input.size() > 0 ? 1 : 0);
    if (model.subword_input.size() > 0) put_matrix(os, model.subword_input);
    if (!os) throw PipelineError("train", "write failed: " + file.string());
}

EmbeddingModel load_model(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw PipelineError("train", "cannot read model file: " + file.string());
    if (get_u32(is) != kModelMagic)
        throw PipelineError("train", "not a model file: " + file.string());

    EmbeddingModel model;
    EmbeddingConfig& c = model.config;
    c.dims = static_cast<int>(get_u32(is));
    c.min_count = static_cast<std::int64_t>(get_u64(is));
    c.epochs = static_cast<int>(get_u32(is));
    c.negative_samples = static_cast<int>(get_u32(is));
    c.initial_lr = get_f64(is);
    c.final_lr = get_f64(is);
    c.sampling_exponent = get_f64(is);
    c.rng_seed = get_u64(is);
    c.threads = static_cast<int>(get_u32(is));
    if (is.get() == 1) {
        SubwordConfig sub;
        sub.min_n = static_cast<int>(get_u32(is));
        sub.max_n = static_cast<int>(get_u32(is));
        sub.buckets = get_u64(is);
        c.subword = sub;
    }
    std::uint64_t vocab_size = get_u64(is);
    for (std::uint64_t i = 0; i < vocab_size && is; ++i) {
        auto coarse = coarse_from_code(static_cast<char>(is.get()));
        if (!coarse) throw PipelineError("train", "corrupt model file: " + file.string());
        Word w{get_str(is), *coarse};
        model.vocab.freqs.push_back(static_cast<std::int64_t>(get_u64(is)));
        model.vocab.index.emplace(word_key(w), static_cast<std::int32_t>(i));
        model.vocab.words.push_back(std::move(w));
    }
    std::uint64_t losses = get_u64(is);
    for (std::uint64_t i = 0; i < losses && is; ++i)
        model.epoch_losses.push_back(get_f64(is));
    model.input = get_matrix(is);
    model.output = get_matrix(is);
    if (is.get() == 1) model.subword_input = get_matrix(is);
    if (!is) throw PipelineError("train", "truncated model file: " + file.string());
    return model;
}

}  // namespace sensoria

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "sensoria/embedding.hpp"
#include "sensoria/error.hpp"
#include "oracles.hpp"

using namespace sensoria;
namespace fs = std::filesystem;

namespace {

ContextWindow cw(std::string anchor, std::vector<std::string> members,
                 Sense sense = Sense::Smell) {
    ContextWindow w;
    w.sense = sense;
    w.seed = Word{std::move(anchor), Coarse::Noun};
    w.book_id = "b";
    for (auto& m : members) w.members.push_back(Word{std::move(m), Coarse::Noun});
    return w;
}

// ember and ash share their contexts, tide lives elsewhere
std::vector<ContextWindow> planted_corpus() {
    std::vector<ContextWindow> wins;
    for (int i = 0; i < 30; ++i) {
        wins.push_back(cw("ember", {"glow", "coal", "ash"}));
        wins.push_back(cw("ash", {"glow", "coal", "ember"}));
        wins.push_back(cw("tide", {"wave", "salt", "foam"}));
    }
    return wins;
}

double softplus_ref(double x) {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(b) / (a.norm() * b.norm());
}

EmbeddingConfig small_config() {
    EmbeddingConfig cfg;
    cfg.dims = 10;
    cfg.min_count = 1;
    cfg.epochs = 10;
    cfg.negative_samples = 3;
    cfg.initial_lr = 0.05;
    cfg.final_lr = 0.001;
    cfg.rng_seed = 42;
    cfg.threads = 1;
    return cfg;
}

}  // namespace

TEST_CASE("vocabulary counts anchors plus members and ranks by frequency") {
    std::vector<ContextWindow> wins;
    wins.push_back(cw("smell", {"bread", "sweet"}));
    wins.push_back(cw("smell", {"bread"}));

    Vocabulary v = build_vocab(wins, 1);
    REQUIRE(v.size() == 3);
    CHECK(word_key(v.words[0]) == "bread/n");  // 2-2 tie, bread/n < smell/n
    CHECK(word_key(v.words[1]) == "smell/n");
    CHECK(word_key(v.words[2]) == "sweet/n");
    CHECK(v.freqs == std::vector<std::int64_t>{2, 2, 1});
    CHECK(v.id_of(Word{"sweet", Coarse::Noun}) == 2);
    CHECK(v.id_of(Word{"sweet", Coarse::Adj}) == -1);

    Vocabulary trimmed = build_vocab(wins, 2);
    CHECK(trimmed.size() == 2);

    CHECK_THROWS_AS(build_vocab(wins, 100), ValidationError);
    CHECK_THROWS_AS(build_vocab({}, 1), ValidationError);
}

TEST_CASE("batch loss matches the closed form and adds across items") {
    Eigen::MatrixXd in(3, 4), out(3, 4);
    in << 0.1, -0.2, 0.3, 0.05,
          -0.4, 0.25, -0.1, 0.2,
          0.15, 0.1, -0.3, -0.25;
    out << -0.3, 0.2, 0.1, -0.15,
           0.35, -0.05, 0.2, 0.1,
           -0.1, 0.3, -0.2, 0.05;

    CbowItem item{{0, 2}, 1, {0}};
    Eigen::VectorXd h = (in.row(0) + in.row(2)) / 2.0;
    double expected = softplus_ref(-h.dot(out.row(1))) + softplus_ref(h.dot(out.row(0)));
    CHECK(cbow_batch_loss(in, out, {item}) == doctest::Approx(expected).epsilon(1e-12));

    CbowItem other{{1}, 2, {0, 1}};
    double sum = cbow_batch_loss(in, out, {item}) + cbow_batch_loss(in, out, {other});
    CHECK(cbow_batch_loss(in, out, {item, other}) == doctest::Approx(sum).epsilon(1e-12));

    CHECK(cbow_batch_loss(in, out, {}) == 0.0);
}

TEST_CASE("analytic gradients agree with central differences") {
    std::mt19937_64 rng(2024);
    auto noise = [&] { return uniform_unit(rng) - 0.5; };
    Eigen::MatrixXd in(6, 5), out(6, 5);
    for (Eigen::Index i = 0; i < 6; ++i)
        for (Eigen::Index j = 0; j < 5; ++j) {
            in(i, j) = noise();
            out(i, j) = noise();
        }

    std::vector<CbowItem> batch{
        {{0, 1}, 2, {3, 4}},
        {{2}, 0, {5}},
        {{3, 4, 5}, 1, {0, 2, 2}},  // repeated negative must accumulate
    };

    Eigen::MatrixXd gi, go, ni, no;
    cbow_batch_gradients(in, out, batch, gi, go);
    oracle::numeric_cbow_gradients(in, out, batch, ni, no);

    double in_err = (gi - ni).cwiseAbs().maxCoeff() / (ni.cwiseAbs().maxCoeff() + 1e-12);
    double out_err = (go - no).cwiseAbs().maxCoeff() / (no.cwiseAbs().maxCoeff() + 1e-12);
    CHECK(in_err < 1e-4);
    CHECK(out_err < 1e-4);
}

TEST_CASE("single-threaded training is bitwise reproducible") {
    auto wins = planted_corpus();
    EmbeddingConfig cfg = small_config();

    EmbeddingModel a = train_cbow(wins, cfg);
    EmbeddingModel b = train_cbow(wins, cfg);
    CHECK((a.input - b.input).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.output - b.output).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.epoch_losses == b.epoch_losses);

    cfg.rng_seed = 43;
    EmbeddingModel c = train_cbow(wins, cfg);
    CHECK((a.input - c.input).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("loss is finite, recorded per epoch, and trends down") {
    auto wins = planted_corpus();
    EmbeddingModel m = train_cbow(wins, small_config());
    REQUIRE(m.epoch_losses.size() == 10);
    for (double l : m.epoch_losses) CHECK(std::isfinite(l));
    CHECK(m.epoch_losses.back() < m.epoch_losses.front());
}

TEST_CASE("training embeds planted neighbors closer than strangers") {
    auto wins = planted_corpus();
    EmbeddingModel m = train_cbow(wins, small_config());
    auto ember = m.vector(Word{"ember", Coarse::Noun});
    auto ash = m.vector(Word{"ash", Coarse::Noun});
    auto tide = m.vector(Word{"tide", Coarse::Noun});
    REQUIRE(ember);
    REQUIRE(ash);
    REQUIRE(tide);
    CHECK(cosine(*ember, *ash) > cosine(*ember, *tide));
}

TEST_CASE("lookups distinguish in-vocabulary from unknown words") {
    EmbeddingModel m = train_cbow(planted_corpus(), small_config());
    auto known = m.vector(Word{"glow", Coarse::Noun});
    REQUIRE(known);
    auto id = m.vocab.id_of(Word{"glow", Coarse::Noun});
    CHECK((*known - m.input.row(id).transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK_FALSE(m.vector(Word{"glacier", Coarse::Noun}).has_value());
}

TEST_CASE("subword model composes vectors for unknown words") {
    EmbeddingConfig cfg = small_config();
    cfg.subword = SubwordConfig{2, 4, 500};
    EmbeddingModel m = train_cbow(planted_corpus(), cfg);
    CHECK(m.subword_input.rows() == 500);

    auto oov = m.vector(Word{"emberly", Coarse::Noun});
    REQUIRE(oov.has_value());
    auto ids = subword_buckets("emberly", *cfg.subword);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(cfg.dims);
    for (auto b : ids) acc += m.subword_input.row(static_cast<Eigen::Index>(b));
    acc /= static_cast<double>(ids.size());
    CHECK((*oov - acc).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("subword bucket ids are deterministic and bounded") {
    SubwordConfig cfg{3, 6, 1000};
    auto ids = subword_buckets("cat", cfg);  // wrapped form <cat> has length 5
    CHECK(ids.size() == 6);                  // 3 trigrams + 2 quadgrams + 1 pentagram
    for (auto b : ids) CHECK(b < 1000);
    CHECK(subword_buckets("cat", cfg) == ids);
    CHECK(subword_buckets("dog", cfg) != ids);

    SubwordConfig tiny{3, 6, 1000};
    CHECK(subword_buckets("a", tiny).size() == 1);  // just "<a>"
}

TEST_CASE("deterministic rng helpers are frozen") {
    std::mt19937_64 rng(42);
    CHECK(uniform_unit(rng) == 0.75515553295453897);
    CHECK(uniform_unit(rng) == 0.63903139385469743);
    CHECK(uniform_unit(rng) == 0.7521452007480266);
    CHECK(uniform_unit(rng) == 0.13627268363243705);
    for (int i = 0; i < 1000; ++i) {
        double u = uniform_unit(rng);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }

    std::mt19937_64 shuffler(7);
    std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
    deterministic_shuffle(v, shuffler);
    CHECK(v == std::vector<int>{2, 3, 5, 6, 1, 0, 4, 7});
    std::sort(v.begin(), v.end());
    CHECK(v == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("model files round trip bit for bit") {
    EmbeddingConfig cfg = small_config();
    cfg.epochs = 3;
    EmbeddingModel m = train_cbow(planted_corpus(), cfg);

    fs::path dir = fs::temp_directory_path() / "sensoria-embedding-test";
    fs::create_directories(dir);
    fs::path f1 = dir / "model1.bin";
    fs::path f2 = dir / "model2.bin";
    save_model(f1, m);

    EmbeddingModel back = load_model(f1);
    CHECK(back.config == m.config);
    CHECK(back.vocab.words == m.vocab.words);
    CHECK(back.vocab.freqs == m.vocab.freqs);
    CHECK(back.epoch_losses == m.epoch_losses);
    CHECK((back.input - m.input).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.output - m.output).cwiseAbs().maxCoeff() == 0.0);

    save_model(f2, back);
    std::ifstream s1(f1, std::ios::binary), s2(f2, std::ios::binary);
    std::string b1((std::istreambuf_iterator<char>(s1)), std::istreambuf_iterator<char>());
    std::string b2((std::istreambuf_iterator<char>(s2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);
    CHECK_FALSE(b1.empty());
}

TEST_CASE("bad model files fail loudly") {
    fs::path dir = fs::temp_directory_path() / "sensoria-embedding-test";
    fs::create_directories(dir);
    CHECK_THROWS_AS(load_model(dir / "absent.bin"), PipelineError);

    fs::path garbage = dir / "garbage.bin";
    std::ofstream(garbage, std::ios::binary) << "nope";
    CHECK_THROWS_WITH_AS(load_model(garbage), doctest::Contains("not a model file"),
                         PipelineError);
}

TEST_CASE("training rejects impossible setups") {
    auto wins = planted_corpus();
    EmbeddingConfig cfg = small_config();
    cfg.dims = 1;
    CHECK_THROWS_AS(train_cbow(wins, cfg), ValidationError);

    cfg = small_config();
    cfg.min_count = 61;  // the most frequent word appears 60 times
    CHECK_THROWS_AS(train_cbow(wins, cfg), ValidationError);

    // vocabulary survives but no window keeps two in-vocab tokens
    std::vector<ContextWindow> sparse;
    sparse.push_back(cw("alpha", {"beta"}));
    sparse.push_back(cw("alpha", {"gamma"}));
    cfg = small_config();
    cfg.min_count = 2;
    CHECK_THROWS_WITH_AS(train_cbow(sparse, cfg), doctest::Contains("survive"),
                         ValidationError);
}

TEST_CASE("a runaway learning rate fails as a stage error") {
    auto wins = planted_corpus();
    EmbeddingConfig cfg = small_config();
    cfg.initial_lr = 1e300;
    cfg.final_lr = 1e300;
    cfg.epochs = 3;
    CHECK_THROWS_WITH_AS(train_cbow(wins, cfg), doctest::Contains("non-finite"),
                         PipelineError);
}

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "sensoria/error.hpp"
#include "sensoria/geometry.hpp"
#include "oracles.hpp"

using namespace sensoria;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m,
                              double scale = 1.0) {
    Eigen::MatrixXd x(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            x(i, j) = scale * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
    return x;
}

}  // namespace

TEST_CASE("pearson matches the hand-computed value") {
    Eigen::Vector3d x(1.0, 2.0, 3.0);
    Eigen::Vector3d y(1.0, 2.0, 4.0);
    // centered x = (-1,0,1), centered y = (-4/3,-1/3,5/3): r = 3/sqrt(2*14/3)
    double expected = 3.0 / std::sqrt(2.0 * (14.0 / 3.0));
    CHECK(pearson(x, y) == doctest::Approx(expected).epsilon(1e-12));

    CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::Vector3d neg = -x;
    CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-12));

    Eigen::Vector3d shifted = (x.array() * 7.0 + 3.0).matrix();
    CHECK(pearson(x, shifted) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pearson rejects degenerate input") {
    Eigen::Vector3d x(1.0, 2.0, 3.0);
    Eigen::Vector3d flat(5.0, 5.0, 5.0);
    CHECK_THROWS_AS(pearson(x, flat), DegenerateInputError);
    Eigen::Vector2d short2(1.0, 2.0);
    CHECK_THROWS_AS(pearson(x, short2), DegenerateInputError);
    Eigen::Matrix<double, 1, 1> one(1.0);
    CHECK_THROWS_AS(pearson(one, one), DegenerateInputError);
}

TEST_CASE("distance transform and matrix identities") {
    CHECK(pearson_distance(1.0) == 0.0);
    CHECK(pearson_distance(-1.0) == 1.0);
    CHECK(pearson_distance(0.0) == 0.5);

    Eigen::MatrixXd rows(3, 4);
    rows << 1.0, 2.0, 3.0, 4.0,
            2.0, 4.0, 6.0, 8.0,       // same direction: distance 0
            4.0, 3.0, 2.0, 1.0;       // opposite: distance 1
    Eigen::MatrixXd d = pearson_distance_matrix(rows);
    CHECK(d(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d(0, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d(1, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("distance matrix is symmetric, zero-diagonal, and bounded") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 7);
        Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 9);
        Eigen::MatrixXd x = random_matrix(rng, n, m);
        Eigen::MatrixXd d = pearson_distance_matrix(x);
        CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(d.diagonal().cwiseAbs().maxCoeff() == 0.0);
        CHECK(d.minCoeff() >= 0.0);
        CHECK(d.maxCoeff() <= 1.0);
    }

    // matrix entries match the scalar definition
    Eigen::MatrixXd x = random_matrix(rng, 5, 6);
    Eigen::MatrixXd d = pearson_distance_matrix(x);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 5; ++j) {
            if (i == j) continue;
            double expect = pearson_distance(pearson(x.row(i), x.row(j)));
            CHECK(d(i, j) == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("distance matrix rejects unusable rows") {
    Eigen::MatrixXd flat(2, 3);
    flat << 1.0, 1.0, 1.0,
            1.0, 2.0, 3.0;
    CHECK_THROWS_WITH_AS(pearson_distance_matrix(flat), doctest::Contains("row 0"),
                         DegenerateInputError);
    Eigen::MatrixXd thin(3, 1);
    thin << 1.0, 2.0, 3.0;
    CHECK_THROWS_AS(pearson_distance_matrix(thin), DegenerateInputError);
}

TEST_CASE("pca agrees with an independent eigensolver") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::Index n = 3 + static_cast<Eigen::Index>(rng() % 6);  // 3..8 rows
        Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 7);  // 2..8 cols
        Eigen::MatrixXd x = random_matrix(rng, n, m, 2.0);
        Eigen::Index max_rank = std::min(n - 1, m);
        Eigen::Index k = 1 + static_cast<Eigen::Index>(rng() % max_rank);

        Pca<double> got = pca_fit(x, k);
        oracle::JacobiPca want = oracle::jacobi_pca(x);

        for (Eigen::Index c = 0; c < k; ++c) {
            CHECK(got.explained_variance(c) ==
                  doctest::Approx(want.eigenvalues(c)).epsilon(1e-9));
            CHECK(got.explained_variance_ratio(c) ==
                  doctest::Approx(want.eigenvalues(c) / want.total_variance).epsilon(1e-9));
            // score columns match up to sign; skip near-ties where the basis
            // inside an eigenspace is arbitrary
            double gap = 1e9;
            if (c > 0) gap = std::min(gap, want.eigenvalues(c - 1) - want.eigenvalues(c));
            if (c + 1 < want.eigenvalues.size())
                gap = std::min(gap, want.eigenvalues(c) - want.eigenvalues(c + 1));
            if (gap < 1e-6) continue;
            Eigen::VectorXd a = got.scores.col(c).cwiseAbs();
            Eigen::VectorXd b = want.scores.col(c).cwiseAbs();
            CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("variance ratios are sorted, bounded, and exhaustive at full rank") {
    std::mt19937_64 rng(13);
    Eigen::MatrixXd x = random_matrix(rng, 7, 4, 3.0);
    Pca<double> p = pca_fit(x, 4);
    double sum = 0.0;
    for (Eigen::Index k = 0; k < 4; ++k) {
        CHECK(p.explained_variance_ratio(k) >= 0.0);
        if (k > 0) CHECK(p.explained_variance(k) <= p.explained_variance(k - 1));
        sum += p.explained_variance_ratio(k);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));  // full rank explains everything

    Pca<double> partial = pca_fit(x, 2);
    CHECK(partial.explained_variance_ratio.sum() <= 1.0 + 1e-12);
}

TEST_CASE("a rank-1 cloud puts everything on the first component") {
    Eigen::VectorXd direction(3);
    direction << 1.0, -2.0, 0.5;
    Eigen::MatrixXd x(5, 3);
    for (Eigen::Index i = 0; i < 5; ++i)
        x.row(i) = (static_cast<double>(i) - 2.0) * direction.transpose();
    Pca<double> p = pca_fit(x, 1);
    CHECK(p.explained_variance_ratio(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("component signs follow the largest entry") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd x = random_matrix(rng, 6, 5, 2.0);
        Pca<double> p = pca_fit(x, 3);
        for (Eigen::Index k = 0; k < 3; ++k) {
            Eigen::Index arg = 0;
            p.components.row(k).cwiseAbs().maxCoeff(&arg);
            CHECK(p.components(k, arg) >= 0.0);
        }
    }
}

TEST_CASE("scores are invariant to translating the cloud") {
    std::mt19937_64 rng(15);
    Eigen::MatrixXd x = random_matrix(rng, 6, 4, 2.0);
    Eigen::MatrixXd shifted = x.rowwise() + Eigen::RowVector4d(5.0, -3.0, 0.25, 100.0);
    Pca<double> a = pca_fit(x, 2);
    Pca<double> b = pca_fit(shifted, 2);
    CHECK((a.scores - b.scores).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.explained_variance - b.explained_variance).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("pca rejects impossible requests") {
    Eigen::MatrixXd x(4, 3);
    x << 1.0, 2.0, 3.0,
         2.0, 3.0, 5.0,
         0.5, 1.0, 2.0,
         3.0, 1.0, 0.0;
    CHECK_THROWS_AS(pca_fit(x, 0), ValidationError);
    CHECK_THROWS_WITH_AS(pca_fit(x, 4), doctest::Contains("at most 3"), ValidationError);

    Eigen::MatrixXd two(2, 5);
    two << 1.0, 2.0, 3.0, 4.0, 5.0,
           5.0, 4.0, 3.0, 2.0, 1.0;
    CHECK_THROWS_AS(pca_fit(two, 2), ValidationError);  // max rank is n - 1 = 1

    Eigen::MatrixXd same = Eigen::MatrixXd::Constant(4, 3, 2.5);
    CHECK_THROWS_AS(pca_fit(same, 1), DegenerateInputError);
}

TEST_CASE("variance summary averages the per-run ratio sums") {
    std::mt19937_64 rng(16);
    Eigen::MatrixXd x = random_matrix(rng, 7, 5, 2.0);
    std::vector<Pca<double>> runs{pca_fit(x, 2), pca_fit(x, 3)};
    double expect = (runs[0].explained_variance_ratio.sum() +
                     runs[1].explained_variance_ratio.sum()) /
                    2.0;
    CHECK(explained_variance_summary(runs) == doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(explained_variance_summary(std::vector<Pca<double>>{}),
                    DegenerateInputError);
}

TEST_CASE("float instantiation compiles and behaves") {
    Eigen::MatrixXf x(4, 3);
    x << 1.0f, 2.0f, 3.5f,
         2.0f, 4.5f, 6.0f,
         4.0f, 3.0f, 1.0f,
         0.0f, 1.5f, 2.0f;
    Eigen::MatrixXf d = pearson_distance_matrix(x);
    CHECK(d.rows() == 4);
    CHECK(float(d(2, 1)) == doctest::Approx(float(d(1, 2))));
    Pca<float> p = pca_fit(x, 2);
    CHECK(p.scores.rows() == 4);
    CHECK(p.explained_variance_ratio(0) > 0.0f);
}

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "ids/pca.hpp"
#include "ids/rng.hpp"

using namespace ids;

namespace {

Matrix random_symmetric(Rng& rng, std::size_t d, double scale = 1.0) {
    Matrix s(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            const double v = rng.next_double(-scale, scale);
            s(i, j) = v;
            s(j, i) = v;
        }
    return s;
}

double inf_norm(const Matrix& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) row += std::abs(m(i, j));
        worst = std::max(worst, row);
    }
    return worst;
}

double column_variance(const Matrix& x, std::size_t c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, c);
    mean /= static_cast<double>(x.rows());
    double ss = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const double dev = x(r, c) - mean;
        ss += dev * dev;
    }
    return ss / static_cast<double>(x.rows() - 1);
}

std::vector<data::FeatureId> ids_upto(std::size_t d) {
    std::vector<data::FeatureId> out;
    for (std::size_t i = 1; i <= d; ++i) out.push_back({static_cast<std::uint16_t>(i)});
    return out;
}

}  // namespace

TEST_CASE("covariance on hand-computed cases") {
    // two points (-1,-1), (1,1) with divisor n-1
    Matrix x(2, 2);
    x(0, 0) = -1;
    x(0, 1) = -1;
    x(1, 0) = 1;
    x(1, 1) = 1;
    const Matrix c = pca::covariance_matrix(x);
    CHECK(c(0, 0) == doctest::Approx(2.0));
    CHECK(c(0, 1) == doctest::Approx(2.0));
    CHECK(c(1, 0) == doctest::Approx(2.0));
    CHECK(c(1, 1) == doctest::Approx(2.0));

    Matrix one_row(1, 2);
    CHECK_THROWS_AS(pca::covariance_matrix(one_row), ComputeError);
}

TEST_CASE("covariance of duplicated columns equals the shared variance") {
    Rng rng(9);
    Matrix x(50, 2);
    for (std::size_t r = 0; r < 50; ++r) {
        const double v = rng.next_double(-4, 4);
        x(r, 0) = v;
        x(r, 1) = v;
    }
    const Matrix c = pca::covariance_matrix(x);
    CHECK(c(0, 1) == doctest::Approx(c(0, 0)).epsilon(1e-12));
    CHECK(c(1, 1) == doctest::Approx(c(0, 0)).epsilon(1e-12));
}

TEST_CASE("eigen on closed-form 2x2 cases") {
    {
        Matrix s(2, 2);
        s(0, 0) = 1;
        s(1, 1) = 1;
        const auto e = pca::sym_eigen(s);
        CHECK(e.values[0] == doctest::Approx(1.0));
        CHECK(e.values[1] == doctest::Approx(1.0));
        // basis is not unique; check the eigen equation instead
        for (int j = 0; j < 2; ++j) {
            const double n =
                e.vectors(0, j) * e.vectors(0, j) + e.vectors(1, j) * e.vectors(1, j);
            CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    {
        Matrix s(2, 2);
        s(0, 0) = 3;
        s(1, 1) = 1;
        const auto e = pca::sym_eigen(s);
        CHECK(e.values[0] == doctest::Approx(3.0));
        CHECK(e.values[1] == doctest::Approx(1.0));
        CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(1.0));
        CHECK(e.vectors(0, 0) > 0.0);  // sign convention
    }
    {
        Matrix s(2, 2);
        s(0, 0) = 1;
        s(0, 1) = 1;
        s(1, 0) = 1;
        s(1, 1) = 1;
        const auto e = pca::sym_eigen(s);
        CHECK(e.values[0] == doctest::Approx(2.0));
        CHECK(e.values[1] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(e.vectors(0, 0) == doctest::Approx(0.7071).epsilon(1e-4));
        CHECK(e.vectors(1, 0) == doctest::Approx(0.7071).epsilon(1e-4));
    }
    {
        Matrix s(2, 2);
        s(0, 1) = 1.0;
        s(1, 0) = 0.5;  // asymmetric
        CHECK_THROWS_AS(pca::sym_eigen(s), ComputeError);
    }
}

TEST_CASE("eigen properties on 100 random symmetric matrices") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 2 + rng.next_below(49);  // up to 50
        const Matrix s = random_symmetric(rng, d, 3.0);
        const auto e = pca::sym_eigen(s);

        // descending order
        for (std::size_t j = 1; j < d; ++j) CHECK(e.values[j - 1] >= e.values[j]);

        // orthonormality within 1e-8
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) {
                double dot = 0.0;
                for (std::size_t i = 0; i < d; ++i) dot += e.vectors(i, a) * e.vectors(i, b);
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) <= 1e-8);
            }

        // eigen equation within 1e-7 * ||S||_inf
        const double tol = 1e-7 * inf_norm(s);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i) {
                double sv = 0.0;
                for (std::size_t k = 0; k < d; ++k) sv += s(i, k) * e.vectors(k, j);
                CHECK(std::abs(sv - e.values[j] * e.vectors(i, j)) <= tol);
            }

        // trace conservation
        double trace = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) trace += s(i, i);
        for (const double v : e.values) sum += v;
        CHECK(std::abs(trace - sum) <= 1e-8);
    }
}

TEST_CASE("pca on a rank-1 dataset recovers the informative direction") {
    Rng rng(55);
    const std::size_t d = 6, n = 200;
    std::vector<double> u(d);
    double norm = 0.0;
    for (auto& v : u) {
        v = rng.next_double(-1, 1);
        norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : u) v /= norm;
    std::vector<double> mean_shift(d);
    for (auto& v : mean_shift) v = rng.next_double(-2, 2);
    Matrix x(n, d);
    std::vector<double> magnitudes(n);
    for (std::size_t r = 0; r < n; ++r) {
        magnitudes[r] = rng.next_double(-5, 5);
        for (std::size_t c = 0; c < d; ++c) x(r, c) = mean_shift[c] + magnitudes[r] * u[c];
    }
    const auto model = pca::fit_pca(x, ids_upto(d));
    for (std::size_t j = 1; j < d; ++j) CHECK(std::abs(model.eigenvalues[j]) <= 1e-9);
    // v1 = +-u
    double dot = 0.0;
    for (std::size_t c = 0; c < d; ++c) dot += model.eigenvectors(c, 0) * u[c];
    CHECK(std::abs(std::abs(dot) - 1.0) <= 1e-8);

    // k = 1 transform recovers signed magnitudes along u (up to sign)
    const Matrix projected = pca::transform(model, x, ids_upto(d), 1);
    const double mean_mag =
        std::accumulate(magnitudes.begin(), magnitudes.end(), 0.0) / static_cast<double>(n);
    const double sign = dot > 0 ? 1.0 : -1.0;
    for (std::size_t r = 0; r < n; ++r)
        CHECK(projected(r, 0) ==
              doctest::Approx(sign * (magnitudes[r] - mean_mag)).epsilon(1e-7));
}

TEST_CASE("trace identity and per-component variance on random data") {
    Rng rng(66);
    const std::size_t n = 300, d = 8;
    Matrix x(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c)
            x(r, c) = rng.next_double(-1, 1) * static_cast<double>(c + 1);
    const auto model = pca::fit_pca(x, ids_upto(d));

    double eigen_sum = 0.0, var_sum = 0.0;
    for (const double v : model.eigenvalues) eigen_sum += v;
    for (std::size_t c = 0; c < d; ++c) var_sum += column_variance(x, c);
    CHECK(std::abs(eigen_sum - var_sum) <= 1e-8);

    // transformed column j carries variance lambda_j
    const Matrix projected = pca::transform(model, x, ids_upto(d), d);
    for (std::size_t j = 0; j < d; ++j)
        CHECK(column_variance(projected, j) ==
              doctest::Approx(model.eigenvalues[j]).epsilon(1e-6));

    // projection energy is non-decreasing and reaches 1 at k = d
    double running = 0.0;
    double previous = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        running += model.eigenvalues[k];
        const double energy = running / eigen_sum;
        CHECK(energy >= previous);
        previous = energy;
    }
    CHECK(std::abs(previous - 1.0) <= 1e-9);
}

TEST_CASE("transform centering, distance preservation and errors") {
    Rng rng(88);
    const std::size_t n = 60, d = 5;
    Matrix x(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) x(r, c) = rng.next_double(-2, 2);
    const auto model = pca::fit_pca(x, ids_upto(d));

    // the mean row maps to zero
    Matrix mean_row(1, d);
    for (std::size_t c = 0; c < d; ++c) mean_row(0, c) = model.mean[c];
    const Matrix zero = pca::transform(model, mean_row, ids_upto(d), d);
    for (std::size_t c = 0; c < d; ++c) CHECK(std::abs(zero(0, c)) <= 1e-10);

    // full-rank projection preserves pairwise distances
    const Matrix projected = pca::transform(model, x, ids_upto(d), d);
    for (std::size_t a = 0; a < 10; ++a)
        for (std::size_t b = a + 1; b < 10; ++b) {
            double orig = 0.0, proj = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double dv = x(a, c) - x(b, c);
                orig += dv * dv;
                const double pv = projected(a, c) - projected(b, c);
                proj += pv * pv;
            }
            CHECK(std::abs(std::sqrt(orig) - std::sqrt(proj)) <= 1e-8);
        }

    CHECK_THROWS_AS(pca::transform(model, x, ids_upto(d), d + 1), ConfigError);
    CHECK_THROWS_AS(pca::transform(model, x, ids_upto(d), 0), ConfigError);
    CHECK_THROWS_AS(pca::transform(model, x, ids_upto(d - 1), 2), ConfigError);

    // projected columns are uncorrelated on the fit data
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b) {
            if (model.eigenvalues[a] <= 1e-8 || model.eigenvalues[b] <= 1e-8) continue;
            double cov = 0.0;
            for (std::size_t r = 0; r < n; ++r) cov += projected(r, a) * projected(r, b);
            cov /= static_cast<double>(n - 1);
            const double corr =
                cov / std::sqrt(model.eigenvalues[a] * model.eigenvalues[b]);
            CHECK(std::abs(corr) <= 1e-6);
        }
}

TEST_CASE("feature ranking on a diagonal covariance follows the variances") {
    Rng rng(99);
    const std::size_t n = 4000, d = 5;
    // independent columns with increasing variance; eigenvectors align
    // with axes so eigenvalue weighting orders features by variance
    Matrix x(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c)
            x(r, c) = rng.next_normal() * static_cast<double>(c + 1);
    const auto model = pca::fit_pca(x, ids_upto(d));
    const auto ranking = pca::rank_features(model, pca::Weighting::eigenvalue_weighted, d);
    for (std::size_t i = 0; i < d; ++i)
        CHECK(ranking.entries[i].id.number == static_cast<std::uint16_t>(d - i));
    CHECK(ranking.top(2).size() == 2);
    for (std::size_t i = 1; i < d; ++i)
        CHECK(ranking.entries[i - 1].score >= ranking.entries[i].score);
}

TEST_CASE("ranking tie-break prefers the lower feature number") {
    // two identical-variance duplicated features
    Rng rng(111);
    Matrix x(500, 2);
    for (std::size_t r = 0; r < 500; ++r) {
        const double v = rng.next_normal();
        x(r, 0) = v;
        x(r, 1) = v;
    }
    const auto model = pca::fit_pca(x, ids_upto(2));
    const auto ranking = pca::rank_features(model, pca::Weighting::max_abs, 2);
    CHECK(ranking.entries[0].score == ranking.entries[1].score);
    CHECK(ranking.entries[0].id.number == 1);
}

TEST_CASE("ranking is invariant under row permutation") {
    Rng rng(123);
    const std::size_t n = 150, d = 6;
    Matrix x(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) x(r, c) = rng.next_double(-3, 3);
    Matrix shuffled = x;
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    rng.shuffle(perm);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) shuffled(r, c) = x(perm[r], c);

    const auto rank_a = pca::rank_features(pca::fit_pca(x, ids_upto(d)),
                                           pca::Weighting::eigenvalue_weighted, 3);
    const auto rank_b = pca::rank_features(pca::fit_pca(shuffled, ids_upto(d)),
                                           pca::Weighting::eigenvalue_weighted, 3);
    for (std::size_t i = 0; i < d; ++i) {
        CHECK(rank_a.entries[i].id == rank_b.entries[i].id);
        CHECK(rank_a.entries[i].score == doctest::Approx(rank_b.entries[i].score).epsilon(1e-9));
    }
}

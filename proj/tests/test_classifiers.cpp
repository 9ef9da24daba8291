#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <vector>

#include "ids/classifiers.hpp"
#include "ids/nets.hpp"
#include "ids/rng.hpp"
#include "ids/tree.hpp"

using namespace ids;
using namespace ids::clf;

namespace {

struct Fixture {
    Matrix x;
    std::vector<std::uint8_t> y;
};

// two gaussian blobs around (-c,...) and (+c,...)
Fixture blobs(Rng& rng, std::size_t n, std::size_t d, double center, double spread) {
    Fixture f;
    f.x = Matrix(n, d);
    f.y.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        f.y[r] = r % 2;
        const double mu = f.y[r] ? center : -center;
        for (std::size_t c = 0; c < d; ++c) f.x(r, c) = mu + spread * rng.next_normal();
    }
    return f;
}

Fixture xor_points() {
    Fixture f;
    f.x = Matrix(4, 2);
    f.x(0, 0) = 0; f.x(0, 1) = 0;
    f.x(1, 0) = 0; f.x(1, 1) = 1;
    f.x(2, 0) = 1; f.x(2, 1) = 0;
    f.x(3, 0) = 1; f.x(3, 1) = 1;
    f.y = {0, 1, 1, 0};
    return f;
}

double training_error(const TrainedModel& model, const Fixture& f) {
    const auto predicted = model.predict_labels(f.x);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < f.y.size(); ++i) wrong += predicted[i] != f.y[i];
    return static_cast<double>(wrong) / static_cast<double>(f.y.size());
}

ClassifierSpec spec_of(Kind kind, std::uint64_t seed = 3) {
    ClassifierSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("gini impurity values") {
    CHECK(gini_impurity({1, 1, 0, 0}) == doctest::Approx(0.5));
    CHECK(gini_impurity({1, 1, 1}) == doctest::Approx(0.0));
    CHECK(gini_impurity({1, 0, 0, 0}) == doctest::Approx(0.375));
    CHECK(gini_impurity({1, 0}, {3.0, 1.0}) == doctest::Approx(0.375));
    CHECK_THROWS_AS(gini_impurity({}), ComputeError);
    CHECK_THROWS_AS(gini_impurity({1, 0}, {0.0, 0.0}), ComputeError);
}

TEST_CASE("best_split on the worked examples") {
    // perfectly separable single feature
    {
        Matrix x(4, 1);
        for (int r = 0; r < 4; ++r) x(r, 0) = r + 1;
        const auto split = best_split(x, {0, 0, 1, 1}, {}, {0});
        REQUIRE(split.has_value());
        CHECK(split->feature == 0);
        CHECK(split->threshold == doctest::Approx(2.5));
        CHECK(split->gain == doctest::Approx(0.5));
    }
    // constant feature: no split
    {
        Matrix x(4, 1);
        for (int r = 0; r < 4; ++r) x(r, 0) = 7.0;
        CHECK_FALSE(best_split(x, {0, 0, 1, 1}, {}, {0}).has_value());
    }
    // identical features tie-break to the lower index
    {
        Matrix x(4, 2);
        for (int r = 0; r < 4; ++r) x(r, 0) = x(r, 1) = r;
        const auto split = best_split(x, {0, 0, 1, 1}, {}, {1, 0});
        REQUIRE(split.has_value());
        CHECK(split->feature == 0);
    }
}

TEST_CASE("weighted_resample contracts") {
    // uniform weights, n draws: a bootstrap multiset of size n
    {
        const std::vector<double> w(50, 1.0);
        const auto draws = weighted_resample(50, w, 50, 9);
        CHECK(draws.size() == 50);
        for (const auto d : draws) CHECK(d < 50);
        CHECK(weighted_resample(50, w, 50, 9) == draws);  // deterministic
        CHECK(weighted_resample(50, w, 50, 10) != draws);
    }
    // single nonzero weight draws only that row
    {
        std::vector<double> w(10, 0.0);
        w[4] = 2.5;
        for (const auto d : weighted_resample(10, w, 30, 1)) CHECK(d == 4);
    }
    // undersampling: majority 100 drawn down to the minority count 10
    {
        const std::vector<double> w(100, 1.0);
        CHECK(weighted_resample(100, w, 10, 2).size() == 10);
    }
    CHECK_THROWS_AS(weighted_resample(3, {0, 0, 0}, 2, 1), ComputeError);
}

TEST_CASE("decision tree shatters XOR") {
    const auto f = xor_points();
    const auto model = fit_model(spec_of(Kind::decision_tree), f.x, f.y);
    CHECK(training_error(model, f) == 0.0);
    // pure leaves give {0,1} scores
    for (const double s : model.predict_scores(f.x)) CHECK((s == 0.0 || s == 1.0));
}

TEST_CASE("knn k=1 reproduces its own training labels") {
    Rng rng(21);
    auto f = blobs(rng, 80, 3, 1.0, 2.0);  // heavily overlapping
    ClassifierSpec spec = spec_of(Kind::knn);
    spec.hyper["k"] = 1;
    const auto model = fit_model(spec, f.x, f.y);
    CHECK(training_error(model, f) == 0.0);
}

TEST_CASE("knn agrees with exhaustive nearest-neighbour search on 200 instances") {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 5 + rng.next_below(96);
        const std::size_t d = 1 + rng.next_below(5);
        auto f = blobs(rng, n, d, 0.8, 1.2);
        const std::size_t k = 1 + 2 * rng.next_below(3);  // 1, 3 or 5
        ClassifierSpec spec = spec_of(Kind::knn);
        spec.hyper["k"] = static_cast<double>(k);
        const auto model = fit_model(spec, f.x, f.y);

        Matrix probe(1, d);
        for (std::size_t c = 0; c < d; ++c) probe(0, c) = rng.next_double(-3, 3);
        const double got = model.predict_scores(probe)[0];

        // oracle: full sort by (distance, index), take k, average labels
        std::vector<std::pair<double, std::size_t>> all(n);
        for (std::size_t r = 0; r < n; ++r) {
            double dist = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double dv = probe(0, c) - f.x(r, c);
                dist += dv * dv;
            }
            all[r] = {dist, r};
        }
        std::sort(all.begin(), all.end());
        const std::size_t kk = std::min(k, n);
        double votes = 0.0;
        for (std::size_t i = 0; i < kk; ++i) votes += f.y[all[i].second];
        CHECK(got == doctest::Approx(votes / static_cast<double>(kk)).epsilon(1e-12));
    }
}

TEST_CASE("linear svm separates well-separated blobs") {
    Rng rng(23);
    auto f = blobs(rng, 400, 2, 4.0, 0.5);
    const auto model = fit_model(spec_of(Kind::linear_svm), f.x, f.y);
    CHECK(training_error(model, f) == 0.0);
}

TEST_CASE("naive bayes posterior matches the hand-computed rule to 1e-9") {
    // 6 rows, 2 features
    Fixture f;
    f.x = Matrix(6, 2);
    const double values[6][2] = {{1, 2}, {2, 1}, {1.5, 1.5}, {6, 7}, {7, 6}, {6.5, 7.5}};
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 2; ++c) f.x(r, c) = values[r][c];
    f.y = {0, 0, 0, 1, 1, 1};
    const auto model = fit_model(spec_of(Kind::naive_bayes), f.x, f.y);

    // independent oracle: explicit gaussian densities with MLE moments
    const auto class_stats = [&](int cls, int col, double& mean, double& var) {
        mean = 0.0;
        int count = 0;
        for (int r = 0; r < 6; ++r)
            if (f.y[r] == cls) {
                mean += values[r][col];
                ++count;
            }
        mean /= count;
        var = 0.0;
        for (int r = 0; r < 6; ++r)
            if (f.y[r] == cls) var += (values[r][col] - mean) * (values[r][col] - mean);
        var /= count;
    };
    Matrix probe(1, 2);
    probe(0, 0) = 2.2;
    probe(0, 1) = 2.8;
    double joint[2];
    for (int cls = 0; cls < 2; ++cls) {
        double density = 0.5;  // equal priors
        for (int col = 0; col < 2; ++col) {
            double mean, var;
            class_stats(cls, col, mean, var);
            const double dev = probe(0, col) - mean;
            density *= std::exp(-0.5 * dev * dev / var) / std::sqrt(2.0 * M_PI * var);
        }
        joint[cls] = density;
    }
    const double oracle_posterior = joint[1] / (joint[0] + joint[1]);
    CHECK(std::abs(model.predict_scores(probe)[0] - oracle_posterior) <= 1e-9);
}

TEST_CASE("lda separates shifted gaussians and reports probabilities") {
    Rng rng(24);
    auto f = blobs(rng, 600, 3, 2.0, 1.0);
    const auto model = fit_model(spec_of(Kind::lda), f.x, f.y);
    CHECK(training_error(model, f) <= 0.05);
    for (const double s : model.predict_scores(f.x)) {
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
    }
}

TEST_CASE("mlp gradients match central finite differences") {
    Rng rng(25);
    Matrix x(5, 3);
    std::vector<std::uint8_t> y = {0, 1, 1, 0, 1};
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 3; ++c) x(r, c) = rng.next_double(-1, 1);
    MlpNet net = MlpNet::init(3, 4, rng);
    const std::vector<std::uint32_t> batch = {0, 1, 2, 3, 4};
    MlpNet grad = MlpNet::zeros_like(net);
    net.batch_gradient(x, y, batch, grad);

    const double step = 1e-5;
    const auto check_param = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + step;
        const double up = net.batch_loss(x, y, batch);
        param = saved - step;
        const double down = net.batch_loss(x, y, batch);
        param = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
        CHECK(std::abs(numeric - analytic) / scale <= 1e-4);
    };
    for (std::size_t i = 0; i < net.w1.rows(); ++i)
        for (std::size_t j = 0; j < net.w1.cols(); ++j) check_param(net.w1(i, j), grad.w1(i, j));
    for (std::size_t i = 0; i < net.b1.size(); ++i) check_param(net.b1[i], grad.b1[i]);
    for (std::size_t i = 0; i < net.w2.size(); ++i) check_param(net.w2[i], grad.w2[i]);
    check_param(net.b2, grad.b2);
}

TEST_CASE("mlp learns a separable problem") {
    Rng rng(26);
    auto f = blobs(rng, 300, 2, 2.5, 0.6);
    ClassifierSpec spec = spec_of(Kind::mlp);
    spec.hyper["epochs"] = 15;
    const auto model = fit_model(spec, f.x, f.y);
    CHECK(training_error(model, f) <= 0.02);
}

TEST_CASE("elm output weights satisfy the ridge normal equations") {
    Rng rng(27);
    auto f = blobs(rng, 250, 4, 1.5, 1.0);
    const double ridge = 1e-6;
    Rng proj_rng(seed_mix(3, 0xe13));
    const auto proj = ElmProjection::init(4, 40, proj_rng);
    const auto beta = elm_output_weights(proj, f.x, f.y, ridge);

    // residual of (H^T H + ridge I) beta = H^T y, computed directly
    const std::size_t hidden = 40;
    Matrix h(f.x.rows(), hidden);
    for (std::size_t r = 0; r < f.x.rows(); ++r) proj.hidden_row(f.x.row(r), h.row(r));
    std::vector<double> lhs(hidden, 0.0), rhs(hidden, 0.0);
    for (std::size_t i = 0; i < hidden; ++i) {
        for (std::size_t r = 0; r < f.x.rows(); ++r) {
            double hrow_beta = 0.0;
            for (std::size_t j = 0; j < hidden; ++j) hrow_beta += h(r, j) * beta[j];
            lhs[i] += h(r, i) * hrow_beta;
            rhs[i] += h(r, i) * (f.y[r] ? 1.0 : -1.0);
        }
        lhs[i] += ridge * beta[i];
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < hidden; ++i) {
        num += (lhs[i] - rhs[i]) * (lhs[i] - rhs[i]);
        den += rhs[i] * rhs[i];
    }
    CHECK(std::sqrt(num / den) <= 1e-6);
}

TEST_CASE("adaboost training error is non-increasing in rounds on separable data") {
    Rng rng(28);
    auto f = blobs(rng, 200, 2, 1.2, 0.8);
    double previous = 1.0;
    for (const int rounds : {1, 3, 10, 30, 60}) {
        ClassifierSpec spec = spec_of(Kind::adaboost);
        spec.hyper["rounds"] = rounds;
        const double err = training_error(fit_model(spec, f.x, f.y), f);
        CHECK(err <= previous + 1e-12);
        previous = err;
    }
    CHECK(previous <= 0.06);
}

TEST_CASE("adaboost with one dominant stump reduces to its vote") {
    // single perfectly separating feature: round 1 is perfect, training
    // stops, and the normalized margin is that stump's +-1 vote
    Matrix x(6, 1);
    std::vector<std::uint8_t> y(6);
    for (int r = 0; r < 6; ++r) {
        x(r, 0) = r;
        y[r] = r >= 3;
    }
    const auto model = fit_model(spec_of(Kind::adaboost), x, y);
    for (const double s : model.predict_scores(x)) CHECK((s == 1.0 || s == -1.0));
    CHECK(training_error(model, {x, y}) == 0.0);
}

TEST_CASE("rusboost handles heavy imbalance") {
    Rng rng(29);
    const std::size_t n = 330;
    Fixture f;
    f.x = Matrix(n, 2);
    f.y.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        f.y[r] = r < 30 ? 1 : 0;  // 30 attack / 300 normal
        const double mu = f.y[r] ? 2.0 : -2.0;
        f.x(r, 0) = mu + rng.next_normal();
        f.x(r, 1) = rng.next_normal();
    }
    const auto model = fit_model(spec_of(Kind::rusboost), f.x, f.y);
    CHECK(training_error(model, f) <= 0.05);
}

TEST_CASE("logitboost stays finite and learns under label noise") {
    Rng rng(30);
    auto f = blobs(rng, 300, 2, 1.5, 0.7);
    for (std::size_t r = 0; r < f.y.size(); r += 17) f.y[r] ^= 1;  // noise
    const auto model = fit_model(spec_of(Kind::logitboost), f.x, f.y);
    for (const double s : model.predict_scores(f.x)) {
        CHECK(std::isfinite(s));
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
    }
    CHECK(training_error(model, f) <= 0.15);
}

TEST_CASE("forests improve on hard noise and expose vote fractions") {
    Rng rng(31);
    auto f = blobs(rng, 240, 4, 1.0, 1.0);
    for (const Kind kind : {Kind::random_forest, Kind::bagging_trees}) {
        ClassifierSpec spec = spec_of(kind);
        spec.hyper["trees"] = 25;
        const auto model = fit_model(spec, f.x, f.y);
        CHECK(training_error(model, f) <= 0.05);
        for (const double s : model.predict_scores(f.x)) {
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
        }
    }
}

TEST_CASE("label/score coherence holds for every kind") {
    Rng rng(32);
    auto f = blobs(rng, 160, 3, 1.0, 1.5);
    Matrix probe(40, 3);
    for (std::size_t r = 0; r < 40; ++r)
        for (std::size_t c = 0; c < 3; ++c) probe(r, c) = rng.next_double(-4, 4);
    for (const Kind kind : all_kinds()) {
        ClassifierSpec spec = spec_of(kind);
        if (kind == Kind::mlp) spec.hyper["epochs"] = 3;
        if (kind == Kind::random_forest || kind == Kind::bagging_trees) spec.hyper["trees"] = 10;
        if (kind == Kind::adaboost || kind == Kind::rusboost || kind == Kind::logitboost)
            spec.hyper["rounds"] = 10;
        const auto model = fit_model(spec, f.x, f.y);
        const auto scores = model.predict_scores(probe);
        const auto labels = model.predict_labels(probe);
        const double threshold = model.score_threshold();
        for (std::size_t i = 0; i < scores.size(); ++i)
            CHECK(labels[i] == (scores[i] > threshold ? 1 : 0));
    }
}

TEST_CASE("fit determinism and permutation invariance") {
    Rng rng(33);
    auto f = blobs(rng, 120, 3, 1.0, 1.2);
    Matrix probe(25, 3);
    for (std::size_t r = 0; r < 25; ++r)
        for (std::size_t c = 0; c < 3; ++c) probe(r, c) = rng.next_double(-3, 3);

    // permuted copy of the training data
    std::vector<std::uint32_t> perm(f.x.rows());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::uint32_t>(i);
    rng.shuffle(perm);
    Fixture g;
    g.x = Matrix(f.x.rows(), 3);
    g.y.resize(f.y.size());
    for (std::size_t r = 0; r < perm.size(); ++r) {
        g.y[r] = f.y[perm[r]];
        for (std::size_t c = 0; c < 3; ++c) g.x(r, c) = f.x(perm[r], c);
    }

    for (const Kind kind : all_kinds()) {
        ClassifierSpec spec = spec_of(kind, 77);
        if (kind == Kind::mlp) spec.hyper["epochs"] = 2;
        if (kind == Kind::random_forest || kind == Kind::bagging_trees) spec.hyper["trees"] = 8;
        if (kind == Kind::adaboost || kind == Kind::rusboost || kind == Kind::logitboost)
            spec.hyper["rounds"] = 8;
        const auto a = fit_model(spec, f.x, f.y).predict_scores(probe);
        const auto b = fit_model(spec, f.x, f.y).predict_scores(probe);
        CHECK(a == b);  // bit-exact determinism

        const bool order_free = kind == Kind::naive_bayes || kind == Kind::lda ||
                                kind == Kind::knn || kind == Kind::decision_tree ||
                                kind == Kind::elm;
        if (order_free) {
            const auto c = fit_model(spec, g.x, g.y).predict_labels(probe);
            const auto base = fit_model(spec, f.x, f.y).predict_labels(probe);
            CHECK(c == base);
        }
    }
}

TEST_CASE("single-class training data yields a constant degenerate model") {
    Matrix x(5, 2);
    for (std::size_t r = 0; r < 5; ++r) {
        x(r, 0) = static_cast<double>(r);
        x(r, 1) = 1.0;
    }
    for (const Kind kind : all_kinds()) {
        const auto model = fit_model(spec_of(kind), x, {1, 1, 1, 1, 1});
        const auto scores = model.predict_scores(x);
        const auto labels = model.predict_labels(x);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(scores[i] == scores[0]);
            CHECK(labels[i] == 1);
        }
        const auto negative = fit_model(spec_of(kind), x, {0, 0, 0, 0, 0});
        for (const auto l : negative.predict_labels(x)) CHECK(l == 0);
    }
}

TEST_CASE("spec validation rejects unknown hyperparameters") {
    ClassifierSpec spec = spec_of(Kind::knn);
    spec.hyper["neighbors"] = 3;
    CHECK_THROWS_AS(validate_spec(spec), ConfigError);
    CHECK_THROWS_AS(fit_model(spec, Matrix(2, 1), {0, 1}), ConfigError);
    CHECK_THROWS_AS(parse_kind("svm_rbf"), ConfigError);
    CHECK(parse_kind("adaboost") == Kind::adaboost);
}

TEST_CASE("predict rejects mismatched dimensions and fit rejects NaN") {
    Rng rng(34);
    auto f = blobs(rng, 30, 2, 2.0, 0.5);
    const auto model = fit_model(spec_of(Kind::decision_tree), f.x, f.y);
    CHECK_THROWS_AS(model.predict_scores(Matrix(3, 5)), ComputeError);

    Matrix bad = f.x;
    bad(4, 1) = std::nan("");
    CHECK_THROWS_AS(fit_model(spec_of(Kind::decision_tree), bad, f.y), ComputeError);
}

TEST_CASE("model save/load round-trips predictions bit-exactly") {
    Rng rng(35);
    auto f = blobs(rng, 90, 3, 1.1, 1.0);
    Matrix probe(20, 3);
    for (std::size_t r = 0; r < 20; ++r)
        for (std::size_t c = 0; c < 3; ++c) probe(r, c) = rng.next_double(-3, 3);
    const auto dir = std::filesystem::temp_directory_path();
    for (const Kind kind : all_kinds()) {
        ClassifierSpec spec = spec_of(kind, 11);
        if (kind == Kind::mlp) spec.hyper["epochs"] = 2;
        if (kind == Kind::random_forest || kind == Kind::bagging_trees) spec.hyper["trees"] = 6;
        if (kind == Kind::adaboost || kind == Kind::rusboost || kind == Kind::logitboost)
            spec.hyper["rounds"] = 6;
        const auto model = fit_model(spec, f.x, f.y);
        const auto path = (dir / (std::string("ids_model_") + to_string(kind) + ".json")).string();
        save_model(model, path);
        const auto loaded = load_model(path);
        CHECK(loaded.kind == model.kind);
        CHECK(loaded.input_dimension == model.input_dimension);
        CHECK(loaded.predict_scores(probe) == model.predict_scores(probe));
        std::remove(path.c_str());
    }
}

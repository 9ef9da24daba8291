#include <algorithm>
#include <array>
#include <cmath>

#include "ids/kernels.hpp"
#include "ids/linalg.hpp"
#include "ids/nets.hpp"
#include "model_impl.hpp"

// Gaussian naive Bayes and binary LDA with diagonal shrinkage.

namespace ids::clf {

namespace {

class NaiveBayesImpl final : public ModelImpl {
public:
    std::array<double, 2> log_prior{};
    std::array<std::vector<double>, 2> mean;
    std::array<std::vector<double>, 2> var;

    void predict_scores(const Matrix& x, std::vector<double>& out) const override {
        const std::size_t d = mean[0].size();
        out.resize(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const double* row = x.row(r);
            double log_like[2];
            for (int c = 0; c < 2; ++c) {
                double acc = log_prior[c];
                for (std::size_t j = 0; j < d; ++j) {
                    const double dev = row[j] - mean[c][j];
                    acc += -0.5 * (std::log(6.283185307179586 * var[c][j]) +
                                   dev * dev / var[c][j]);
                }
                log_like[c] = acc;
            }
            // posterior of the attack class via log-sum-exp
            const double hi = std::max(log_like[0], log_like[1]);
            const double z0 = std::exp(log_like[0] - hi), z1 = std::exp(log_like[1] - hi);
            out[r] = z1 / (z0 + z1);
        }
    }

    json params() const override {
        return json{{"log_prior", log_prior},
                    {"mean", mean},
                    {"var", var}};
    }
};

class LdaImpl final : public ModelImpl {
public:
    std::vector<double> weights;
    double bias = 0.0;

    void predict_scores(const Matrix& x, std::vector<double>& out) const override {
        out.resize(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r)
            out[r] = sigmoid(kern::dot(x.row(r), weights.data(), weights.size()) + bias);
    }

    json params() const override { return json{{"weights", weights}, {"bias", bias}}; }
};

}  // namespace

ImplPtr fit_naive_bayes(const FitInputs& in) {
    const std::size_t n = in.x.rows(), d = in.x.cols();
    auto impl = std::make_shared<NaiveBayesImpl>();
    std::array<std::size_t, 2> count{};
    for (int c = 0; c < 2; ++c) {
        impl->mean[c].assign(d, 0.0);
        impl->var[c].assign(d, 0.0);
    }
    for (std::size_t r = 0; r < n; ++r) {
        const int c = in.labels[r];
        ++count[c];
        kern::axpy(1.0, in.x.row(r), impl->mean[c].data(), d);
    }
    for (int c = 0; c < 2; ++c)
        kern::scale(1.0 / static_cast<double>(count[c]), impl->mean[c].data(), d);
    std::vector<double> overall_mean(d, 0.0), overall_ss(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) kern::axpy(1.0, in.x.row(r), overall_mean.data(), d);
    kern::scale(1.0 / static_cast<double>(n), overall_mean.data(), d);
    for (std::size_t r = 0; r < n; ++r) {
        const int c = in.labels[r];
        const double* row = in.x.row(r);
        for (std::size_t j = 0; j < d; ++j) {
            const double dev_c = row[j] - impl->mean[c][j];
            impl->var[c][j] += dev_c * dev_c;
            const double dev = row[j] - overall_mean[j];
            overall_ss[j] += dev * dev;
        }
    }
    double max_overall_var = 0.0;
    for (std::size_t j = 0; j < d; ++j)
        max_overall_var = std::max(max_overall_var, overall_ss[j] / static_cast<double>(n));
    const double floor =
        std::max(hyper_value(in.spec, "var_floor_scale") * max_overall_var, 1e-300);
    for (int c = 0; c < 2; ++c) {
        impl->log_prior[c] =
            std::log(static_cast<double>(count[c]) / static_cast<double>(n));
        for (std::size_t j = 0; j < d; ++j)
            impl->var[c][j] = std::max(impl->var[c][j] / static_cast<double>(count[c]), floor);
    }
    return impl;
}

ImplPtr naive_bayes_from_json(const json& params) {
    auto impl = std::make_shared<NaiveBayesImpl>();
    impl->log_prior = params.at("log_prior").get<std::array<double, 2>>();
    impl->mean = params.at("mean").get<std::array<std::vector<double>, 2>>();
    impl->var = params.at("var").get<std::array<std::vector<double>, 2>>();
    return impl;
}

ImplPtr fit_lda(const FitInputs& in) {
    const std::size_t n = in.x.rows(), d = in.x.cols();
    std::array<std::vector<double>, 2> mean;
    std::array<std::size_t, 2> count{};
    for (int c = 0; c < 2; ++c) mean[c].assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const int c = in.labels[r];
        ++count[c];
        kern::axpy(1.0, in.x.row(r), mean[c].data(), d);
    }
    for (int c = 0; c < 2; ++c)
        kern::scale(1.0 / static_cast<double>(count[c]), mean[c].data(), d);

    // pooled within-class covariance, divisor n - 2
    Matrix pooled(d, d);
    std::vector<double> dev(d);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = in.x.row(r);
        const auto& mu = mean[in.labels[r]];
        for (std::size_t j = 0; j < d; ++j) dev[j] = row[j] - mu[j];
        for (std::size_t j = 0; j < d; ++j)
            kern::axpy(dev[j], dev.data() + j, pooled.row(j) + j, d - j);
    }
    const double divisor = static_cast<double>(n > 2 ? n - 2 : 1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            pooled(i, j) /= divisor;
            pooled(j, i) = pooled(i, j);
        }
    double trace = 0.0;
    for (std::size_t j = 0; j < d; ++j) trace += pooled(j, j);
    const double ridge = hyper_value(in.spec, "shrinkage") * trace / static_cast<double>(d);
    for (std::size_t j = 0; j < d; ++j) pooled(j, j) += ridge;

    std::vector<double> diff(d);
    for (std::size_t j = 0; j < d; ++j) diff[j] = mean[1][j] - mean[0][j];
    auto impl = std::make_shared<LdaImpl>();
    impl->weights = cholesky_solve(std::move(pooled), diff);
    std::vector<double> mid(d);
    for (std::size_t j = 0; j < d; ++j) mid[j] = 0.5 * (mean[0][j] + mean[1][j]);
    impl->bias = -kern::dot(impl->weights.data(), mid.data(), d) +
                 std::log(static_cast<double>(count[1]) / static_cast<double>(count[0]));
    return impl;
}

ImplPtr lda_from_json(const json& params) {
    auto impl = std::make_shared<LdaImpl>();
    impl->weights = params.at("weights").get<std::vector<double>>();
    impl->bias = params.at("bias").get<double>();
    return impl;
}

}  // namespace ids::clf

#include <cmath>
#include <numeric>

#include "ids/error.hpp"
#include "ids/kernels.hpp"
#include "ids/rng.hpp"
#include "model_impl.hpp"

// Linear SVM trained with the Pegasos stochastic subgradient schedule.

namespace ids::clf {

namespace {

class LinearSvmImpl final : public ModelImpl {
public:
    std::vector<double> w;
    double b = 0.0;

    void predict_scores(const Matrix& x, std::vector<double>& out) const override {
        out.resize(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r)
            out[r] = kern::dot(x.row(r), w.data(), w.size()) + b;
    }

    json params() const override { return json{{"w", w}, {"b", b}}; }
};

}  // namespace

ImplPtr fit_linear_svm(const FitInputs& in) {
    const std::size_t n = in.x.rows(), d = in.x.cols();
    const double lambda = hyper_value(in.spec, "lambda");
    const auto epochs = static_cast<std::size_t>(hyper_value(in.spec, "epochs"));

    // bias handled as an augmented, regularized coordinate; the
    // projection step onto the 1/sqrt(lambda) ball keeps the huge
    // early 1/(lambda t) steps from dominating
    std::vector<double> w(d + 1, 0.0);
    const double radius = 1.0 / std::sqrt(lambda);
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(seed_mix(in.spec.seed, 0x51));
    std::uint64_t t = 0;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (const std::uint32_t r : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double y = in.labels[r] ? 1.0 : -1.0;
            const double margin = y * (kern::dot(in.x.row(r), w.data(), d) + w[d]);
            kern::scale(1.0 - eta * lambda, w.data(), d + 1);
            if (margin < 1.0) {
                kern::axpy(eta * y, in.x.row(r), w.data(), d);
                w[d] += eta * y;
            }
            const double norm_sq = kern::dot(w.data(), w.data(), d + 1);
            if (norm_sq > radius * radius)
                kern::scale(radius / std::sqrt(norm_sq), w.data(), d + 1);
        }
        double norm = 0.0;
        for (const double v : w) norm += std::abs(v);
        if (!std::isfinite(norm))
            throw ComputeError("linear_svm: weights diverged at epoch " +
                               std::to_string(epoch + 1));
    }
    auto impl = std::make_shared<LinearSvmImpl>();
    impl->b = w[d];
    w.pop_back();
    impl->w = std::move(w);
    return impl;
}

ImplPtr linear_svm_from_json(const json& params) {
    auto impl = std::make_shared<LinearSvmImpl>();
    impl->w = params.at("w").get<std::vector<double>>();
    impl->b = params.at("b").get<double>();
    return impl;
}

}  // namespace ids::clf

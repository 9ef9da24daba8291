#include "ids/nets.hpp"

#include <cmath>
#include <numeric>

#include "ids/error.hpp"
#include "ids/kernels.hpp"
#include "ids/linalg.hpp"
#include "model_impl.hpp"

namespace ids::clf {

MlpNet MlpNet::init(std::size_t input_dim, std::size_t hidden, Rng& rng) {
    MlpNet net;
    net.w1 = Matrix(hidden, input_dim);
    net.b1.assign(hidden, 0.0);
    net.w2.assign(hidden, 0.0);
    const double limit1 = std::sqrt(6.0 / static_cast<double>(input_dim + hidden));
    for (std::size_t i = 0; i < hidden; ++i)
        for (std::size_t j = 0; j < input_dim; ++j)
            net.w1(i, j) = rng.next_double(-limit1, limit1);
    const double limit2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
    for (std::size_t i = 0; i < hidden; ++i) net.w2[i] = rng.next_double(-limit2, limit2);
    return net;
}

MlpNet MlpNet::zeros_like(const MlpNet& shape) {
    MlpNet net;
    net.w1 = Matrix(shape.w1.rows(), shape.w1.cols());
    net.b1.assign(shape.b1.size(), 0.0);
    net.w2.assign(shape.w2.size(), 0.0);
    net.b2 = 0.0;
    return net;
}

double MlpNet::forward(const double* row, std::vector<double>& hidden_scratch) const {
    const std::size_t hidden = w2.size();
    hidden_scratch.resize(hidden);
    kern::matvec(w1.data(), hidden, w1.cols(), row, hidden_scratch.data());
    for (std::size_t i = 0; i < hidden; ++i)
        hidden_scratch[i] = sigmoid(hidden_scratch[i] + b1[i]);
    return sigmoid(kern::dot(w2.data(), hidden_scratch.data(), hidden) + b2);
}

namespace {

// cross-entropy, clamped away from log(0)
inline double xent(double p, double y) {
    const double eps = 1e-12;
    p = std::min(std::max(p, eps), 1.0 - eps);
    return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

}  // namespace

double MlpNet::batch_loss(const Matrix& x, const std::vector<std::uint8_t>& y,
                          const std::vector<std::uint32_t>& batch) const {
    std::vector<double> hidden;
    double loss = 0.0;
    for (const std::uint32_t r : batch)
        loss += xent(forward(x.row(r), hidden), y[r] ? 1.0 : 0.0);
    return loss / static_cast<double>(batch.size());
}

double MlpNet::batch_gradient(const Matrix& x, const std::vector<std::uint8_t>& y,
                              const std::vector<std::uint32_t>& batch, MlpNet& grad) const {
    const std::size_t hidden = w2.size(), d = w1.cols();
    std::vector<double> h(hidden);
    double loss = 0.0;
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (const std::uint32_t r : batch) {
        const double* row = x.row(r);
        const double target = y[r] ? 1.0 : 0.0;
        const double p = forward(row, h);
        loss += xent(p, target);
        const double delta_out = (p - target) * inv;  // dCE/dz for sigmoid output
        kern::axpy(delta_out, h.data(), grad.w2.data(), hidden);
        grad.b2 += delta_out;
        for (std::size_t i = 0; i < hidden; ++i) {
            const double delta_h = delta_out * w2[i] * h[i] * (1.0 - h[i]);
            if (delta_h == 0.0) continue;
            kern::axpy(delta_h, row, grad.w1.row(i), d);
            grad.b1[i] += delta_h;
        }
    }
    return loss * inv;
}

void MlpNet::step(const MlpNet& grad, double learning_rate) {
    kern::axpy(-learning_rate, grad.w1.data(), w1.data(), w1.rows() * w1.cols());
    kern::axpy(-learning_rate, grad.b1.data(), b1.data(), b1.size());
    kern::axpy(-learning_rate, grad.w2.data(), w2.data(), w2.size());
    b2 -= learning_rate * grad.b2;
}

ElmProjection ElmProjection::init(std::size_t input_dim, std::size_t hidden, Rng& rng) {
    ElmProjection proj;
    proj.w = Matrix(hidden, input_dim);
    proj.b.resize(hidden);
    for (std::size_t i = 0; i < hidden; ++i)
        for (std::size_t j = 0; j < input_dim; ++j) proj.w(i, j) = rng.next_double(-1.0, 1.0);
    for (std::size_t i = 0; i < hidden; ++i) proj.b[i] = rng.next_double(-1.0, 1.0);
    return proj;
}

void ElmProjection::hidden_row(const double* row, double* out) const {
    const std::size_t hidden = b.size();
    kern::matvec(w.data(), hidden, w.cols(), row, out);
    for (std::size_t i = 0; i < hidden; ++i) out[i] = sigmoid(out[i] + b[i]);
}

std::vector<double> elm_output_weights(const ElmProjection& proj, const Matrix& x,
                                       const std::vector<std::uint8_t>& labels, double ridge) {
    const std::size_t n = x.rows(), hidden = proj.b.size();
    Matrix gram(hidden, hidden);  // upper triangle of H^T H
    std::vector<double> hty(hidden, 0.0);
    std::vector<double> h(hidden);
    for (std::size_t r = 0; r < n; ++r) {
        proj.hidden_row(x.row(r), h.data());
        const double y = labels[r] ? 1.0 : -1.0;
        kern::axpy(y, h.data(), hty.data(), hidden);
        for (std::size_t i = 0; i < hidden; ++i)
            kern::axpy(h[i], h.data() + i, gram.row(i) + i, hidden - i);
    }
    for (std::size_t i = 0; i < hidden; ++i) {
        gram(i, i) += ridge;
        for (std::size_t j = i + 1; j < hidden; ++j) gram(j, i) = gram(i, j);
    }
    return cholesky_solve(std::move(gram), std::move(hty));
}

namespace {

class MlpImpl final : public ModelImpl {
public:
    MlpNet net;

    void predict_scores(const Matrix& x, std::vector<double>& out) const override {
        out.resize(x.rows());
        std::vector<double> h;
        for (std::size_t r = 0; r < x.rows(); ++r) out[r] = net.forward(x.row(r), h);
    }

    json params() const override {
        return json{{"w1", std::vector<double>(net.w1.data(),
                                               net.w1.data() + net.w1.rows() * net.w1.cols())},
                    {"hidden", net.w1.rows()},
                    {"input_dim", net.w1.cols()},
                    {"b1", net.b1},
                    {"w2", net.w2},
                    {"b2", net.b2}};
    }
};

class ElmImpl final : public ModelImpl {
public:
    ElmProjection proj;
    std::vector<double> beta;

    void predict_scores(const Matrix& x, std::vector<double>& out) const override {
        out.resize(x.rows());
        std::vector<double> h(proj.b.size());
        for (std::size_t r = 0; r < x.rows(); ++r) {
            proj.hidden_row(x.row(r), h.data());
            out[r] = kern::dot(h.data(), beta.data(), beta.size());
        }
    }

    json params() const override {
        return json{{"w", std::vector<double>(proj.w.data(),
                                              proj.w.data() + proj.w.rows() * proj.w.cols())},
                    {"hidden", proj.w.rows()},
                    {"input_dim", proj.w.cols()},
                    {"b", proj.b},
                    {"beta", beta}};
    }
};

Matrix matrix_from_flat(const std::vector<double>& flat, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    std::copy(flat.begin(), flat.end(), m.data());
    return m;
}

}  // namespace

ImplPtr fit_mlp(const FitInputs& in) {
    const std::size_t n = in.x.rows();
    const auto hidden = static_cast<std::size_t>(hyper_value(in.spec, "hidden"));
    const auto epochs = static_cast<std::size_t>(hyper_value(in.spec, "epochs"));
    const auto batch_size = static_cast<std::size_t>(hyper_value(in.spec, "batch"));
    const double lr = hyper_value(in.spec, "learning_rate");

    Rng rng(seed_mix(in.spec.seed, 0x317));
    auto impl = std::make_shared<MlpImpl>();
    impl->net = MlpNet::init(in.x.cols(), hidden, rng);
    MlpNet grad = MlpNet::zeros_like(impl->net);

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::vector<std::uint32_t> batch;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += batch_size) {
            const std::size_t stop = std::min(start + batch_size, n);
            batch.assign(order.begin() + start, order.begin() + stop);
            grad = MlpNet::zeros_like(impl->net);
            epoch_loss += impl->net.batch_gradient(in.x, in.labels, batch, grad);
            impl->net.step(grad, lr);
            ++batches;
        }
        if (!std::isfinite(epoch_loss))
            throw ComputeError("mlp: non-finite loss at epoch " + std::to_string(epoch + 1));
    }
    return impl;
}

ImplPtr mlp_from_json(const json& params) {
    auto impl = std::make_shared<MlpImpl>();
    const auto hidden = params.at("hidden").get<std::size_t>();
    const auto input_dim = params.at("input_dim").get<std::size_t>();
    impl->net.w1 =
        matrix_from_flat(params.at("w1").get<std::vector<double>>(), hidden, input_dim);
    impl->net.b1 = params.at("b1").get<std::vector<double>>();
    impl->net.w2 = params.at("w2").get<std::vector<double>>();
    impl->net.b2 = params.at("b2").get<double>();
    return impl;
}

ImplPtr fit_elm(const FitInputs& in) {
    const auto hidden = static_cast<std::size_t>(hyper_value(in.spec, "hidden"));
    const double ridge = hyper_value(in.spec, "ridge");
    Rng rng(seed_mix(in.spec.seed, 0xe13));
    auto impl = std::make_shared<ElmImpl>();
    impl->proj = ElmProjection::init(in.x.cols(), hidden, rng);
    impl->beta = elm_output_weights(impl->proj, in.x, in.labels, ridge);
    return impl;
}

ImplPtr elm_from_json(const json& params) {
    auto impl = std::make_shared<ElmImpl>();
    const auto hidden = params.at("hidden").get<std::size_t>();
    const auto input_dim = params.at("input_dim").get<std::size_t>();
    impl->proj.w = matrix_from_flat(params.at("w").get<std::vector<double>>(), hidden, input_dim);
    impl->proj.b = params.at("b").get<std::vector<double>>();
    impl->beta = params.at("beta").get<std::vector<double>>();
    return impl;
}

}  // namespace ids::clf

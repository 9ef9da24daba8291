#pragma once

// Internals of the two network learners. Exposed separately so the
// gradient and normal-equation checks can poke at them directly.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ids/matrix.hpp"
#include "ids/rng.hpp"

namespace ids::clf {

inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// One hidden layer of logistic units with a sigmoid output, trained by
// mini-batch gradient descent on cross-entropy.
struct MlpNet {
    Matrix w1;                // hidden x input
    std::vector<double> b1;   // hidden
    std::vector<double> w2;   // hidden
    double b2 = 0.0;

    static MlpNet init(std::size_t input_dim, std::size_t hidden, Rng& rng);

    double forward(const double* row, std::vector<double>& hidden_scratch) const;

    // Mean cross-entropy over the batch.
    double batch_loss(const Matrix& x, const std::vector<std::uint8_t>& y,
                      const std::vector<std::uint32_t>& batch) const;

    // Accumulates mean-gradient over the batch into a net-shaped
    // gradient holder; returns the batch loss.
    double batch_gradient(const Matrix& x, const std::vector<std::uint8_t>& y,
                          const std::vector<std::uint32_t>& batch, MlpNet& grad) const;

    void step(const MlpNet& grad, double learning_rate);
    static MlpNet zeros_like(const MlpNet& shape);
};

// Random-projection hidden layer; h(x) = sigmoid(W x + b).
struct ElmProjection {
    Matrix w;                // hidden x input, uniform [-1, 1]
    std::vector<double> b;   // hidden, uniform [-1, 1]

    static ElmProjection init(std::size_t input_dim, std::size_t hidden, Rng& rng);
    void hidden_row(const double* row, double* out) const;
};

// Solves (H^T H + ridge I) beta = H^T y for targets y in {-1, +1}.
std::vector<double> elm_output_weights(const ElmProjection& proj, const Matrix& x,
                                       const std::vector<std::uint8_t>& labels, double ridge);

}  // namespace ids::clf

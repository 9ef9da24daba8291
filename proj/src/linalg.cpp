#include "ids/linalg.hpp"

#include <cmath>

#include "ids/error.hpp"

namespace ids {

std::vector<double> cholesky_solve(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw ComputeError("cholesky_solve: dimension mismatch");
    // in-place lower Cholesky
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= a(j, k) * a(j, k);
        if (diag <= 0.0) throw ComputeError("cholesky_solve: matrix not positive definite");
        const double root = std::sqrt(diag);
        a(j, j) = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= a(i, k) * a(j, k);
            a(i, j) = v / root;
        }
    }
    // forward then backward substitution
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= a(i, k) * b[k];
        b[i] = v / a(i, i);
    }
    for (std::size_t ii = n; ii > 0; --ii) {
        const std::size_t i = ii - 1;
        double v = b[i];
        for (std::size_t k = i + 1; k < n; ++k) v -= a(k, i) * b[k];
        b[i] = v / a(i, i);
    }
    return b;
}

}  // namespace ids

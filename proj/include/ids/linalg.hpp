#pragma once

// Small dense solvers for the d <= ~100 systems in LDA and the ELM
// output layer.

#include <vector>

#include "ids/matrix.hpp"

namespace ids {

// Solves A x = b for symmetric positive definite A via Cholesky.
// Throws ComputeError when A is not positive definite.
std::vector<double> cholesky_solve(Matrix a, std::vector<double> b);

}  // namespace ids

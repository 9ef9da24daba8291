#pragma once

// Dense double-precision kernels used by the numeric inner loops
// (covariance accumulation, PCA projection, nearest-neighbour scans,
// linear/net model training).
//
// Every kernel has a scalar reference implementation and an AVX2+FMA
// variant. The active variant is picked once at startup from CPUID and
// can be overridden with set_backend() or the IDS_KERNEL_BACKEND
// environment variable (values: "scalar", "avx2"). Scalar and AVX2
// accumulate in different orders, so results may differ by a few ulps;
// the equivalence tests bound that drift.

#include <cstddef>

namespace ids::kern {

enum class Backend { scalar, avx2 };

// Currently dispatched backend.
Backend active();

// Best backend supported by this CPU.
Backend preferred();

// Returns false (and leaves the dispatch unchanged) if the CPU lacks
// the requested instruction set.
bool set_backend(Backend b);

const char* backend_name(Backend b);

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i (a[i] - b[i])^2
double squared_distance(const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// x[i] *= alpha
void scale(double alpha, double* x, std::size_t n);

// sum_i x[i]
double sum(const double* x, std::size_t n);

// y = A * x for row-major A (rows x cols)
void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);

}  // namespace ids::kern

#include "ids/kernels.hpp"

// AVX2+FMA kernels. This translation unit is compiled with
// -mavx2 -mfma; it must only be entered after the CPUID check in
// kernels.cpp.

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

namespace ids::kern::detail {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(double alpha, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

void matvec_avx2(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r)
        y[r] = dot_avx2(a + r * cols, x, cols);
}

}  // namespace ids::kern::detail

#else  // non-x86: never dispatched, forward to the scalar kernels

namespace ids::kern::detail {

double dot_scalar(const double*, const double*, std::size_t);
double squared_distance_scalar(const double*, const double*, std::size_t);
void axpy_scalar(double, const double*, double*, std::size_t);
void scale_scalar(double, double*, std::size_t);
double sum_scalar(const double*, std::size_t);
void matvec_scalar(const double*, std::size_t, std::size_t, const double*, double*);

double dot_avx2(const double* a, const double* b, std::size_t n) { return dot_scalar(a, b, n); }
double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    return squared_distance_scalar(a, b, n);
}
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    axpy_scalar(alpha, x, y, n);
}
void scale_avx2(double alpha, double* x, std::size_t n) { scale_scalar(alpha, x, n); }
double sum_avx2(const double* x, std::size_t n) { return sum_scalar(x, n); }
void matvec_avx2(const double* a, std::size_t rows, std::size_t cols, const double* x,
                 double* y) {
    matvec_scalar(a, rows, cols, x, y);
}

}  // namespace ids::kern::detail

#endif

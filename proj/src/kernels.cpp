#include "ids/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ids::kern {

namespace detail {

double dot_scalar(const double*, const double*, std::size_t);
double squared_distance_scalar(const double*, const double*, std::size_t);
void axpy_scalar(double, const double*, double*, std::size_t);
void scale_scalar(double, double*, std::size_t);
double sum_scalar(const double*, std::size_t);
void matvec_scalar(const double*, std::size_t, std::size_t, const double*, double*);

double dot_avx2(const double*, const double*, std::size_t);
double squared_distance_avx2(const double*, const double*, std::size_t);
void axpy_avx2(double, const double*, double*, std::size_t);
void scale_avx2(double, double*, std::size_t);
double sum_avx2(const double*, std::size_t);
void matvec_avx2(const double*, std::size_t, std::size_t, const double*, double*);

}  // namespace detail

namespace {

struct Dispatch {
    Backend backend;
    double (*dot)(const double*, const double*, std::size_t);
    double (*squared_distance)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scale)(double, double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    void (*matvec)(const double*, std::size_t, std::size_t, const double*, double*);
};

constexpr Dispatch kScalar = {
    Backend::scalar,
    detail::dot_scalar,    detail::squared_distance_scalar,
    detail::axpy_scalar,   detail::scale_scalar,
    detail::sum_scalar,    detail::matvec_scalar,
};

constexpr Dispatch kAvx2 = {
    Backend::avx2,
    detail::dot_avx2,      detail::squared_distance_avx2,
    detail::axpy_avx2,     detail::scale_avx2,
    detail::sum_avx2,      detail::matvec_avx2,
};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Dispatch initial_dispatch() {
    Backend best = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
    if (const char* env = std::getenv("IDS_KERNEL_BACKEND")) {
        if (std::strcmp(env, "scalar") == 0) best = Backend::scalar;
        else if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) best = Backend::avx2;
    }
    return best == Backend::avx2 ? kAvx2 : kScalar;
}

Dispatch g_dispatch = initial_dispatch();

}  // namespace

Backend active() { return g_dispatch.backend; }

Backend preferred() { return cpu_has_avx2() ? Backend::avx2 : Backend::scalar; }

bool set_backend(Backend b) {
    if (b == Backend::avx2) {
        if (!cpu_has_avx2()) return false;
        g_dispatch = kAvx2;
    } else {
        g_dispatch = kScalar;
    }
    return true;
}

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

double dot(const double* a, const double* b, std::size_t n) {
    return g_dispatch.dot(a, b, n);
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    return g_dispatch.squared_distance(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    g_dispatch.axpy(alpha, x, y, n);
}

void scale(double alpha, double* x, std::size_t n) {
    g_dispatch.scale(alpha, x, n);
}

double sum(const double* x, std::size_t n) {
    return g_dispatch.sum(x, n);
}

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
    g_dispatch.matvec(a, rows, cols, x, y);
}

}  // namespace ids::kern

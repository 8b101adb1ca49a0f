#include "ap/kernels.hpp"

#include <cmath>
#include <limits>

namespace ap::kern {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void add(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void tanh_grad(const double* y, double* g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) g[i] *= 1.0 - y[i] * y[i];
}

}  // namespace scalar

#if defined(AP_HAVE_AVX2)
namespace avx2 {
bool supported();
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void add(const double* x, double* y, std::size_t n);
void tanh_grad(const double* y, double* g, std::size_t n);
}  // namespace avx2
#endif

namespace {

struct Table {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scale)(double, double*, std::size_t);
    void (*add)(const double*, double*, std::size_t);
    void (*tanh_grad)(const double*, double*, std::size_t);
};

constexpr Table kScalarTable{scalar::dot, scalar::axpy, scalar::scale, scalar::add,
                             scalar::tanh_grad};

#if defined(AP_HAVE_AVX2)
constexpr Table kAvx2Table{avx2::dot, avx2::axpy, avx2::scale, avx2::add, avx2::tanh_grad};
#endif

bool avx2_usable() {
#if defined(AP_HAVE_AVX2)
    return avx2::supported();
#else
    return false;
#endif
}

Backend detect_backend() { return avx2_usable() ? Backend::kAvx2 : Backend::kScalar; }

Backend g_backend = detect_backend();

const Table& table() {
#if defined(AP_HAVE_AVX2)
    if (g_backend == Backend::kAvx2) return kAvx2Table;
#endif
    return kScalarTable;
}

}  // namespace

Backend active_backend() { return g_backend; }

bool set_backend(Backend b) {
    if (b == Backend::kAvx2 && !avx2_usable()) return false;
    g_backend = b;
    return true;
}

void reset_backend() { g_backend = detect_backend(); }

std::string backend_name() { return g_backend == Backend::kAvx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    table().axpy(alpha, x, y, n);
}

void scale(double alpha, double* x, std::size_t n) { table().scale(alpha, x, n); }

void add(const double* x, double* y, std::size_t n) { table().add(x, y, n); }

void tanh_grad(const double* y, double* g, std::size_t n) { table().tanh_grad(y, g, n); }

void matvec(const double* w, std::size_t rows, std::size_t cols, const double* x,
            const double* b, double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        y[r] = table().dot(w + r * cols, x, cols) + (b ? b[r] : 0.0);
    }
}

void matvec_t_accum(const double* w, std::size_t rows, std::size_t cols, const double* g,
                    double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        if (g[r] != 0.0) table().axpy(g[r], w + r * cols, out, cols);
    }
}

void ger(double alpha, const double* u, std::size_t rows, const double* v, std::size_t cols,
         double* w) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double a = alpha * u[r];
        if (a != 0.0) table().axpy(a, v, w + r * cols, cols);
    }
}

void tanh_inplace(double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::tanh(x[i]);
}

double softmax_inplace(double* x, std::size_t n) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, x[i]);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::exp(x[i] - mx);
        sum += x[i];
    }
    const double inv = 1.0 / sum;
    for (std::size_t i = 0; i < n; ++i) x[i] *= inv;
    return std::log(sum) + mx;
}

}  // namespace ap::kern

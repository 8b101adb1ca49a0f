#pragma once
// Dense double-precision kernels backing the policy/detector math.
//
// Every kernel has a scalar reference implementation and, on x86 CPUs with
// AVX2+FMA, a vectorized variant. The backend is picked once at startup from
// CPU features; tests may force either backend to cross-check results.
// Transcendentals (tanh, exp) are deliberately scalar so both backends share
// identical libm values on those paths.

#include <cstddef>
#include <string>

namespace ap::kern {

enum class Backend { kScalar, kAvx2 };

Backend active_backend();
// Force a backend; returns false (and leaves the selection unchanged) if the
// requested backend is not available on this CPU/build.
bool set_backend(Backend b);
void reset_backend();
std::string backend_name();

// y . x over n elements
double dot(const double* a, const double* b, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// x *= alpha
void scale(double alpha, double* x, std::size_t n);
// y += x
void add(const double* x, double* y, std::size_t n);
// g[i] *= (1 - y[i]^2); backward through tanh activations y
void tanh_grad(const double* y, double* g, std::size_t n);

// y = W x (+ b); W row-major [rows x cols]; b may be null
void matvec(const double* w, std::size_t rows, std::size_t cols, const double* x,
            const double* b, double* y);
// out += W^T g; W row-major [rows x cols], g has rows entries, out has cols
void matvec_t_accum(const double* w, std::size_t rows, std::size_t cols, const double* g,
                    double* out);
// W += alpha * u v^T; u has rows entries, v has cols
void ger(double alpha, const double* u, std::size_t rows, const double* v, std::size_t cols,
         double* w);

// scalar transcendental paths
void tanh_inplace(double* x, std::size_t n);
// numerically stable softmax; returns log(sum exp(x - max)) + max for log-prob use
double softmax_inplace(double* x, std::size_t n);

}  // namespace ap::kern

#include "ap/kernels.hpp"

#include "ap/core.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace ap;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.sym(scale);
    return v;
}

bool close(double a, double b, double rel = 1e-12) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= rel * scale;
}

// runs fn under both backends when AVX2 is available; otherwise scalar only
template <typename Fn>
void with_backends(Fn&& fn) {
    REQUIRE(kern::set_backend(kern::Backend::kScalar));
    fn(kern::Backend::kScalar);
    if (kern::set_backend(kern::Backend::kAvx2)) {
        fn(kern::Backend::kAvx2);
    }
    kern::reset_backend();
}

}  // namespace

TEST_CASE("kernels: scalar and simd backends agree") {
    const bool have_avx2 = kern::set_backend(kern::Backend::kAvx2);
    kern::reset_backend();
    if (!have_avx2) return;  // nothing to compare on this machine

    Rng rng(7);
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 100u, 1000u}) {
        const auto a = random_vec(rng, n);
        const auto b = random_vec(rng, n);
        const double alpha = rng.sym(2.0);

        REQUIRE(kern::set_backend(kern::Backend::kScalar));
        const double dot_s = kern::dot(a.data(), b.data(), n);
        auto axpy_s = b;
        kern::axpy(alpha, a.data(), axpy_s.data(), n);
        auto scale_s = a;
        kern::scale(alpha, scale_s.data(), n);
        auto add_s = b;
        kern::add(a.data(), add_s.data(), n);
        auto tg_s = b;
        kern::tanh_grad(a.data(), tg_s.data(), n);

        REQUIRE(kern::set_backend(kern::Backend::kAvx2));
        const double dot_v = kern::dot(a.data(), b.data(), n);
        auto axpy_v = b;
        kern::axpy(alpha, a.data(), axpy_v.data(), n);
        auto scale_v = a;
        kern::scale(alpha, scale_v.data(), n);
        auto add_v = b;
        kern::add(a.data(), add_v.data(), n);
        auto tg_v = b;
        kern::tanh_grad(a.data(), tg_v.data(), n);

        CHECK(close(dot_s, dot_v));
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(close(axpy_s[i], axpy_v[i]));
            CHECK(close(scale_s[i], scale_v[i]));
            CHECK(close(add_s[i], add_v[i]));
            CHECK(close(tg_s[i], tg_v[i]));
        }
    }
    kern::reset_backend();
}

TEST_CASE("kernels: matvec against direct loops") {
    with_backends([](kern::Backend) {
        Rng rng(11);
        const std::size_t rows = 7, cols = 13;
        const auto w = random_vec(rng, rows * cols);
        const auto x = random_vec(rng, cols);
        const auto b = random_vec(rng, rows);
        std::vector<double> y(rows);
        kern::matvec(w.data(), rows, cols, x.data(), b.data(), y.data());
        for (std::size_t r = 0; r < rows; ++r) {
            double want = b[r];
            for (std::size_t c = 0; c < cols; ++c) want += w[r * cols + c] * x[c];
            CHECK(close(y[r], want, 1e-9));
        }

        const auto g = random_vec(rng, rows);
        std::vector<double> out(cols, 0.0);
        kern::matvec_t_accum(w.data(), rows, cols, g.data(), out.data());
        for (std::size_t c = 0; c < cols; ++c) {
            double want = 0.0;
            for (std::size_t r = 0; r < rows; ++r) want += w[r * cols + c] * g[r];
            CHECK(close(out[c], want, 1e-9));
        }

        auto w2 = w;
        kern::ger(0.5, g.data(), rows, x.data(), cols, w2.data());
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                CHECK(close(w2[r * cols + c], w[r * cols + c] + 0.5 * g[r] * x[c], 1e-9));
            }
        }
    });
}

TEST_CASE("kernels: softmax normalizes and is shift invariant") {
    Rng rng(3);
    for (int iter = 0; iter < 50; ++iter) {
        const std::size_t n = 2 + rng.below(10);
        auto x = random_vec(rng, n, 5.0);
        auto shifted = x;
        for (auto& v : shifted) v += 123.0;
        kern::softmax_inplace(x.data(), n);
        kern::softmax_inplace(shifted.data(), n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += x[i];
            CHECK(close(x[i], shifted[i], 1e-12));
        }
        CHECK(std::abs(sum - 1.0) <= 1e-6);
    }
}

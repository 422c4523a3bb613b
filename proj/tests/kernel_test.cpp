#include "doctest.h"

#include <cmath>

#include "gsmooth/kernel.hpp"
#include "gsmooth/numeric.hpp"
#include "gsmooth/oracle.hpp"
#include "test_util.hpp"

using namespace gsmooth;
using testutil::close;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

// Plain tensor-grid integral of f over [-R, R]^n by composite Gauss-Legendre;
// independent of the kernel's own normalization claims.
template <typename F>
double grid_integral(F f, int n, double R, int panels, int q) {
    const QuadratureRule& gl = gauss_legendre(q);
    std::vector<double> coords(n, 0.0);
    std::vector<double> acc;
    double total = 0.0;
    // recursive lambda over dimensions
    auto rec = [&](auto&& self, int d, double w) -> void {
        if (d == n) {
            total += w * f(coords);
            return;
        }
        for (int s = 0; s < panels; ++s) {
            const double lo = -R + 2.0 * R * s / panels;
            const double hi = -R + 2.0 * R * (s + 1) / panels;
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (int i = 0; i < q; ++i) {
                coords[d] = mid + half * gl.nodes[i];
                self(self, d + 1, w * half * gl.weights[i]);
            }
        }
    };
    rec(rec, 0, 1.0);
    return total;
}

}  // namespace

TEST_CASE("kernel_eval closed-form values") {
    GaussianKernel k1(1.0, 1);
    const double x0[] = {0.0};
    CHECK(kernel_eval(k1, x0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));

    GaussianKernel k2(2.0, 2);
    const double x00[] = {0.0, 0.0};
    CHECK(kernel_eval(k2, x00) == doctest::Approx(1.0 / (8.0 * kPi)).epsilon(1e-15));

    CHECK_THROWS(kernel_eval(k1, std::span<const double>(x00, 2)));
    CHECK_THROWS(GaussianKernel(0.0, 1));
    CHECK_THROWS(GaussianKernel(1.0, 0));
}

TEST_CASE("kernel has unit mass in dimensions 1 to 3") {
    for (int n = 1; n <= 3; ++n) {
        for (double sv : {0.5, 1.0, 1.7}) {
            GaussianKernel k(sv, n);
            const double mass = grid_integral(
                [&](const std::vector<double>& x) { return kernel_eval(k, x); }, n,
                10.0 * sv, n == 3 ? 10 : 24, 16);
            CHECK(std::abs(mass - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("gaussian product identity, symmetric case") {
    ScaledGaussian a(1.0, {0.0}, 1.0);
    ScaledGaussian prod = gaussian_product(a, a);
    CHECK(prod.prefactor == doctest::Approx(1.0 / (2.0 * std::sqrt(kPi))).epsilon(1e-15));
    CHECK(prod.mean[0] == 0.0);
    CHECK(prod.variance == doctest::Approx(0.5).epsilon(1e-15));
    for (double x : {-1.3, 0.0, 0.4, 2.2}) {
        const double xs[] = {x};
        const double kx = kernel_eval(GaussianKernel(1.0, 1), xs);
        CHECK(close(scaled_eval(prod, xs), kx * kx, 1e-14));
    }
}

TEST_CASE("gaussian product identity on random instances") {
    SplitMix64 rng(314);
    for (int m : {1, 2, 3}) {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> m1(m), m2(m);
            for (double& v : m1) v = rng.next_in(-2, 2);
            for (double& v : m2) v = rng.next_in(-2, 2);
            ScaledGaussian a(rng.next_in(0.2, 2.0), m1, rng.next_in(0.2, 3.0));
            ScaledGaussian b(rng.next_in(0.2, 2.0), m2, rng.next_in(0.2, 3.0));
            ScaledGaussian prod = gaussian_product(a, b);
            for (int i = 0; i < 50; ++i) {
                std::vector<double> x(m);
                for (double& v : x) v = rng.next_in(-3, 3);
                const double want = scaled_eval(a, x) * scaled_eval(b, x);
                CHECK(close(scaled_eval(prod, x), want, 1e-12));
            }
        }
    }
    // coincident means: no exponential attenuation
    ScaledGaussian a(1.0, {0.7, -0.2}, 0.8);
    ScaledGaussian b(1.0, {0.7, -0.2}, 1.3);
    ScaledGaussian prod = gaussian_product(a, b);
    CHECK(prod.prefactor == doctest::Approx(1.0 / (2.0 * kPi * (0.8 + 1.3))).epsilon(1e-14));
}

TEST_CASE("affine kernel convolution scale") {
    CHECK(affine_kernel_convolve(0.7, 1.0, 0.0, 0.4) ==
          doctest::Approx(std::sqrt(0.7 * 0.7 + 0.4 * 0.4)).epsilon(1e-15));
    CHECK(affine_kernel_convolve(0.7, 0.0, 1.3, 0.4) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK_THROWS(affine_kernel_convolve(0.0, 1.0, 0.0, 0.4));
    CHECK_THROWS(affine_kernel_convolve(0.7, 1.0, 0.0, 0.0));

    // composing two unit-slope convolutions equals one with the combined scale
    SplitMix64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const double delta = rng.next_in(0.2, 2.0);
        const double s1 = rng.next_in(0.2, 2.0), s2 = rng.next_in(0.2, 2.0);
        const double twice = affine_kernel_convolve(
            affine_kernel_convolve(delta, 1.0, 0.0, s1), 1.0, 0.0, s2);
        const double once = affine_kernel_convolve(delta, 1.0, 0.0, std::hypot(s1, s2));
        CHECK(std::abs(twice - once) <= 1e-15 * std::max(1.0, once));
    }
}

TEST_CASE("affine kernel convolution matches quadrature") {
    const double delta = 0.7, a = 2.0, b = 0.3, sigma = 0.4;
    const double eff = affine_kernel_convolve(delta, a, b, sigma);
    GaussianKernel keff(eff, 1);
    GaussianKernel kd(delta, 1);
    const QuadratureRule& gh = gauss_hermite(96);
    for (double x : {0.1, -0.6, 0.9}) {
        // integral of k_delta(a t + b) k_sigma(x - t) dt = E_{T~N(x,sigma^2)} k_delta(a T + b)
        std::vector<double> vals(gh.nodes.size());
        for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
            const double arg[] = {a * (x + sigma * gh.nodes[i]) + b};
            vals[i] = gh.weights[i] * kernel_eval(kd, arg);
        }
        const double quad = pairwise_sum(vals);
        const double want[] = {a * x + b};
        CHECK(std::abs(quad - kernel_eval(keff, want)) <= 1e-10);
    }
}

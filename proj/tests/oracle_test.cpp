#include "doctest.h"

#include <cmath>

#include "gsmooth/oracle.hpp"
#include "gsmooth/smoothing.hpp"
#include "test_util.hpp"

using namespace gsmooth;
using testutil::close;

namespace {

double double_factorial(int n) {
    double r = 1.0;
    for (int k = n; k >= 1; k -= 2) r *= k;
    return r;
}

constexpr double kPi = 3.1415926535897932384626433832795;

}  // namespace

TEST_CASE("gauss_hermite rules are symmetric and match normal moments") {
    for (int n : {2, 7, 16, 64, 101, 200}) {
        const QuadratureRule& r = gauss_hermite(n);
        REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
        std::vector<double> w = r.weights;
        CHECK(pairwise_sum(w) == doctest::Approx(1.0).epsilon(1e-15));
        for (int i = 0; i < n; ++i) {
            CHECK(r.nodes[i] == -r.nodes[n - 1 - i]);
            CHECK(r.weights[i] == r.weights[n - 1 - i]);
            if (i) CHECK(r.nodes[i] > r.nodes[i - 1]);
        }
        // E[Z^p] for even p up to quadrature exactness (capped to avoid
        // magnitudes where double-factorial growth dominates the comparison)
        for (int p = 2; p <= std::min(2 * n - 1, 20); p += 2) {
            std::vector<double> vals(n);
            for (int i = 0; i < n; ++i) vals[i] = r.weights[i] * ipow(r.nodes[i], p);
            CHECK(close(pairwise_sum(vals), double_factorial(p - 1), 1e-12));
        }
    }
}

TEST_CASE("oracle_convolve basics") {
    // constant is reproduced exactly
    Expression five = constant(2, 5.0);
    const OracleResult c = oracle_convolve(five, SmoothSigma(0.7), {{0.3, -0.8}});
    CHECK(c.value == 5.0);

    // second moment: E[(0 + Z)^2] = 1
    Expression sq(1, {MonomialTerm{1.0, {2}}});
    const OracleResult m = oracle_convolve(sq, SmoothSigma(1.0), {{0.0}});
    CHECK(close(m.value, 1.0, 1e-13));

    // damped harmonic: E[sin(pi/2 + 0.5 Z)] = exp(-0.125)
    Expression sinx(1, {TrigTerm{1.0, {1}, {-kPi / 2}, 0.0}});
    const OracleResult s = oracle_convolve(sinx, SmoothSigma(0.5), {{kPi / 2}});
    CHECK(close(s.value, std::exp(-0.125), 1e-12));

    CHECK_THROWS(oracle_convolve(sq, SmoothSigma(0.0), {{0.0}}));
    CHECK_THROWS(oracle_convolve(sq, SmoothSigma(1.0), {{0.0, 0.0}}));
    OracleConfig bad;
    bad.quadrature_nodes = 1;
    CHECK_THROWS(oracle_convolve(sq, SmoothSigma(1.0), {{0.0}}, bad));
}

TEST_CASE("polynomial exactness against smooth_monomial") {
    OracleConfig cfg;
    for (int p = 0; p <= 2 * cfg.quadrature_nodes - 1 && p <= 40; ++p) {
        for (double x : {0.0, 0.7, -1.9}) {
            for (double sv : {0.3, 1.0}) {
                const double closed = eval(smooth_monomial(p, SmoothSigma(sv)), {{x}});
                CHECK(close(oracle_moment(p, x, sv, cfg), closed, 1e-12));
            }
        }
    }
    // worked values
    CHECK(oracle_moment(2, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(oracle_moment(4, 1.0, 1.0) == doctest::Approx(10.0).epsilon(1e-13));
    CHECK_THROWS_AS(oracle_moment(65, 0.0, 1.0), LimitExceeded);
}

TEST_CASE("oracle is deterministic") {
    Expression e(2, {MonomialTerm{0.7, {2, 1}}, TrigTerm{1.2, {1, 2}, {0.4, 5.0}, 0.1},
                     LinearArgTerm{0.9, Activation::Relu, {1.0, -0.5}, 0.0}});
    const EvalPoint p{{0.4, -1.1}};
    const OracleResult a = oracle_convolve(e, SmoothSigma(0.6), p);
    const OracleResult b = oracle_convolve(e, SmoothSigma(0.6), p);
    CHECK(a.value == b.value);
    CHECK(a.error_estimate == b.error_estimate);

    // Monte Carlo path: bit-identical across runs, seed-sensitive
    Expression e4(4, {MonomialTerm{1.0, {2, 0, 0, 0}}, MonomialTerm{1.0, {0, 1, 1, 1}}});
    const EvalPoint p4{{0.2, -0.3, 0.5, 1.0}};
    OracleConfig cfg;
    cfg.mc_samples = 20000;
    const OracleResult m1 = oracle_convolve(e4, SmoothSigma(0.8), p4, cfg);
    const OracleResult m2 = oracle_convolve(e4, SmoothSigma(0.8), p4, cfg);
    CHECK(m1.value == m2.value);
    CHECK(m1.error_estimate == m2.error_estimate);
    cfg.mc_seed = 43;
    const OracleResult m3 = oracle_convolve(e4, SmoothSigma(0.8), p4, cfg);
    CHECK(m1.value != m3.value);
}

TEST_CASE("monte carlo agrees with the closed form within its own error bar") {
    Expression e4(4, {MonomialTerm{1.0, {2, 0, 0, 0}}, MonomialTerm{0.5, {0, 1, 1, 0}},
                      TrigTerm{1.0, {1, 0, 0, 0}, {0.0, 0.0, 0.0, 0.0}, 0.0}});
    const EvalPoint p4{{0.2, -0.3, 0.5, 1.0}};
    const SmoothSigma s(0.8);
    OracleConfig cfg;
    cfg.mc_samples = 200000;
    const OracleResult o = oracle_convolve(e4, s, p4, cfg);
    const double closed = eval(smooth(e4, s), p4);
    CHECK(std::abs(o.value - closed) <= 5.0 * o.error_estimate);
    CHECK(o.error_estimate < 0.02);
}

TEST_CASE("refinement never worsens agreement beyond the reported estimate") {
    SplitMix64 rng(55);
    OracleConfig base, fine;
    fine.quadrature_nodes = 128;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.next_int(1, 2);
        std::vector<Term> ts;
        for (int i = 0, m = rng.next_int(1, 3); i < m; ++i) {
            switch (rng.next_int(0, 2)) {
                case 0: ts.push_back(testutil::random_monomial(rng, n, 3)); break;
                case 1: ts.push_back(testutil::random_rbf(rng, n)); break;
                default: ts.push_back(testutil::random_trig(rng, n)); break;
            }
        }
        Expression e(n, std::move(ts));
        if (e.empty()) continue;
        const SmoothSigma s(rng.next_in(0.2, 1.0));
        Expression sm = smooth(e, s);
        EvalPoint p = testutil::random_point(rng, n);
        const double closed = eval(sm, p);
        const OracleResult coarse = oracle_convolve(e, s, p, base);
        const OracleResult refined = oracle_convolve(e, s, p, fine);
        const double err_coarse = std::abs(coarse.value - closed);
        const double err_fine = std::abs(refined.value - closed);
        CHECK(err_fine <= std::max(err_coarse, coarse.error_estimate) + 1e-12);
    }
}

TEST_CASE("a corrupted closed form is flagged by the oracle") {
    // negative control: nudging one coefficient of the smoothed expression
    // must push the discrepancy far above the verification tolerance
    Expression e(1, {MonomialTerm{1.0, {4}}, TrigTerm{0.5, {2}, {0.3}, 0.0}});
    const SmoothSigma s(0.8);
    Expression good = smooth(e, s);
    std::vector<Term> tampered = good.terms();
    std::get<MonomialTerm>(tampered[0]).coeff *= 1.001;
    Expression bad(1, std::move(tampered));
    double good_worst = 0.0, bad_worst = 0.0;
    SplitMix64 rng(88);
    for (int i = 0; i < 10; ++i) {
        EvalPoint p = testutil::random_point(rng, 1);
        const OracleResult o = oracle_convolve(e, s, p);
        good_worst = std::max(good_worst, std::abs(eval(good, p) - o.value));
        bad_worst = std::max(bad_worst, std::abs(eval(bad, p) - o.value));
    }
    CHECK(good_worst <= 1e-8);
    CHECK(bad_worst > 1e-4);
}

TEST_CASE("kinked integrands reach tight accuracy") {
    SplitMix64 rng(66);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = rng.next_int(1, 2);
        LinearArgTerm t;
        t.coeff = testutil::signed_magnitude(rng, 0.5, 2.0);
        t.activation = trial % 2 ? Activation::Sign : Activation::Relu;
        t.direction.resize(n);
        for (double& g : t.direction) g = testutil::signed_magnitude(rng, 0.2, 2.0);
        t.smoothed_sigma = 0.0;
        Expression e(n, {t});
        const SmoothSigma s(rng.next_in(0.3, 1.0));
        Expression sm = smooth(e, s);
        for (int i = 0; i < 4; ++i) {
            EvalPoint p = testutil::random_point(rng, n);
            const OracleResult o = oracle_convolve(e, s, p);
            CHECK(std::abs(o.value - eval(sm, p)) <= 1e-8);
        }
    }
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsmooth/expression.hpp"

namespace gsmooth {

// Standard deviation of the smoothing kernel; 0 is the identity transform.
struct SmoothSigma {
    double value = 0.0;
    SmoothSigma() = default;
    explicit SmoothSigma(double s);
};

// Exact integer-coefficient form of the smoothed monomial u(x, p, sigma):
// sum of coeff * sigma^sigma_power * x^x_power with x_power + sigma_power = p
// and sigma_power even. Entries are ordered by descending sigma power.
struct SigmaPolynomial {
    struct Entry {
        int x_power = 0;
        int sigma_power = 0;
        std::int64_t coeff = 0;
    };
    int degree = 0;
    std::vector<Entry> entries;
};

std::string sigma_polynomial_to_string(const SigmaPolynomial& sp);

// Gaussian smoothing of x^p as a univariate polynomial with sigma substituted
// numerically. Computed by the real recurrence
//   u_0 = 1, u_1 = x, u_p = x u_{p-1} + (p-1) sigma^2 u_{p-2}.
Expression smooth_monomial(int p, SmoothSigma sigma);

// Rows p = 0..p_max of u(x, p, sigma) carried out in checked 64-bit integer
// arithmetic; throws LimitExceeded on overflow or p_max > 64.
std::vector<SigmaPolynomial> monomial_table(int p_max);

// Per-family closed-form transforms. Each requires every term of e to belong
// to the named family and returns the canonical smoothed expression.
Expression smooth_polynomial(const Expression& e, SmoothSigma sigma);
Expression smooth_rbf(const Expression& e, SmoothSigma sigma);
Expression smooth_trig(const Expression& e, SmoothSigma sigma);

// Smoothing composes on the effective scale: the result carries
// sqrt(smoothed_sigma^2 + sigma^2).
LinearArgTerm smooth_linear_arg(const LinearArgTerm& t, SmoothSigma sigma);

// Linearity dispatch over all families; sigma = 0 returns canonicalize(e).
Expression smooth(const Expression& e, SmoothSigma sigma);

// Exact analytic gradient and Laplacian of eval(e, .) at p.
std::vector<double> gradient(const Expression& e, const EvalPoint& p);
double laplacian(const Expression& e, const EvalPoint& p);

}  // namespace gsmooth

#pragma once

#include <cstdint>
#include <vector>

#include "gsmooth/expression.hpp"
#include "gsmooth/smoothing.hpp"

namespace gsmooth {

// Numerical Weierstrass transform used as an independent cross-check of every
// closed form. For dimensions up to max_quadrature_dim the transform
// E[f(p + sigma Z)] is computed by deterministic tensor quadrature; above
// that, by seeded Monte Carlo.
//
// quadrature_nodes applies to smooth integrands; expressions containing sign
// or relu terms automatically select a 200-node profile, and dimensions that
// still carry an unsmoothed kink are integrated by composite Gauss-Legendre
// panels split at the kink locations (a kinked integrand defeats plain
// Gauss-Hermite at any practical node count).
struct OracleConfig {
    int quadrature_nodes = 64;
    long mc_samples = 1000000;
    std::uint64_t mc_seed = 42;
    int max_quadrature_dim = 3;
};

struct OracleResult {
    double value = 0.0;
    // Quadrature: |full profile - half profile|. Monte Carlo: standard error.
    double error_estimate = 0.0;
};

OracleResult oracle_convolve(const Expression& e, SmoothSigma sigma, const EvalPoint& p,
                             const OracleConfig& cfg = {});

// E[(x + sigma Z)^p] by univariate Gauss-Hermite with at least ceil((p+1)/2)
// nodes, exact for polynomials up to degree 2*nodes - 1.
double oracle_moment(int p, double x, double sigma, const OracleConfig& cfg = {});

// Probabilists' Gauss-Hermite rule: E[f(Z)] ~= sum_i weights[i] f(nodes[i]),
// nodes ascending, weights normalized to sum exactly 1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const QuadratureRule& gauss_hermite(int n);
const QuadratureRule& gauss_legendre(int n);  // on [-1, 1], weights sum to 2

}  // namespace gsmooth

#include "gsmooth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "gsmooth/numeric.hpp"

namespace gsmooth {
namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

void validate(const OracleConfig& cfg) {
    if (cfg.quadrature_nodes < 2) throw std::invalid_argument("quadrature_nodes must be >= 2");
    if (cfg.mc_samples < 1000) throw std::invalid_argument("mc_samples must be >= 1000");
    if (cfg.max_quadrature_dim < 1) throw std::invalid_argument("max_quadrature_dim must be >= 1");
}

// Probabilists' Gauss-Hermite via Golub-Welsch: the nodes are eigenvalues of
// the symmetric tridiagonal Jacobi matrix (zero diagonal, off-diagonal
// sqrt(k)) and the weights come from the first eigenvector components,
// obtained by implicit-shift QL that rotates only the first row.
QuadratureRule compute_gauss_hermite(int n) {
    std::vector<double> d(n, 0.0), e(n, 0.0), z(n, 0.0);
    for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(static_cast<double>(k));
    z[0] = 1.0;

    const double eps = 2.3e-16;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw std::runtime_error("quadrature eigensolve stalled");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&d](int a, int b) { return d[a] < d[b]; });

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = d[order[i]];
        rule.weights[i] = z[order[i]] * z[order[i]];
    }
    // Enforce the exact symmetry of the rule.
    for (int i = 0; i < n / 2; ++i) {
        const double node = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
        rule.nodes[i] = -node;
        rule.nodes[n - 1 - i] = node;
        const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    const double wsum = pairwise_sum(rule.weights);
    for (double& w : rule.weights) w /= wsum;
    return rule;
}

QuadratureRule compute_gauss_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    if (n % 2 == 1) rule.nodes[m - 1] = 0.0;
    return rule;
}

template <typename F>
const QuadratureRule& cached_rule(std::map<int, QuadratureRule>& cache, std::mutex& mu, int n,
                                  F compute) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute(n)).first;
    return it->second;
}

// Standard normal density.
double phi(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

// A raw sign/relu term is discontinuous (or kinked) across the hyperplane
// (p + sigma z).g = 0. Along dimension d the trouble is centered at
// z_d* = -(p.g + sigma sum_{d2<d} g_d2 z_d2) / (sigma g_d): at the term's
// deepest nonzero dimension this is a genuine kink, while at outer
// dimensions the already-integrated inner coordinates mollify it into a
// steep erf-like wall of width ~ sqrt(2) |g_inner| / |g_d|. Gauss-Hermite
// resolves walls wider than ~0.45 to machine precision but fails on
// narrower ones, so those levels switch to Gauss-Legendre panels that are
// cut at the wall and grow geometrically away from it.
struct KinkTerm {
    std::vector<double> direction;
    double base = 0.0;  // p . direction
};

struct TensorScheme {
    int gh_nodes = 64;         // plain levels
    int gl_points = 16;        // points per panel on cut levels
    double base_panel = 0.4;   // panel length adjacent to a cut, doubling outward
    double cutoff = 10.0;      // integration window [-cutoff, cutoff]
    double steep_width = 0.45; // walls narrower than this force the cut scheme
};

class TensorIntegrator {
public:
    TensorIntegrator(const Expression& e, double sigma, const EvalPoint& p,
                     const TensorScheme& scheme)
        : e_(e), sigma_(sigma), p_(p), scheme_(scheme), n_(e.dimension()),
          gh_(gauss_hermite(scheme.gh_nodes)), gl_(gauss_legendre(scheme.gl_points)) {
        z_.assign(n_, 0.0);
        point_.coords.assign(n_, 0.0);
        for (const Term& t : e.terms()) {
            const auto* l = std::get_if<LinearArgTerm>(&t);
            if (!l || l->smoothed_sigma != 0.0) continue;
            if (l->activation != Activation::Sign && l->activation != Activation::Relu) continue;
            kinks_.push_back({l->direction, dot(p.coords, l->direction)});
        }
        cut_level_.assign(n_, false);
        for (int d = 0; d < n_; ++d) {
            for (const KinkTerm& k : kinks_) {
                if (k.direction[d] == 0.0) continue;
                double inner = 0.0;
                for (int d2 = d + 1; d2 < n_; ++d2) inner += k.direction[d2] * k.direction[d2];
                const double width = std::sqrt(2.0 * inner) / std::abs(k.direction[d]);
                if (width < scheme.steep_width) cut_level_[d] = true;
            }
        }
        scratch_.assign(n_, {});
    }

    double run() { return level(0); }

private:
    double leaf() {
        for (int d = 0; d < n_; ++d) point_.coords[d] = p_.coords[d] + sigma_ * z_[d];
        return eval(e_, point_);
    }

    double level(int d) {
        if (d == n_) return leaf();
        return cut_level_[d] ? cut_gl_level(d) : gh_level(d);
    }

    double gh_level(int d) {
        std::vector<double>& vals = scratch_[d];
        vals.resize(gh_.nodes.size());
        for (std::size_t i = 0; i < gh_.nodes.size(); ++i) {
            z_[d] = gh_.nodes[i];
            vals[i] = gh_.weights[i] * level(d + 1);
        }
        return pairwise_sum(vals);
    }

    double cut_gl_level(int d) {
        const double R = scheme_.cutoff;
        std::vector<double> cuts{-R, R};
        for (const KinkTerm& k : kinks_) {
            if (k.direction[d] == 0.0) continue;
            double partial = k.base;
            for (int d2 = 0; d2 < d; ++d2) partial += sigma_ * k.direction[d2] * z_[d2];
            const double zstar = -partial / (sigma_ * k.direction[d]);
            if (zstar > -R && zstar < R) cuts.push_back(zstar);
        }
        std::sort(cuts.begin(), cuts.end());

        std::vector<double>& vals = scratch_[d];
        vals.clear();
        std::vector<double> edges;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double a = cuts[s], b = cuts[s + 1];
            // panel edges doubling inward from both segment ends
            edges.assign({a, b});
            const double mid = 0.5 * (a + b);
            for (double x = a, h = scheme_.base_panel; x + h < mid; h *= 2.0) {
                x += h;
                edges.push_back(x);
            }
            for (double x = b, h = scheme_.base_panel; x - h > mid; h *= 2.0) {
                x -= h;
                edges.push_back(x);
            }
            std::sort(edges.begin(), edges.end());
            for (std::size_t q = 0; q + 1 < edges.size(); ++q) {
                const double pm = 0.5 * (edges[q] + edges[q + 1]);
                const double ph = 0.5 * (edges[q + 1] - edges[q]);
                for (std::size_t i = 0; i < gl_.nodes.size(); ++i) {
                    z_[d] = pm + ph * gl_.nodes[i];
                    vals.push_back(ph * gl_.weights[i] * phi(z_[d]) * level(d + 1));
                }
            }
        }
        return pairwise_sum(vals);
    }

    const Expression& e_;
    const double sigma_;
    const EvalPoint& p_;
    const TensorScheme scheme_;
    const int n_;
    QuadratureRule gh_;
    QuadratureRule gl_;
    std::vector<double> z_;
    EvalPoint point_;
    std::vector<KinkTerm> kinks_;
    std::vector<bool> cut_level_;
    std::vector<std::vector<double>> scratch_;
};

bool has_nonsmooth_term(const Expression& e) {
    for (const Term& t : e.terms())
        if (const auto* l = std::get_if<LinearArgTerm>(&t))
            if (l->activation == Activation::Sign || l->activation == Activation::Relu) return true;
    return false;
}

OracleResult monte_carlo(const Expression& e, double sigma, const EvalPoint& p,
                         const OracleConfig& cfg) {
    const int n = e.dimension();
    SplitMix64 rng(cfg.mc_seed);
    std::vector<double> samples(cfg.mc_samples);
    EvalPoint x;
    x.coords.assign(n, 0.0);
    for (long i = 0; i < cfg.mc_samples; ++i) {
        for (int d = 0; d < n; ++d) x.coords[d] = p.coords[d] + sigma * rng.next_normal();
        const double v = eval(e, x);
        if (!std::isfinite(v)) throw std::runtime_error("nonfinite integrand sample");
        samples[i] = v;
    }
    const double mean = pairwise_sum(samples) / static_cast<double>(cfg.mc_samples);
    std::vector<double> sq(cfg.mc_samples);
    for (long i = 0; i < cfg.mc_samples; ++i) {
        const double d = samples[i] - mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / (static_cast<double>(cfg.mc_samples) - 1.0);
    const double se = std::sqrt(var / static_cast<double>(cfg.mc_samples));
    return {mean, se};
}

}  // namespace

const QuadratureRule& gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("node count must be positive");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    return cached_rule(cache, mu, n, compute_gauss_hermite);
}

const QuadratureRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("node count must be positive");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    return cached_rule(cache, mu, n, compute_gauss_legendre);
}

OracleResult oracle_convolve(const Expression& e, SmoothSigma sigma, const EvalPoint& p,
                             const OracleConfig& cfg) {
    validate(cfg);
    if (!(sigma.value > 0.0))
        throw std::invalid_argument("sigma must be positive for the numerical transform");
    if (p.coords.size() != static_cast<std::size_t>(e.dimension()))
        throw DimensionMismatch("dimension mismatch: point length does not match expression");

    const int n = e.dimension();
    if (n > cfg.max_quadrature_dim) return monte_carlo(e, sigma.value, p, cfg);

    const bool nonsmooth = has_nonsmooth_term(e);
    TensorScheme full;
    full.gh_nodes = nonsmooth ? std::max(cfg.quadrature_nodes, 200) : cfg.quadrature_nodes;
    TensorScheme half = full;
    half.gh_nodes = std::max(2, full.gh_nodes / 2);
    half.base_panel = full.base_panel * 2.0;

    const double v_full = TensorIntegrator(e, sigma.value, p, full).run();
    const double v_half = TensorIntegrator(e, sigma.value, p, half).run();
    if (!std::isfinite(v_full) || !std::isfinite(v_half))
        throw std::runtime_error("nonfinite integrand sample");
    return {v_full, std::abs(v_full - v_half)};
}

double oracle_moment(int p, double x, double sigma, const OracleConfig& cfg) {
    validate(cfg);
    if (p < 0) throw std::invalid_argument("moment degree must be nonnegative");
    if (p > 64) throw LimitExceeded("limit exceeded: moment degree above 64");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    const int nodes = std::max(cfg.quadrature_nodes, (p + 2) / 2);
    const QuadratureRule& rule = gauss_hermite(nodes);
    // Mirrored node pairs are summed first so that the exact odd-power
    // cancellations happen before any large-magnitude accumulation.
    std::vector<double> vals;
    vals.reserve(nodes / 2 + 1);
    for (int i = 0; i < nodes / 2; ++i)
        vals.push_back(rule.weights[i] * (ipow(x + sigma * rule.nodes[i], p) +
                                          ipow(x + sigma * rule.nodes[nodes - 1 - i], p)));
    if (nodes % 2 == 1) vals.push_back(rule.weights[nodes / 2] * ipow(x, p));
    return pairwise_sum(vals);
}

}  // namespace gsmooth

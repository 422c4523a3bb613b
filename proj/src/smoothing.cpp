#include "gsmooth/smoothing.hpp"

#include <algorithm>
#include <cmath>

#include "gsmooth/numeric.hpp"

namespace gsmooth {
namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw LimitExceeded("limit exceeded: 64-bit overflow in table coefficients");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw LimitExceeded("limit exceeded: 64-bit overflow in table coefficients");
    return r;
}

// Coefficient vectors of u(x, q, sigma) in the x-power basis for q = 0..p.
std::vector<std::vector<double>> u_coefficient_rows(int p, double sigma) {
    std::vector<std::vector<double>> rows;
    rows.reserve(p + 1);
    rows.push_back({1.0});
    if (p >= 1) rows.push_back({0.0, 1.0});
    const double s2 = sigma * sigma;
    for (int q = 2; q <= p; ++q) {
        std::vector<double> next(q + 1, 0.0);
        const std::vector<double>& u1 = rows[q - 1];
        const std::vector<double>& u2 = rows[q - 2];
        for (std::size_t j = 0; j < u1.size(); ++j) next[j + 1] += u1[j];
        for (std::size_t j = 0; j < u2.size(); ++j) next[j] += (q - 1) * s2 * u2[j];
        rows.push_back(std::move(next));
    }
    return rows;
}

void require_family(const Expression& e, int family_index, const char* op) {
    for (const Term& t : e.terms())
        if (t.index() != static_cast<std::size_t>(family_index))
            throw std::invalid_argument(std::string("family violation: ") + op);
}

}  // namespace

SmoothSigma::SmoothSigma(double s) : value(s) {
    if (!(s >= 0.0) || !std::isfinite(s))
        throw std::invalid_argument("sigma must be finite and nonnegative");
}

Expression smooth_monomial(int p, SmoothSigma sigma) {
    if (p < 0) throw std::invalid_argument("monomial degree must be nonnegative");
    const std::vector<double> coeffs = u_coefficient_rows(p, sigma.value).back();
    std::vector<Term> terms;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        if (coeffs[j] != 0.0) terms.push_back(MonomialTerm{coeffs[j], {static_cast<int>(j)}});
    return Expression(1, std::move(terms));
}

std::vector<SigmaPolynomial> monomial_table(int p_max) {
    if (p_max < 0) throw std::invalid_argument("p_max must be nonnegative");
    if (p_max > 64) throw LimitExceeded("limit exceeded: table rows above p = 64");

    // rows[q][j] = integer coefficient of sigma^(q-j) x^j in u(x, q, sigma)
    std::vector<std::vector<std::int64_t>> rows;
    rows.push_back({1});
    if (p_max >= 1) rows.push_back({0, 1});
    for (int q = 2; q <= p_max; ++q) {
        std::vector<std::int64_t> next(q + 1, 0);
        for (std::size_t j = 0; j < rows[q - 1].size(); ++j) next[j + 1] = rows[q - 1][j];
        for (std::size_t j = 0; j < rows[q - 2].size(); ++j)
            next[j] = checked_add(next[j], checked_mul(q - 1, rows[q - 2][j]));
        rows.push_back(std::move(next));
    }

    std::vector<SigmaPolynomial> table(p_max + 1);
    for (int q = 0; q <= p_max; ++q) {
        table[q].degree = q;
        for (int j = 0; j <= q; ++j)
            if (rows[q][j] != 0)
                table[q].entries.push_back({j, q - j, rows[q][j]});
    }
    return table;
}

std::string sigma_polynomial_to_string(const SigmaPolynomial& sp) {
    if (sp.entries.empty()) return "0";
    std::string out;
    for (const SigmaPolynomial::Entry& en : sp.entries) {
        if (!out.empty()) out += " + ";
        std::string factors;
        if (en.sigma_power > 0) {
            factors += "sigma";
            if (en.sigma_power > 1) factors += "^" + std::to_string(en.sigma_power);
        }
        if (en.x_power > 0) {
            if (!factors.empty()) factors += "*";
            factors += "x";
            if (en.x_power > 1) factors += "^" + std::to_string(en.x_power);
        }
        if (factors.empty()) out += std::to_string(en.coeff);
        else if (en.coeff == 1) out += factors;
        else out += std::to_string(en.coeff) + "*" + factors;
    }
    return out;
}

Expression smooth_polynomial(const Expression& e, SmoothSigma sigma) {
    require_family(e, 0, "smooth_polynomial requires monomial terms");
    if (sigma.value == 0.0) return canonicalize(e);
    const int n = e.dimension();

    int max_p = 0;
    for (const Term& t : e.terms())
        for (int p : std::get<MonomialTerm>(t).exponents) max_p = std::max(max_p, p);
    const std::vector<std::vector<double>> u = u_coefficient_rows(max_p, sigma.value);

    std::vector<Term> out;
    for (const Term& t : e.terms()) {
        const auto& m = std::get<MonomialTerm>(t);
        // Tensor product of the per-variable u polynomials, expanded.
        std::vector<MonomialTerm> partial{MonomialTerm{m.coeff, std::vector<int>(n, 0)}};
        for (int d = 0; d < n; ++d) {
            const int p = m.exponents[d];
            if (p == 0) continue;
            std::vector<MonomialTerm> next;
            next.reserve(partial.size() * (p / 2 + 1));
            for (const MonomialTerm& acc : partial) {
                for (std::size_t j = 0; j <= static_cast<std::size_t>(p); ++j) {
                    if (u[p][j] == 0.0) continue;
                    MonomialTerm grown = acc;
                    grown.coeff *= u[p][j];
                    grown.exponents[d] = static_cast<int>(j);
                    next.push_back(std::move(grown));
                }
            }
            partial = std::move(next);
        }
        for (MonomialTerm& mt : partial) out.push_back(std::move(mt));
    }
    return Expression(n, std::move(out));
}

Expression smooth_rbf(const Expression& e, SmoothSigma sigma) {
    require_family(e, 1, "smooth_rbf requires rbf terms");
    if (sigma.value == 0.0) return canonicalize(e);
    const int n = e.dimension();
    std::vector<Term> out;
    out.reserve(e.terms().size());
    for (const Term& t : e.terms()) {
        RbfTerm r = std::get<RbfTerm>(t);
        const double widened = std::hypot(r.width, sigma.value);
        r.amp *= ipow(r.width / widened, n);
        r.width = widened;
        out.push_back(std::move(r));
    }
    return Expression(n, std::move(out));
}

Expression smooth_trig(const Expression& e, SmoothSigma sigma) {
    require_family(e, 2, "smooth_trig requires trig terms");
    if (sigma.value == 0.0) return canonicalize(e);
    std::vector<Term> out;
    out.reserve(e.terms().size());
    for (const Term& t : e.terms()) {
        TrigTerm tr = std::get<TrigTerm>(t);
        double k2 = 0.0;
        for (int k : tr.freqs) k2 += static_cast<double>(k) * k;
        tr.damping += 0.5 * sigma.value * sigma.value * k2;
        out.push_back(std::move(tr));
    }
    return Expression(e.dimension(), std::move(out));
}

LinearArgTerm smooth_linear_arg(const LinearArgTerm& t, SmoothSigma sigma) {
    LinearArgTerm r = t;
    if (sigma.value != 0.0) r.smoothed_sigma = std::hypot(r.smoothed_sigma, sigma.value);
    return r;
}

Expression smooth(const Expression& e, SmoothSigma sigma) {
    if (sigma.value == 0.0) return canonicalize(e);
    const int n = e.dimension();
    std::vector<Term> monos, rbfs, trigs, out;
    for (const Term& t : e.terms()) {
        switch (t.index()) {
            case 0: monos.push_back(t); break;
            case 1: rbfs.push_back(t); break;
            case 2: trigs.push_back(t); break;
            default: out.push_back(smooth_linear_arg(std::get<LinearArgTerm>(t), sigma));
        }
    }
    auto append = [&out](const Expression& part) {
        out.insert(out.end(), part.terms().begin(), part.terms().end());
    };
    if (!monos.empty()) append(smooth_polynomial(Expression(n, std::move(monos)), sigma));
    if (!rbfs.empty()) append(smooth_rbf(Expression(n, std::move(rbfs)), sigma));
    if (!trigs.empty()) append(smooth_trig(Expression(n, std::move(trigs)), sigma));
    return Expression(n, std::move(out));
}

std::vector<double> gradient(const Expression& e, const EvalPoint& p) {
    const int n = e.dimension();
    if (p.coords.size() != static_cast<std::size_t>(n))
        throw DimensionMismatch("dimension mismatch: point length does not match expression");
    const std::vector<double>& x = p.coords;
    std::vector<double> g(n, 0.0);

    for (const Term& t : e.terms()) {
        if (const auto* m = std::get_if<MonomialTerm>(&t)) {
            for (int d = 0; d < n; ++d) {
                if (m->exponents[d] == 0) continue;
                double v = m->coeff * m->exponents[d] * ipow(x[d], m->exponents[d] - 1);
                for (int d2 = 0; d2 < n; ++d2)
                    if (d2 != d && m->exponents[d2] > 0) v *= ipow(x[d2], m->exponents[d2]);
                g[d] += v;
            }
        } else if (std::holds_alternative<RbfTerm>(t)) {
            const auto& r = std::get<RbfTerm>(t);
            const double v = eval_term(t, p);
            const double w2 = r.width * r.width;
            for (int d = 0; d < n; ++d) g[d] += v * (-(x[d] - r.center[d]) / w2);
        } else if (const auto* tr = std::get_if<TrigTerm>(&t)) {
            for (int d = 0; d < n; ++d) {
                if (tr->freqs[d] == 0) continue;
                double v = tr->coeff * std::exp(-tr->damping);
                for (int d2 = 0; d2 < n; ++d2) {
                    if (tr->freqs[d2] == 0 && tr->phases[d2] == 0.0) continue;
                    const double arg = tr->freqs[d2] * x[d2] + tr->phases[d2];
                    v *= (d2 == d) ? -tr->freqs[d2] * std::sin(arg) : std::cos(arg);
                }
                g[d] += v;
            }
        } else {
            const auto& l = std::get<LinearArgTerm>(t);
            const double y = dot(x, l.direction);
            const double s = l.smoothed_sigma * l2_norm(l.direction);
            const double slope = l.coeff * activation_slope(l.activation, y, s);
            for (int d = 0; d < n; ++d) g[d] += slope * l.direction[d];
        }
    }
    return g;
}

double laplacian(const Expression& e, const EvalPoint& p) {
    const int n = e.dimension();
    if (p.coords.size() != static_cast<std::size_t>(n))
        throw DimensionMismatch("dimension mismatch: point length does not match expression");
    const std::vector<double>& x = p.coords;
    double lap = 0.0;

    for (const Term& t : e.terms()) {
        if (const auto* m = std::get_if<MonomialTerm>(&t)) {
            for (int d = 0; d < n; ++d) {
                const int pd = m->exponents[d];
                if (pd < 2) continue;
                double v = m->coeff * pd * (pd - 1) * ipow(x[d], pd - 2);
                for (int d2 = 0; d2 < n; ++d2)
                    if (d2 != d && m->exponents[d2] > 0) v *= ipow(x[d2], m->exponents[d2]);
                lap += v;
            }
        } else if (std::holds_alternative<RbfTerm>(t)) {
            const auto& r = std::get<RbfTerm>(t);
            const double v = eval_term(t, p);
            const double w2 = r.width * r.width;
            double q = 0.0;
            for (int d = 0; d < n; ++d) {
                const double dxd = x[d] - r.center[d];
                q += dxd * dxd;
            }
            lap += v * (q / (w2 * w2) - n / w2);
        } else if (const auto* tr = std::get_if<TrigTerm>(&t)) {
            double k2 = 0.0;
            for (int k : tr->freqs) k2 += static_cast<double>(k) * k;
            lap += -k2 * eval_term(t, p);
        } else {
            const auto& l = std::get<LinearArgTerm>(t);
            const double y = dot(x, l.direction);
            const double norm = l2_norm(l.direction);
            const double s = l.smoothed_sigma * norm;
            lap += l.coeff * activation_curvature(l.activation, y, s) * norm * norm;
        }
    }
    return lap;
}

}  // namespace gsmooth

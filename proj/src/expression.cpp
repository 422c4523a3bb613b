#include "gsmooth/expression.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gsmooth/numeric.hpp"
#include "json.hpp"

namespace gsmooth {
namespace {

constexpr double kTwoPi = 6.2831853071795864769252867665590;
constexpr double kKeyTolerance = 1e-12;

bool finite(double v) { return std::isfinite(v); }

void require_finite(double v, const char* what) {
    if (!finite(v)) throw std::invalid_argument(std::string("nonfinite ") + what);
}

void require_length(std::size_t got, int dimension, const char* what) {
    if (got != static_cast<std::size_t>(dimension))
        throw DimensionMismatch(std::string("dimension mismatch: ") + what);
}

double& term_coeff(Term& t) {
    return std::visit([](auto& term) -> double& {
        using T = std::decay_t<decltype(term)>;
        if constexpr (std::is_same_v<T, RbfTerm>) return term.amp;
        else return term.coeff;
    }, t);
}

double term_coeff(const Term& t) { return term_coeff(const_cast<Term&>(t)); }

// Validates a term against the expression dimension and rewrites it into
// canonical form; terms that are identically zero regardless of coefficient
// are skipped.
void normalize_into(Term term, int dimension, std::vector<Term>& out) {
    if (auto* m = std::get_if<MonomialTerm>(&term)) {
        require_finite(m->coeff, "coefficient");
        require_length(m->exponents.size(), dimension, "monomial exponents length");
        for (int p : m->exponents)
            if (p < 0) throw std::invalid_argument("monomial exponents must be nonnegative");
        out.push_back(std::move(term));
        return;
    }
    if (auto* r = std::get_if<RbfTerm>(&term)) {
        require_finite(r->amp, "amplitude");
        require_length(r->center.size(), dimension, "rbf center length");
        for (double c : r->center) require_finite(c, "rbf center");
        require_finite(r->width, "rbf width");
        if (r->width <= 0.0) throw std::invalid_argument("rbf width must be positive");
        out.push_back(std::move(term));
        return;
    }
    if (auto* t = std::get_if<TrigTerm>(&term)) {
        require_finite(t->coeff, "coefficient");
        require_length(t->freqs.size(), dimension, "trig frequency length");
        require_length(t->phases.size(), dimension, "trig phase length");
        require_finite(t->damping, "damping");
        if (t->damping < 0.0) throw std::invalid_argument("trig damping must be nonnegative");
        bool any_freq = false;
        for (int d = 0; d < dimension; ++d) {
            int& k = t->freqs[d];
            double& phi = t->phases[d];
            require_finite(phi, "phase");
            if (k < 0) {  // cos(-kx + phi) = cos(kx - phi)
                k = -k;
                phi = -phi;
            }
            phi = std::fmod(phi, kTwoPi);
            if (phi < 0.0) phi += kTwoPi;
            if (phi >= kTwoPi) phi = 0.0;
            if (phi == 0.0) phi = 0.0;  // normalize -0
            if (k == 0) {
                double c = std::cos(phi);
                if (std::abs(c) <= 1e-14) c = 0.0;  // fold of an intended quarter-turn
                t->coeff *= c;
                phi = 0.0;
            } else {
                any_freq = true;
            }
        }
        if (!any_freq) {
            // Pure constant: fold the damping factor and keep it as a monomial.
            out.push_back(MonomialTerm{t->coeff * std::exp(-t->damping),
                                       std::vector<int>(dimension, 0)});
            return;
        }
        out.push_back(std::move(term));
        return;
    }
    auto& l = std::get<LinearArgTerm>(term);
    require_finite(l.coeff, "coefficient");
    require_length(l.direction.size(), dimension, "direction length");
    for (double g : l.direction) require_finite(g, "direction");
    require_finite(l.smoothed_sigma, "smoothed sigma");
    if (l.smoothed_sigma < 0.0) throw std::invalid_argument("smoothed sigma must be nonnegative");
    if (l.smoothed_sigma == 0.0) l.smoothed_sigma = 0.0;  // normalize -0
    bool all_zero = std::all_of(l.direction.begin(), l.direction.end(),
                                [](double g) { return g == 0.0; });
    // Every registered activation vanishes at 0, so a zero direction makes the
    // term identically zero.
    if (all_zero) return;
    out.push_back(std::move(term));
}

int cmp(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }
int cmp(int a, int b) { return a < b ? -1 : (a > b ? 1 : 0); }

template <typename T>
int cmp_vec(const std::vector<T>& a, const std::vector<T>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (int c = cmp(a[i], b[i])) return c;
    return 0;
}

// Orders terms by (family, family-specific key); the coefficient is not part
// of the key so that duplicates become adjacent.
int term_key_order(const Term& a, const Term& b) {
    if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
    if (const auto* ma = std::get_if<MonomialTerm>(&a)) {
        const auto& mb = std::get<MonomialTerm>(b);
        return cmp_vec(ma->exponents, mb.exponents);
    }
    if (const auto* ra = std::get_if<RbfTerm>(&a)) {
        const auto& rb = std::get<RbfTerm>(b);
        if (int c = cmp_vec(ra->center, rb.center)) return c;
        return cmp(ra->width, rb.width);
    }
    if (const auto* ta = std::get_if<TrigTerm>(&a)) {
        const auto& tb = std::get<TrigTerm>(b);
        if (int c = cmp_vec(ta->freqs, tb.freqs)) return c;
        if (int c = cmp_vec(ta->phases, tb.phases)) return c;
        return cmp(ta->damping, tb.damping);
    }
    const auto& la = std::get<LinearArgTerm>(a);
    const auto& lb = std::get<LinearArgTerm>(b);
    if (int c = cmp(static_cast<int>(la.activation), static_cast<int>(lb.activation))) return c;
    if (int c = cmp_vec(la.direction, lb.direction)) return c;
    return cmp(la.smoothed_sigma, lb.smoothed_sigma);
}

bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool close_vec(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!close(a[i], b[i], tol)) return false;
    return true;
}

// Keys within kKeyTolerance merge; exact sorting places them adjacently.
bool mergeable(const Term& a, const Term& b) {
    if (a.index() != b.index()) return false;
    if (const auto* ma = std::get_if<MonomialTerm>(&a))
        return ma->exponents == std::get<MonomialTerm>(b).exponents;
    if (const auto* ra = std::get_if<RbfTerm>(&a)) {
        const auto& rb = std::get<RbfTerm>(b);
        return close_vec(ra->center, rb.center, kKeyTolerance) &&
               close(ra->width, rb.width, kKeyTolerance);
    }
    if (const auto* ta = std::get_if<TrigTerm>(&a)) {
        const auto& tb = std::get<TrigTerm>(b);
        return ta->freqs == tb.freqs && close_vec(ta->phases, tb.phases, kKeyTolerance) &&
               close(ta->damping, tb.damping, kKeyTolerance);
    }
    const auto& la = std::get<LinearArgTerm>(a);
    const auto& lb = std::get<LinearArgTerm>(b);
    return la.activation == lb.activation &&
           close_vec(la.direction, lb.direction, kKeyTolerance) &&
           close(la.smoothed_sigma, lb.smoothed_sigma, kKeyTolerance);
}

}  // namespace

Expression::Expression(int dimension) : dimension_(dimension) {
    if (dimension < 1) throw std::invalid_argument("dimension must be positive");
}

Expression::Expression(int dimension, std::vector<Term> terms) : dimension_(dimension) {
    if (dimension < 1) throw std::invalid_argument("dimension must be positive");
    std::vector<Term> normalized;
    normalized.reserve(terms.size());
    for (Term& t : terms) normalize_into(std::move(t), dimension, normalized);
    std::sort(normalized.begin(), normalized.end(),
              [](const Term& a, const Term& b) { return term_key_order(a, b) < 0; });
    std::vector<Term> merged;
    merged.reserve(normalized.size());
    for (Term& t : normalized) {
        if (!merged.empty() && mergeable(merged.back(), t))
            term_coeff(merged.back()) += term_coeff(t);
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return std::abs(term_coeff(t)) < kMergeEpsilon; });
    terms_ = std::move(merged);
}

Expression constant(int dimension, double value) {
    return Expression(dimension, {MonomialTerm{value, std::vector<int>(dimension, 0)}});
}

double eval_term(const Term& t, const EvalPoint& p) {
    const std::vector<double>& x = p.coords;
    if (const auto* m = std::get_if<MonomialTerm>(&t)) {
        double v = m->coeff;
        for (std::size_t d = 0; d < m->exponents.size(); ++d)
            if (m->exponents[d] > 0) v *= ipow(x[d], m->exponents[d]);
        return v;
    }
    if (const auto* r = std::get_if<RbfTerm>(&t)) {
        double q = 0.0;
        for (std::size_t d = 0; d < r->center.size(); ++d) {
            const double dxd = x[d] - r->center[d];
            q += dxd * dxd;
        }
        return r->amp * std::exp(-q / (2.0 * r->width * r->width));
    }
    if (const auto* tr = std::get_if<TrigTerm>(&t)) {
        double v = tr->coeff * std::exp(-tr->damping);
        for (std::size_t d = 0; d < tr->freqs.size(); ++d)
            if (tr->freqs[d] != 0 || tr->phases[d] != 0.0)
                v *= std::cos(tr->freqs[d] * x[d] + tr->phases[d]);
        return v;
    }
    const auto& l = std::get<LinearArgTerm>(t);
    const double y = dot(x, l.direction);
    const double s = l.smoothed_sigma * l2_norm(l.direction);
    return l.coeff * activation_value(l.activation, y, s);
}

double eval(const Expression& e, const EvalPoint& p) {
    if (p.coords.size() != static_cast<std::size_t>(e.dimension()))
        throw DimensionMismatch("dimension mismatch: point length does not match expression");
    for (double c : p.coords) require_finite(c, "point coordinate");
    double s = 0.0;
    for (const Term& t : e.terms()) s += eval_term(t, p);
    return s;
}

Expression add(const Expression& a, const Expression& b) {
    if (a.dimension() != b.dimension())
        throw DimensionMismatch("dimension mismatch: cannot add expressions of different dimensions");
    std::vector<Term> terms = a.terms();
    terms.insert(terms.end(), b.terms().begin(), b.terms().end());
    return Expression(a.dimension(), std::move(terms));
}

Expression scale(const Expression& e, double factor) {
    require_finite(factor, "scale factor");
    std::vector<Term> terms = e.terms();
    for (Term& t : terms) term_coeff(t) *= factor;
    return Expression(e.dimension(), std::move(terms));
}

Expression negate(const Expression& e) { return scale(e, -1.0); }

namespace {

bool is_constant_monomial(const MonomialTerm& m) {
    return std::all_of(m.exponents.begin(), m.exponents.end(), [](int p) { return p == 0; });
}

void multiply_terms(const Term& a, const Term& b, std::vector<Term>& out) {
    if (std::holds_alternative<RbfTerm>(a) || std::holds_alternative<RbfTerm>(b) ||
        std::holds_alternative<LinearArgTerm>(a) || std::holds_alternative<LinearArgTerm>(b))
        throw UnsupportedProduct(
            "unsupported product: rbf and linear-argument terms cannot be multiplied");

    const auto* ma = std::get_if<MonomialTerm>(&a);
    const auto* mb = std::get_if<MonomialTerm>(&b);
    if (ma && mb) {
        MonomialTerm r = *ma;
        r.coeff *= mb->coeff;
        for (std::size_t d = 0; d < r.exponents.size(); ++d) r.exponents[d] += mb->exponents[d];
        out.push_back(std::move(r));
        return;
    }

    if (ma || mb) {  // monomial x trig
        const MonomialTerm& m = ma ? *ma : *mb;
        const TrigTerm& t = ma ? std::get<TrigTerm>(b) : std::get<TrigTerm>(a);
        if (!is_constant_monomial(m))
            throw UnsupportedProduct(
                "unsupported product: a non-constant monomial cannot multiply a trig term");
        TrigTerm r = t;
        r.coeff *= m.coeff;
        out.push_back(std::move(r));
        return;
    }

    // trig x trig: where both factors carry a harmonic in the same variable,
    // the product splits into the difference and sum harmonics with weight 1/2.
    const auto& ta = std::get<TrigTerm>(a);
    const auto& tb = std::get<TrigTerm>(b);
    const std::size_t n = ta.freqs.size();
    std::vector<std::size_t> split;
    for (std::size_t d = 0; d < n; ++d)
        if (ta.freqs[d] != 0 && tb.freqs[d] != 0) split.push_back(d);
    if (split.size() >= 30) throw LimitExceeded("limit exceeded: trig product expansion too large");

    TrigTerm base;
    base.coeff = ta.coeff * tb.coeff;
    base.damping = ta.damping + tb.damping;
    base.freqs.assign(n, 0);
    base.phases.assign(n, 0.0);
    for (std::size_t d = 0; d < n; ++d) {
        base.freqs[d] = ta.freqs[d] + tb.freqs[d];  // at most one side nonzero off-split
        base.phases[d] = ta.phases[d] + tb.phases[d];
    }

    const std::size_t combos = std::size_t{1} << split.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
        TrigTerm r = base;
        for (std::size_t i = 0; i < split.size(); ++i) {
            const std::size_t d = split[i];
            r.coeff *= 0.5;
            if (mask & (std::size_t{1} << i)) {
                r.freqs[d] = ta.freqs[d] + tb.freqs[d];
                r.phases[d] = ta.phases[d] + tb.phases[d];
            } else {
                r.freqs[d] = ta.freqs[d] - tb.freqs[d];
                r.phases[d] = ta.phases[d] - tb.phases[d];
            }
        }
        out.push_back(std::move(r));
    }
}

}  // namespace

Expression expand_product(const Expression& a, const Expression& b) {
    if (a.dimension() != b.dimension())
        throw DimensionMismatch("dimension mismatch: cannot multiply expressions of different dimensions");
    std::vector<Term> out;
    out.reserve(a.terms().size() * b.terms().size());
    for (const Term& ta : a.terms())
        for (const Term& tb : b.terms()) multiply_terms(ta, tb, out);
    return Expression(a.dimension(), std::move(out));
}

Expression expand_power(const Expression& e, int power, int max_power) {
    if (power < 0) throw std::invalid_argument("power must be nonnegative");
    if (power > max_power) throw LimitExceeded("limit exceeded: power above expansion limit");
    Expression result = constant(e.dimension(), 1.0);
    for (int i = 0; i < power; ++i) result = expand_product(result, e);
    return result;
}

Expression canonicalize(const Expression& e) { return Expression(e.dimension(), e.terms()); }

Expression embed(const Expression& e, int dimension) {
    if (dimension < e.dimension())
        throw DimensionMismatch("dimension mismatch: cannot shrink an expression");
    if (dimension == e.dimension()) return e;
    std::vector<Term> terms = e.terms();
    for (Term& t : terms) {
        if (auto* m = std::get_if<MonomialTerm>(&t)) {
            m->exponents.resize(dimension, 0);
        } else if (std::holds_alternative<RbfTerm>(t)) {
            throw DimensionMismatch(
                "dimension mismatch: an rbf term cannot be widened to a larger dimension");
        } else if (auto* tr = std::get_if<TrigTerm>(&t)) {
            tr->freqs.resize(dimension, 0);
            tr->phases.resize(dimension, 0.0);
        } else {
            std::get<LinearArgTerm>(t).direction.resize(dimension, 0.0);
        }
    }
    return Expression(dimension, std::move(terms));
}

Expression cosine_of_linear(int dimension, const std::vector<int>& freqs, double phase) {
    if (freqs.size() != static_cast<std::size_t>(dimension))
        throw DimensionMismatch("dimension mismatch: frequency vector length");
    std::vector<std::size_t> active;
    for (std::size_t d = 0; d < freqs.size(); ++d)
        if (freqs[d] != 0) active.push_back(d);
    if (active.size() >= 20)
        throw LimitExceeded("limit exceeded: too many variables in a trig argument");
    if (active.empty())
        return Expression(dimension,
                          {MonomialTerm{std::cos(phase), std::vector<int>(dimension, 0)}});

    constexpr double kHalfPi = 1.5707963267948966192313216916398;

    // Peel variables with cos(a + tail) = cos(a) cos(tail) - sin(a) cos(tail - pi/2);
    // the innermost factor absorbs the constant phase, so a single-variable
    // argument stays a single harmonic.
    struct Branch {
        double coeff;
        std::vector<double> phases;  // factor phases for peeled variables
        double tail_shift;           // accumulated shift of the remaining argument
    };
    std::vector<Branch> branches{{1.0, {}, 0.0}};
    for (std::size_t i = 0; i + 1 < active.size(); ++i) {
        std::vector<Branch> next;
        next.reserve(branches.size() * 2);
        for (const Branch& br : branches) {
            Branch c = br;
            c.phases.push_back(0.0);
            Branch s = br;
            s.phases.push_back(-kHalfPi);
            s.coeff = -s.coeff;
            s.tail_shift -= kHalfPi;
            next.push_back(std::move(c));
            next.push_back(std::move(s));
        }
        branches = std::move(next);
    }

    std::vector<Term> terms;
    terms.reserve(branches.size());
    for (const Branch& br : branches) {
        TrigTerm t;
        t.coeff = br.coeff;
        t.freqs.assign(dimension, 0);
        t.phases.assign(dimension, 0.0);
        for (std::size_t i = 0; i + 1 < active.size(); ++i) {
            t.freqs[active[i]] = freqs[active[i]];
            t.phases[active[i]] = br.phases[i];
        }
        t.freqs[active.back()] = freqs[active.back()];
        t.phases[active.back()] = phase + br.tail_shift;
        terms.push_back(std::move(t));
    }
    return Expression(dimension, std::move(terms));
}

namespace {

bool approx_term(const Term& a, const Term& b, double tol) {
    if (a.index() != b.index()) return false;
    if (const auto* ma = std::get_if<MonomialTerm>(&a)) {
        const auto& mb = std::get<MonomialTerm>(b);
        return ma->exponents == mb.exponents && close(ma->coeff, mb.coeff, tol);
    }
    if (const auto* ra = std::get_if<RbfTerm>(&a)) {
        const auto& rb = std::get<RbfTerm>(b);
        return close(ra->amp, rb.amp, tol) && close_vec(ra->center, rb.center, tol) &&
               close(ra->width, rb.width, tol);
    }
    if (const auto* ta = std::get_if<TrigTerm>(&a)) {
        const auto& tb = std::get<TrigTerm>(b);
        return ta->freqs == tb.freqs && close(ta->coeff, tb.coeff, tol) &&
               close_vec(ta->phases, tb.phases, tol) && close(ta->damping, tb.damping, tol);
    }
    const auto& la = std::get<LinearArgTerm>(a);
    const auto& lb = std::get<LinearArgTerm>(b);
    return la.activation == lb.activation && close(la.coeff, lb.coeff, tol) &&
           close_vec(la.direction, lb.direction, tol) &&
           close(la.smoothed_sigma, lb.smoothed_sigma, tol);
}

}  // namespace

bool approx_equal(const Expression& a, const Expression& b, double tol) {
    if (a.dimension() != b.dimension() || a.terms().size() != b.terms().size()) return false;
    for (std::size_t i = 0; i < a.terms().size(); ++i)
        if (!approx_term(a.terms()[i], b.terms()[i], tol)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

using nlohmann::ordered_json;

ordered_json term_to_json(const Term& t) {
    ordered_json j;
    if (const auto* m = std::get_if<MonomialTerm>(&t)) {
        j["family"] = "monomial";
        j["coeff"] = m->coeff;
        j["exponents"] = m->exponents;
    } else if (const auto* r = std::get_if<RbfTerm>(&t)) {
        j["family"] = "rbf";
        j["amp"] = r->amp;
        j["center"] = r->center;
        j["width"] = r->width;
    } else if (const auto* tr = std::get_if<TrigTerm>(&t)) {
        j["family"] = "trig";
        j["coeff"] = tr->coeff;
        j["freqs"] = tr->freqs;
        j["phases"] = tr->phases;
        j["damping"] = tr->damping;
    } else {
        const auto& l = std::get<LinearArgTerm>(t);
        j["family"] = "linear_arg";
        j["coeff"] = l.coeff;
        j["activation"] = activation_name(l.activation);
        j["direction"] = l.direction;
        j["smoothed_sigma"] = l.smoothed_sigma;
    }
    return j;
}

Term term_from_json(const ordered_json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "monomial") {
        MonomialTerm m;
        m.coeff = j.at("coeff").get<double>();
        m.exponents = j.at("exponents").get<std::vector<int>>();
        return m;
    }
    if (family == "rbf") {
        RbfTerm r;
        r.amp = j.at("amp").get<double>();
        r.center = j.at("center").get<std::vector<double>>();
        r.width = j.at("width").get<double>();
        return r;
    }
    if (family == "trig") {
        TrigTerm t;
        t.coeff = j.at("coeff").get<double>();
        t.freqs = j.at("freqs").get<std::vector<int>>();
        t.phases = j.at("phases").get<std::vector<double>>();
        t.damping = j.at("damping").get<double>();
        return t;
    }
    if (family == "linear_arg") {
        LinearArgTerm l;
        l.coeff = j.at("coeff").get<double>();
        const std::string act = j.at("activation").get<std::string>();
        if (act == "sign") l.activation = Activation::Sign;
        else if (act == "relu") l.activation = Activation::Relu;
        else if (act == "sin") l.activation = Activation::Sin;
        else throw std::invalid_argument("unknown activation: " + act);
        l.direction = j.at("direction").get<std::vector<double>>();
        l.smoothed_sigma = j.at("smoothed_sigma").get<double>();
        return l;
    }
    throw std::invalid_argument("unknown term family: " + family);
}

}  // namespace

std::string to_json_string(const Expression& e) {
    ordered_json j;
    j["dimension"] = e.dimension();
    j["terms"] = ordered_json::array();
    for (const Term& t : e.terms()) j["terms"].push_back(term_to_json(t));
    return j.dump();
}

Expression expression_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("invalid JSON: ") + ex.what());
    }
    try {
        const int dimension = j.at("dimension").get<int>();
        std::vector<Term> terms;
        for (const ordered_json& tj : j.at("terms")) terms.push_back(term_from_json(tj));
        return Expression(dimension, std::move(terms));
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("invalid expression document: ") + ex.what());
    }
}

}  // namespace gsmooth

#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gsmooth/activations.hpp"

namespace gsmooth {

// Mixing terms of different dimensions, or evaluating at a point of the wrong
// length.
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Product of term families with no closed form in the model.
struct UnsupportedProduct : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A configured bound was exceeded (power expansion depth, table size, ...).
struct LimitExceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// coeff * prod_d x_d^exponents[d]
struct MonomialTerm {
    double coeff = 0.0;
    std::vector<int> exponents;
    bool operator==(const MonomialTerm&) const = default;
};

// amp * exp(-|x - center|^2 / (2 width^2))
struct RbfTerm {
    double amp = 0.0;
    std::vector<double> center;
    double width = 1.0;
    bool operator==(const RbfTerm&) const = default;
};

// coeff * exp(-damping) * prod_d cos(freqs[d] x_d + phases[d])
//
// Canonical form: freqs[d] >= 0; phases in [0, 2pi), zero wherever freqs[d]
// is zero (the constant factor is folded into coeff). A term whose
// frequencies are all zero is folded into a constant monomial.
struct TrigTerm {
    double coeff = 0.0;
    std::vector<int> freqs;
    std::vector<double> phases;
    double damping = 0.0;
    bool operator==(const TrigTerm&) const = default;
};

// coeff * f~(w . direction ; smoothed_sigma * |direction|) evaluated at the
// point w, where f~ is the registered smoothed form of the activation and
// f~(. ; 0) is the raw activation.
struct LinearArgTerm {
    double coeff = 0.0;
    Activation activation = Activation::Sign;
    std::vector<double> direction;
    double smoothed_sigma = 0.0;
    bool operator==(const LinearArgTerm&) const = default;
};

using Term = std::variant<MonomialTerm, RbfTerm, TrigTerm, LinearArgTerm>;

struct EvalPoint {
    std::vector<double> coords;
};

// A finite sum of terms over variables x_1..x_n. Instances are immutable and
// always in canonical form: terms sorted by (family, key), duplicate keys
// merged, negligible coefficients dropped. Structural equality of two
// canonical expressions implies pointwise equality.
class Expression {
public:
    Expression() : dimension_(1) {}
    explicit Expression(int dimension);
    Expression(int dimension, std::vector<Term> terms);

    int dimension() const { return dimension_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    bool operator==(const Expression&) const = default;

private:
    int dimension_;
    std::vector<Term> terms_;
};

// Coefficients below this magnitude are dropped after merging; absorbs
// product-to-sum rounding.
inline constexpr double kMergeEpsilon = 1e-15;

Expression constant(int dimension, double value);

double eval(const Expression& e, const EvalPoint& p);
double eval_term(const Term& t, const EvalPoint& p);

Expression add(const Expression& a, const Expression& b);
Expression scale(const Expression& e, double factor);
Expression negate(const Expression& e);

// Expands a product of monomial/trig expressions into canonical form,
// reducing same-variable trig products to single harmonics via
// cos a cos b = cos(a-b)/2 + cos(a+b)/2. Constant monomials scale trig terms;
// any other mixed monomial/trig pairing, and any product touching an RBF or
// linear-argument term, throws UnsupportedProduct.
Expression expand_product(const Expression& a, const Expression& b);

Expression expand_power(const Expression& e, int power, int max_power = 8);

// Re-normalizes an expression; idempotent, value-preserving.
Expression canonicalize(const Expression& e);

// Widens to a larger dimension; the added variables do not affect the value.
// RBF terms cannot be widened (their value depends on every coordinate).
Expression embed(const Expression& e, int dimension);

// cos(sum_d freqs[d] x_d + phase) expanded into canonical product-form
// harmonics via the angle-addition identities.
Expression cosine_of_linear(int dimension, const std::vector<int>& freqs, double phase);

// Structural comparison with per-field tolerance |a-b| <= tol*max(1,|a|,|b|);
// integer content must match exactly.
bool approx_equal(const Expression& a, const Expression& b, double tol);

// JSON document {"dimension": n, "terms": [...]}, one object per term keyed
// by "family".
std::string to_json_string(const Expression& e);
Expression expression_from_json(const std::string& text);

}  // namespace gsmooth

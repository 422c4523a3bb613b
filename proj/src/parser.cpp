#include "gsmooth/parser.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

namespace gsmooth {
namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916398;
constexpr double kThreeHalfPi = 4.7123889803846898576939650749193;

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
    Number, Ident, Plus, Minus, Star, Caret,
    LParen, RParen, LBracket, RBracket, Comma, Equals, End, Bad
};

struct Token {
    Tok kind = Tok::End;
    SourceSpan span;
    std::string_view text;
    double number = 0.0;
};

struct LexedInput {
    std::vector<Token> tokens;
};

bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

LexedInput lex(std::string_view src) {
    LexedInput out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        Token t;
        t.span.start = i;
        auto single = [&](Tok k) {
            t.kind = k;
            ++i;
        };
        if (c >= '0' && c <= '9') {
            std::size_t j = i;
            while (j < src.size() && src[j] >= '0' && src[j] <= '9') ++j;
            if (j < src.size() && src[j] == '.') {
                ++j;
                while (j < src.size() && src[j] >= '0' && src[j] <= '9') ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && src[k] >= '0' && src[k] <= '9') {
                    while (k < src.size() && src[k] >= '0' && src[k] <= '9') ++k;
                    j = k;
                }
            }
            t.kind = Tok::Number;
            t.text = src.substr(i, j - i);
            std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
            i = j;
        } else if (is_ident_char(c)) {
            std::size_t j = i;
            while (j < src.size() && (is_ident_char(src[j]) || (src[j] >= '0' && src[j] <= '9'))) ++j;
            t.kind = Tok::Ident;
            t.text = src.substr(i, j - i);
            i = j;
        } else {
            switch (c) {
                case '+': single(Tok::Plus); break;
                case '-': single(Tok::Minus); break;
                case '*': single(Tok::Star); break;
                case '^': single(Tok::Caret); break;
                case '(': single(Tok::LParen); break;
                case ')': single(Tok::RParen); break;
                case '[': single(Tok::LBracket); break;
                case ']': single(Tok::RBracket); break;
                case ',': single(Tok::Comma); break;
                case '=': single(Tok::Equals); break;
                default: single(Tok::Bad); break;
            }
        }
        t.span.end = i;
        out.tokens.push_back(t);
    }
    Token end;
    end.kind = Tok::End;
    end.span = {src.size(), src.size()};
    out.tokens.push_back(end);
    return out;
}

// ---------------------------------------------------------------------------
// Parser

struct ParseFailure {
    ParseError error;
};

[[noreturn]] void fail(SourceSpan span, std::string message,
                       std::vector<std::string> expected = {}) {
    throw ParseFailure{ParseError{span, std::move(message), std::move(expected)}};
}

SourceSpan join(SourceSpan a, SourceSpan b) {
    return {std::min(a.start, b.start), std::max(a.end, b.end)};
}

// A parsed subexpression; dimensions grow as variables appear and operands
// are widened on demand.
struct Value {
    Expression expr;
    SourceSpan span;
};

// Multiplicative factor: either a subexpression or a constant e^exponent that
// merges into trig damping.
struct Factor {
    bool is_exp = false;
    double exponent = 0.0;
    Expression expr;
    SourceSpan span;
};

std::optional<double> constant_value(const Expression& e) {
    if (e.empty()) return 0.0;
    if (e.terms().size() != 1) return std::nullopt;
    const auto* m = std::get_if<MonomialTerm>(&e.terms()[0]);
    if (!m) return std::nullopt;
    for (int p : m->exponents)
        if (p != 0) return std::nullopt;
    return m->coeff;
}

Expression widen(const Expression& e, int dimension, SourceSpan span) {
    try {
        return embed(e, dimension);
    } catch (const DimensionMismatch&) {
        fail(span, "rbf center must list one entry per variable of the full expression");
    }
}

// Applies a constant factor exp(g): harmonic terms absorb it into damping
// (which must stay nonnegative), every other family scales its coefficient.
Expression apply_exp_factor(const Expression& e, double g) {
    std::vector<Term> terms = e.terms();
    for (Term& t : terms) {
        if (auto* tr = std::get_if<TrigTerm>(&t)) {
            const double newd = tr->damping - g;
            if (newd >= 0.0) {
                tr->damping = newd;
            } else {
                tr->coeff *= std::exp(g - tr->damping);
                tr->damping = 0.0;
            }
        } else if (auto* m = std::get_if<MonomialTerm>(&t)) {
            m->coeff *= std::exp(g);
        } else if (auto* r = std::get_if<RbfTerm>(&t)) {
            r->amp *= std::exp(g);
        } else {
            std::get<LinearArgTerm>(t).coeff *= std::exp(g);
        }
    }
    return Expression(e.dimension(), std::move(terms));
}

struct LinearForm {
    std::map<int, double> coeffs;  // 1-based variable index -> coefficient
    double constant = 0.0;
    bool has_constant = false;
    SourceSpan span;
};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src), lexed_(lex(src)) {}

    Expression run() {
        Value v = parse_expr();
        expect(Tok::End, "end of input");
        return std::move(v.expr);
    }

private:
    const Token& peek() const { return lexed_.tokens[pos_]; }
    Token next() { return lexed_.tokens[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }
    Token expect(Tok k, const char* what) {
        if (peek().kind != k)
            fail(peek().span, std::string("expected ") + what, {what});
        return next();
    }

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.depth_ > 200) fail(p.peek().span, "expression too deeply nested");
        }
        ~DepthGuard() { --p.depth_; }
    };

    Value parse_expr() {
        DepthGuard guard(*this);
        bool negate_first = false;
        if (accept(Tok::Plus)) {
        } else if (peek().kind == Tok::Minus) {
            next();
            negate_first = true;
        }
        Value acc = parse_term();
        if (negate_first) acc.expr = negate(acc.expr);
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool minus = next().kind == Tok::Minus;
            Value rhs = parse_term();
            if (minus) rhs.expr = negate(rhs.expr);
            const int dim = std::max(acc.expr.dimension(), rhs.expr.dimension());
            acc.expr = add(widen(acc.expr, dim, acc.span), widen(rhs.expr, dim, rhs.span));
            acc.span = join(acc.span, rhs.span);
        }
        return acc;
    }

    Value parse_term() {
        DepthGuard guard(*this);
        Factor first = parse_factor();
        std::optional<Value> acc;
        double exp_sum = 0.0;
        SourceSpan span = first.span;
        auto fold = [&](Factor&& f) {
            span = join(span, f.span);
            if (f.is_exp) {
                exp_sum += f.exponent;
                return;
            }
            if (!acc) {
                acc = Value{std::move(f.expr), f.span};
                return;
            }
            const int dim = std::max(acc->expr.dimension(), f.expr.dimension());
            Expression a = widen(acc->expr, dim, acc->span);
            Expression b = widen(f.expr, dim, f.span);
            if (auto ca = constant_value(a)) {
                acc->expr = scale(b, *ca);
            } else if (auto cb = constant_value(b)) {
                acc->expr = scale(a, *cb);
            } else {
                try {
                    acc->expr = expand_product(a, b);
                } catch (const std::invalid_argument& ex) {
                    fail(join(acc->span, f.span), ex.what());
                }
            }
            acc->span = join(acc->span, f.span);
        };
        fold(std::move(first));
        while (accept(Tok::Star)) fold(parse_factor());
        Expression result = acc ? std::move(acc->expr) : constant(1, 1.0);
        if (exp_sum != 0.0) result = apply_exp_factor(result, exp_sum);
        return {std::move(result), span};
    }

    Factor parse_factor() {
        DepthGuard guard(*this);
        Factor base = parse_base();
        if (peek().kind != Tok::Caret) return base;
        next();
        const Token exp_tok = peek();
        if (exp_tok.kind != Tok::Number || exp_tok.text.find('.') != std::string_view::npos ||
            exp_tok.text.find('e') != std::string_view::npos ||
            exp_tok.text.find('E') != std::string_view::npos)
            fail(exp_tok.span, "expected a nonnegative integer exponent");
        next();
        const double pval = exp_tok.number;
        if (pval > 64.0) fail(exp_tok.span, "limit exceeded: power above expansion limit");
        const int p = static_cast<int>(pval);
        if (base.is_exp) {
            base.exponent *= p;
            base.span = join(base.span, exp_tok.span);
            return base;
        }
        try {
            if (p == 0) base.expr = constant(base.expr.dimension(), 1.0);
            else if (p > 1) base.expr = expand_power(base.expr, p);
        } catch (const std::invalid_argument& ex) {
            fail(join(base.span, exp_tok.span), ex.what());
        }
        base.span = join(base.span, exp_tok.span);
        return base;
    }

    Factor parse_base() {
        DepthGuard guard(*this);
        const Token t = peek();
        if (t.kind == Tok::Number) {
            next();
            return {false, 0.0, constant(1, t.number), t.span};
        }
        if (t.kind == Tok::LParen) {
            next();
            Value inner = parse_expr();
            const Token close = expect(Tok::RParen, ")");
            return {false, 0.0, std::move(inner.expr), join(t.span, close.span)};
        }
        if (t.kind == Tok::Ident) return parse_ident();
        fail(t.span, "expected a number, variable, function, or parenthesized expression",
             {"number", "variable", "(", "function"});
    }

    std::optional<int> variable_index(std::string_view name) const {
        if (name.size() < 2 || name[0] != 'x') return std::nullopt;
        int idx = 0;
        for (std::size_t i = 1; i < name.size(); ++i) {
            if (name[i] < '0' || name[i] > '9') return std::nullopt;
            if (idx > 1000000) return std::nullopt;
            idx = idx * 10 + (name[i] - '0');
        }
        return idx;
    }

    Factor parse_ident() {
        const Token t = next();
        if (auto idx = variable_index(t.text)) {
            if (*idx < 1) fail(t.span, "variable indices are 1-based");
            if (*idx > 64) fail(t.span, "limit exceeded: variable index above 64");
            std::vector<int> exps(*idx, 0);
            exps[*idx - 1] = 1;
            return {false, 0.0, Expression(*idx, {MonomialTerm{1.0, std::move(exps)}}), t.span};
        }
        if (t.text == "sin" || t.text == "cos") return parse_trig_func(t);
        if (t.text == "sign" || t.text == "relu") return parse_activation_func(t);
        if (t.text == "rbf") return parse_rbf(t);
        if (t.text == "exp") return parse_exp(t);
        fail(t.span, "unknown identifier '" + std::string(t.text) + "'",
             {"sin", "cos", "sign", "relu", "rbf", "exp", "x<index>"});
    }

    double parse_signed_number(const char* what) {
        double sign = 1.0;
        if (accept(Tok::Minus)) sign = -1.0;
        else accept(Tok::Plus);
        const Token t = expect(Tok::Number, what);
        return sign * t.number;
    }

    // Optional trailing ", sigma = NUMBER" inside a function argument list.
    std::optional<double> parse_sigma_suffix() {
        if (!accept(Tok::Comma)) return std::nullopt;
        const Token name = expect(Tok::Ident, "sigma");
        if (name.text != "sigma") fail(name.span, "expected 'sigma'", {"sigma"});
        expect(Tok::Equals, "=");
        const Token vspan = peek();
        const double v = parse_signed_number("number");
        if (v < 0.0) fail(join(vspan.span, lexed_.tokens[pos_ - 1].span), "sigma must be nonnegative");
        return v;
    }

    LinearForm parse_linear() {
        LinearForm lf;
        lf.span = peek().span;
        bool first = true;
        double sign = 1.0;
        while (true) {
            if (first) {
                if (accept(Tok::Minus)) sign = -1.0;
                else if (accept(Tok::Plus)) sign = 1.0;
            }
            const Token t = peek();
            if (t.kind == Tok::Number) {
                next();
                double c = sign * t.number;
                lf.span = join(lf.span, t.span);
                if (accept(Tok::Star)) {
                    const Token v = expect(Tok::Ident, "variable");
                    auto idx = variable_index(v.text);
                    if (!idx || *idx < 1) fail(v.span, "expected a variable like x1");
                    if (*idx > 64) fail(v.span, "limit exceeded: variable index above 64");
                    lf.coeffs[*idx] += c;
                    lf.span = join(lf.span, v.span);
                } else {
                    lf.constant += c;
                    lf.has_constant = true;
                }
            } else if (t.kind == Tok::Ident) {
                auto idx = variable_index(t.text);
                if (!idx || *idx < 1)
                    fail(t.span, "expected a variable or number in a linear argument");
                if (*idx > 64) fail(t.span, "limit exceeded: variable index above 64");
                next();
                lf.coeffs[*idx] += sign;
                lf.span = join(lf.span, t.span);
            } else {
                fail(t.span, "expected a variable or number in a linear argument",
                     {"number", "variable"});
            }
            first = false;
            if (accept(Tok::Plus)) sign = 1.0;
            else if (accept(Tok::Minus)) sign = -1.0;
            else break;
        }
        return lf;
    }

    static bool all_integer(const LinearForm& lf) {
        for (const auto& [idx, c] : lf.coeffs)
            if (std::abs(c - std::llround(c)) > 1e-9 || std::abs(c) > 1e15) return false;
        return true;
    }

    static int linear_dimension(const LinearForm& lf) {
        int dim = 1;
        for (const auto& [idx, c] : lf.coeffs) dim = std::max(dim, idx);
        return dim;
    }

    Factor parse_trig_func(const Token& name) {
        const bool is_sin = name.text == "sin";
        expect(Tok::LParen, "(");
        LinearForm lf = parse_linear();
        std::optional<double> sigma = parse_sigma_suffix();
        const Token close = expect(Tok::RParen, ")");
        const SourceSpan span = join(name.span, close.span);

        const int dim = linear_dimension(lf);
        if (!sigma && all_integer(lf)) {
            std::vector<int> freqs(dim, 0);
            for (const auto& [idx, c] : lf.coeffs) freqs[idx - 1] = static_cast<int>(std::llround(c));
            const double phase = lf.constant + (is_sin ? -kHalfPi : 0.0);
            try {
                return {false, 0.0, cosine_of_linear(dim, freqs, phase), span};
            } catch (const std::invalid_argument& ex) {
                fail(span, ex.what());
            }
        }
        if (!is_sin)
            fail(span, sigma ? "cos does not take a sigma argument; use sin or a harmonic"
                             : "cos requires integer frequencies; use sin for general directions");
        if (lf.has_constant && lf.constant != 0.0)
            fail(lf.span,
                 "sin of a general linear form cannot carry a constant; append a fixed variable "
                 "instead");
        LinearArgTerm term;
        term.coeff = 1.0;
        term.activation = Activation::Sin;
        term.direction.assign(dim, 0.0);
        for (const auto& [idx, c] : lf.coeffs) term.direction[idx - 1] = c;
        term.smoothed_sigma = sigma.value_or(0.0);
        return {false, 0.0, Expression(dim, {std::move(term)}), span};
    }

    Factor parse_activation_func(const Token& name) {
        expect(Tok::LParen, "(");
        LinearForm lf = parse_linear();
        std::optional<double> sigma = parse_sigma_suffix();
        const Token close = expect(Tok::RParen, ")");
        const SourceSpan span = join(name.span, close.span);
        if (lf.has_constant)
            fail(lf.span, std::string(name.text) +
                              " takes a pure linear argument; model a bias by appending a fixed "
                              "variable (e.g. use x2 held at 1)");
        LinearArgTerm term;
        term.coeff = 1.0;
        term.activation = name.text == "sign" ? Activation::Sign : Activation::Relu;
        const int dim = linear_dimension(lf);
        term.direction.assign(dim, 0.0);
        for (const auto& [idx, c] : lf.coeffs) term.direction[idx - 1] = c;
        term.smoothed_sigma = sigma.value_or(0.0);
        return {false, 0.0, Expression(dim, {std::move(term)}), span};
    }

    Factor parse_rbf(const Token& name) {
        expect(Tok::LParen, "(");
        auto keyword = [&](const char* kw) {
            const Token t = expect(Tok::Ident, kw);
            if (t.text != kw) fail(t.span, std::string("expected '") + kw + "'", {kw});
            expect(Tok::Equals, "=");
        };
        keyword("amp");
        const double amp = parse_signed_number("number");
        expect(Tok::Comma, ",");
        keyword("center");
        expect(Tok::LBracket, "[");
        std::vector<double> center;
        center.push_back(parse_signed_number("number"));
        while (accept(Tok::Comma)) center.push_back(parse_signed_number("number"));
        expect(Tok::RBracket, "]");
        expect(Tok::Comma, ",");
        keyword("width");
        const Token wtok = peek();
        const double width = parse_signed_number("number");
        const Token close = expect(Tok::RParen, ")");
        const SourceSpan span = join(name.span, close.span);
        if (!(width > 0.0)) fail(join(wtok.span, close.span), "rbf width must be positive");
        if (center.size() > 64) fail(span, "limit exceeded: rbf center above 64 entries");
        RbfTerm term{amp, std::move(center), width};
        const int dim = static_cast<int>(term.center.size());
        return {false, 0.0, Expression(dim, {std::move(term)}), span};
    }

    Factor parse_exp(const Token& name) {
        expect(Tok::LParen, "(");
        const double g = parse_signed_number("number");
        const Token close = expect(Tok::RParen, ")");
        return {true, g, Expression(), join(name.span, close.span)};
    }

    std::string_view src_;
    LexedInput lexed_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace

ParseResult parse(std::string_view src) {
    std::size_t first = src.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return ParseError{{0, src.size()}, "empty input", {"expression"}};
    if (src[first] == '{') {
        try {
            return expression_from_json(std::string(src));
        } catch (const std::exception& ex) {
            return ParseError{{first, src.size()}, ex.what(), {}};
        }
    }
    try {
        Parser parser(src);
        return parser.run();
    } catch (ParseFailure& f) {
        if (f.error.span.end > src.size()) f.error.span.end = src.size();
        if (f.error.span.start > f.error.span.end) f.error.span.start = f.error.span.end;
        return std::move(f.error);
    } catch (const std::exception& ex) {
        return ParseError{{0, src.size()}, ex.what(), {}};
    }
}

Expression parse_or_throw(std::string_view src) {
    ParseResult r = parse(src);
    if (auto* err = std::get_if<ParseError>(&r))
        throw std::invalid_argument(render_error(src, *err));
    return std::move(std::get<Expression>(r));
}

std::string format_double(double v, int digits) {
    char buf[64];
    if (digits <= 0) {
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

namespace {

bool is_exact_integer(double v) {
    return std::abs(v) < 9.007199254740992e15 && v == std::nearbyint(v);
}

std::string variable_name(int d) { return "x" + std::to_string(d + 1); }

std::string linear_body(const std::vector<double>& coeffs, int digits) {
    std::string out;
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
        const double c = coeffs[d];
        if (c == 0.0) continue;
        const double mag = std::abs(c);
        if (out.empty()) {
            if (c < 0.0) out += "-";
        } else {
            out += c < 0.0 ? " - " : " + ";
        }
        if (mag != 1.0) out += format_double(mag, digits) + "*";
        out += variable_name(static_cast<int>(d));
    }
    return out;
}

struct RenderedTerm {
    bool negative = false;
    std::string body;
};

RenderedTerm render_term(const Term& t, int digits) {
    RenderedTerm r;
    if (const auto* m = std::get_if<MonomialTerm>(&t)) {
        r.negative = m->coeff < 0.0;
        const double mag = std::abs(m->coeff);
        std::string factors;
        for (std::size_t d = 0; d < m->exponents.size(); ++d) {
            if (m->exponents[d] == 0) continue;
            if (!factors.empty()) factors += "*";
            factors += variable_name(static_cast<int>(d));
            if (m->exponents[d] > 1) factors += "^" + std::to_string(m->exponents[d]);
        }
        if (factors.empty()) r.body = format_double(mag, digits);
        else if (mag == 1.0) r.body = factors;
        else r.body = format_double(mag, digits) + "*" + factors;
        return r;
    }
    if (const auto* rb = std::get_if<RbfTerm>(&t)) {
        r.body = "rbf(amp=" + format_double(rb->amp, digits) + ", center=[";
        for (std::size_t i = 0; i < rb->center.size(); ++i) {
            if (i) r.body += ", ";
            r.body += format_double(rb->center[i], digits);
        }
        r.body += "], width=" + format_double(rb->width, digits) + ")";
        return r;
    }
    if (const auto* tr = std::get_if<TrigTerm>(&t)) {
        r.negative = tr->coeff < 0.0;
        const double mag = std::abs(tr->coeff);
        std::string body;
        if (mag != 1.0) body += format_double(mag, digits) + "*";
        if (tr->damping > 0.0) body += "exp(-" + format_double(tr->damping, digits) + ")*";
        bool any = false;
        for (std::size_t d = 0; d < tr->freqs.size(); ++d) {
            const int k = tr->freqs[d];
            if (k == 0) continue;
            if (any) body += "*";
            any = true;
            std::string arg = (k == 1 ? "" : std::to_string(k) + "*") +
                              variable_name(static_cast<int>(d));
            const double phi = tr->phases[d];
            if (std::abs(phi - kThreeHalfPi) <= 1e-9) {
                body += "sin(" + arg + ")";
            } else if (phi == 0.0) {
                body += "cos(" + arg + ")";
            } else {
                body += "cos(" + arg + " + " + format_double(phi, digits) + ")";
            }
        }
        if (body.empty() || !any) body += format_double(1.0, digits);  // canonical form excludes this
        if (!body.empty() && body.back() == '*') body.pop_back();
        r.body = std::move(body);
        return r;
    }
    const auto& l = std::get<LinearArgTerm>(t);
    r.negative = l.coeff < 0.0;
    const double mag = std::abs(l.coeff);
    std::string body;
    if (mag != 1.0) body += format_double(mag, digits) + "*";
    body += activation_name(l.activation);
    body += "(" + linear_body(l.direction, digits);
    bool print_sigma = l.smoothed_sigma > 0.0;
    if (!print_sigma && l.activation == Activation::Sin) {
        // An unsmoothed integer-direction sin would re-parse as a harmonic;
        // spell the sigma to keep the family stable.
        print_sigma = std::all_of(l.direction.begin(), l.direction.end(), is_exact_integer);
    }
    if (print_sigma) body += ", sigma=" + format_double(l.smoothed_sigma, digits);
    body += ")";
    r.body = std::move(body);
    return r;
}

}  // namespace

std::string print(const Expression& e, int digits) {
    if (e.empty()) return "0";
    std::string out;
    for (const Term& t : e.terms()) {
        RenderedTerm r = render_term(t, digits);
        if (out.empty()) {
            if (r.negative) out += "-";
        } else {
            out += r.negative ? " - " : " + ";
        }
        out += r.body;
    }
    return out;
}

std::string render_error(std::string_view src, const ParseError& err) {
    std::string out = "error: " + err.message + "\n";
    std::string line(src);
    for (char& c : line)
        if (c == '\n' || c == '\t' || c == '\r') c = ' ';
    const std::size_t limit = 120;
    std::size_t offset = 0;
    if (line.size() > limit) {
        offset = err.span.start > 40 ? err.span.start - 40 : 0;
        line = line.substr(offset, limit);
    }
    out += "  " + line + "\n";
    const std::size_t start = err.span.start - offset;
    const std::size_t end = std::max(err.span.end - offset, start + 1);
    out += "  " + std::string(std::min(start, line.size()), ' ');
    out += std::string(std::max<std::size_t>(1, std::min(end, line.size() + 1) - start), '^');
    if (!err.expected.empty()) {
        out += "\n  expected: ";
        for (std::size_t i = 0; i < err.expected.size(); ++i) {
            if (i) out += ", ";
            out += err.expected[i];
        }
    }
    return out;
}

}  // namespace gsmooth

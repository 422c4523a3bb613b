#include "doctest.h"

#include <cmath>

#include "gsmooth/parser.hpp"
#include "gsmooth/smoothing.hpp"
#include "test_util.hpp"

using namespace gsmooth;
using testutil::close;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

bool is_error(const ParseResult& r) { return std::holds_alternative<ParseError>(r); }

const ParseError& error_of(const ParseResult& r) { return std::get<ParseError>(r); }

Expression ok(const ParseResult& r) {
    REQUIRE(!is_error(r));
    return std::get<Expression>(r);
}

}  // namespace

TEST_CASE("worked example strings parse to the expected structures") {
    Expression f = ok(parse("x1^2*x2^3 + 0.1*(x1^4 + x2^4)"));
    Expression want(2, {MonomialTerm{1.0, {2, 3}}, MonomialTerm{0.1, {4, 0}},
                        MonomialTerm{0.1, {0, 4}}});
    CHECK(f == want);

    Expression sq = ok(parse(
        "(2*cos(x1) - 3*sin(x2) + 4*cos(x1)*sin(x2) - 8*sin(x1)*cos(x2) + 4)^2"));
    CHECK(sq.dimension() == 2);
    SplitMix64 rng(3);
    for (int i = 0; i < 25; ++i) {
        EvalPoint p = testutil::random_point(rng, 2, -kPi, kPi);
        const double x = p.coords[0], y = p.coords[1];
        const double base = 2 * std::cos(x) - 3 * std::sin(y) + 4 * std::cos(x) * std::sin(y) -
                            8 * std::sin(x) * std::cos(y) + 4;
        CHECK(close(eval(sq, p), base * base, 1e-11));
    }
    CHECK_NOTHROW(smooth(sq, SmoothSigma(0.5)));
}

TEST_CASE("empty and malformed inputs produce spanned errors") {
    CHECK(is_error(parse("")));
    CHECK(is_error(parse("   ")));

    for (const char* bad : {"x1 +", "sin(x1", "rbf(amp=1)", "x0", "2 ** 3", "x1^2.5",
                            "foo(x1)", "x1^2*sin(x1)", "relu(x1 + 1)", "sign()",
                            "rbf(amp=1, center=[0], width=0)", "(((((", "x1 x2",
                            "cos(0.5*x1)", "sin(0.3*x1 + 1)", "exp(x1)",
                            "rbf(amp=1, center=[0], width=1) + x2^2"}) {
        const ParseResult r = parse(bad);
        REQUIRE_MESSAGE(is_error(r), bad);
        const ParseError& err = error_of(r);
        CHECK(!err.message.empty());
        CHECK(err.span.start <= err.span.end);
        CHECK(err.span.end <= std::string_view(bad).size());
    }

    // span points at the offending token
    const ParseResult bad_ident = parse("x1 + foo(x1)");
    CHECK(error_of(bad_ident).span.start == 5);
    CHECK(error_of(bad_ident).span.end == 8);
}

TEST_CASE("unsupported products are reported with spans") {
    const ParseResult r = parse("x1^2*sin(x1)");
    REQUIRE(is_error(r));
    CHECK(error_of(r).message.find("unsupported product") != std::string::npos);
}

TEST_CASE("integer harmonics, linear-arg routing, and constants") {
    // integer frequencies become harmonics, constants fold into phases
    Expression h = ok(parse("sin(2*x1 + 0.5)"));
    REQUIRE(h.terms().size() == 1);
    const auto& t = std::get<TrigTerm>(h.terms()[0]);
    CHECK(t.freqs[0] == 2);
    for (double x : {-1.0, 0.3, 2.2})
        CHECK(close(eval(h, {{x}}), std::sin(2 * x + 0.5), 1e-14));

    // multi-variable integer argument expands by angle addition
    Expression m = ok(parse("sin(x1 + x2)"));
    for (double x : {-1.0, 0.4})
        for (double y : {0.2, 1.7})
            CHECK(close(eval(m, {{x, y}}), std::sin(x + y), 1e-14));

    // non-integer coefficients route to a linear-argument sin
    Expression l = ok(parse("sin(0.37*x1 - 1.2*x2)"));
    REQUIRE(l.terms().size() == 1);
    CHECK(std::holds_alternative<LinearArgTerm>(l.terms()[0]));

    // explicit sigma keeps the linear-arg family even for integer directions
    Expression ls = ok(parse("sin(2*x1, sigma=0.5)"));
    REQUIRE(ls.terms().size() == 1);
    const auto& lt = std::get<LinearArgTerm>(ls.terms()[0]);
    CHECK(lt.activation == Activation::Sin);
    CHECK(lt.smoothed_sigma == 0.5);

    // constants alone become constant monomials
    Expression c = ok(parse("cos(0.25)"));
    CHECK(c == constant(1, std::cos(0.25)));
}

TEST_CASE("damping factors round-trip through exp") {
    Expression e = ok(parse("exp(-0.75)*cos(2*x1)"));
    REQUIRE(e.terms().size() == 1);
    const auto& t = std::get<TrigTerm>(e.terms()[0]);
    CHECK(t.damping == 0.75);
    CHECK(t.coeff == 1.0);

    // exp against a non-trig factor scales the coefficient
    Expression p = ok(parse("exp(-1)*x1^2"));
    CHECK(std::get<MonomialTerm>(p.terms()[0]).coeff == doctest::Approx(std::exp(-1.0)));

    // bare exp is a constant
    CHECK(ok(parse("exp(-2)")) == constant(1, std::exp(-2.0)));
}

TEST_CASE("print basics") {
    CHECK(print(Expression(2)) == "0");
    CHECK(print(Expression(1, {MonomialTerm{1.0, {2}}})) == "x1^2");
    CHECK(print(Expression(2, {MonomialTerm{-2.5, {1, 3}}})) == "-2.5*x1*x2^3");
    CHECK(print(Expression(1, {TrigTerm{1.0, {1}, {-kPi / 2}, 0.0}})) == "sin(x1)");
    Expression sm = smooth(parse_or_throw("sin(x1)"), SmoothSigma(1.0));
    CHECK(print(sm) == "exp(-0.5)*sin(x1)");
}

TEST_CASE("print/parse round trip on randomized expressions") {
    SplitMix64 rng(404);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = rng.next_int(1, 3);
        Expression e = testutil::random_expression(rng, n);
        const std::string text = print(e);
        CAPTURE(text);
        const ParseResult r = parse(text);
        REQUIRE(!is_error(r));
        const Expression back = std::get<Expression>(r);
        CHECK_MESSAGE(approx_equal(back, e, 1e-14), text);
    }
}

TEST_CASE("round trip through smoothing") {
    SplitMix64 rng(505);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.next_int(1, 2);
        Expression e = smooth(testutil::random_expression(rng, n), SmoothSigma(rng.next_in(0.1, 1.5)));
        if (e.empty()) continue;
        bool witnessed = false;
        for (const Term& t : e.terms()) witnessed |= testutil::references_last_variable(t, n);
        if (!witnessed) continue;
        const std::string text = print(e);
        CAPTURE(text);
        const ParseResult r = parse(text);
        REQUIRE(!is_error(r));
        CHECK_MESSAGE(approx_equal(std::get<Expression>(r), e, 1e-14), text);
    }
}

TEST_CASE("json input is auto-detected") {
    Expression e(2, {MonomialTerm{2.0, {1, 1}}});
    Expression back = ok(parse(to_json_string(e)));
    CHECK(back == e);
    CHECK(is_error(parse("{\"dimension\": bogus}")));
}

TEST_CASE("parse is total on fuzzed inputs") {
    SplitMix64 rng(606);
    const std::string alphabet = "x123456789+-*^()., =[]sincoerlbampwidthgf";
    for (int trial = 0; trial < 10000; ++trial) {
        const int len = rng.next_int(0, 60);
        std::string s;
        for (int i = 0; i < len; ++i) {
            if (rng.next_u64() % 2)
                s += alphabet[rng.next_u64() % alphabet.size()];
            else
                s += static_cast<char>(rng.next_u64() % 256);
        }
        (void)parse(s);  // must neither crash nor hang
    }
}

TEST_CASE("render_error marks the span") {
    const ParseResult r = parse("x1 + foo(x1)");
    const std::string msg = render_error("x1 + foo(x1)", error_of(r));
    CHECK(msg.find("error:") != std::string::npos);
    CHECK(msg.find("^") != std::string::npos);
}

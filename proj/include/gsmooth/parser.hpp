#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gsmooth/expression.hpp"

namespace gsmooth {

// Byte range [start, end) into the parser input.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
};

struct ParseError {
    SourceSpan span;
    std::string message;
    std::vector<std::string> expected;
};

using ParseResult = std::variant<Expression, ParseError>;

// Text DSL -> Expression. Grammar:
//
//   expr    := ["+"|"-"] term (("+"|"-") term)*
//   term    := factor ("*" factor)*
//   factor  := base ("^" UINT)?
//   base    := NUMBER | VAR | "(" expr ")" | func
//   func    := ("sin"|"cos") "(" linear ["," "sigma" "=" NUMBER] ")"
//            | ("sign"|"relu") "(" linear ["," "sigma" "=" NUMBER] ")"
//            | "rbf" "(" "amp" "=" NUMBER "," "center" "=" vector ","
//                        "width" "=" NUMBER ")"
//            | "exp" "(" SIGNED_NUMBER ")"
//   linear  := ["+"|"-"] lpart (("+"|"-") lpart)*
//   lpart   := NUMBER ["*" VAR] | VAR
//   vector  := "[" SIGNED_NUMBER ("," SIGNED_NUMBER)* "]"
//   VAR     := "x" UINT          (1-based variable index)
//
// sin/cos arguments with integer coefficients become harmonics (a constant
// offset becomes a phase); sin of a non-integer linear form becomes a
// linear-argument term, as does any sin/sign/relu carrying the optional
// sigma argument. sign/relu arguments must be pure linear forms; model a
// bias by appending a fixed variable to the input. "exp(c)" is a constant
// factor that merges into the damping of harmonic terms.
//
// Input starting with "{" is instead decoded as the JSON expression
// document. Products and powers are expanded at parse time; the family
// restrictions of expand_product apply and are reported as ParseErrors.
ParseResult parse(std::string_view src);

// Convenience wrapper that throws std::invalid_argument with a rendered
// message on failure.
Expression parse_or_throw(std::string_view src);

// Deterministic canonical rendering; parse(print(e)) recovers canonicalize(e)
// (for RBF-free expressions, up to trailing unused variables). digits <= 0
// prints shortest round-trip representations.
std::string print(const Expression& e, int digits = 0);

std::string format_double(double v, int digits = 0);

// Human-readable error display with a caret line pointing at the span.
std::string render_error(std::string_view src, const ParseError& err);

}  // namespace gsmooth

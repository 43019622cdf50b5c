#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "lcpoly/polynomial.hpp"

namespace lcpoly {

/// Highest single exponent and total degree the parser accepts.
inline constexpr unsigned kMaxParsedDegree = 1024;

/// Parses a polynomial expression over x1..x{dim}.
///
///   expr   := term (("+"|"-") term)*
///   term   := factor ("*" factor)*
///   factor := atom ("^" nonneg_int)?
///   atom   := number | variable | "(" expr ")" | "-" atom
///
/// Note that unary minus binds tighter than "^": "-x1^2" is (-x1)^2.
/// Throws ParseError (with a byte offset) on malformed input or an
/// out-of-range variable index.
[[nodiscard]] Polynomial parse(std::string_view text, std::size_t dim);

/// Canonical text: graded-lex order, explicit "*", 17 significant digits.
/// The output reparses to an identical polynomial.
[[nodiscard]] std::string to_string(const Polynomial& p);

}  // namespace lcpoly

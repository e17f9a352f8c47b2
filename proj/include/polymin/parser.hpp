#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polymin/polynomial.hpp"

namespace polymin {

/// Parse a polynomial expression over the given ordered variable names.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := ('+'|'-')* factor ('*' factor)*
///   factor := base ('^' uint)?
///   base   := number | identifier | '(' expr ')'
///
/// Multiplication is always explicit; exponents are unsigned integer
/// literals. Throws ParseError with a byte offset on malformed input.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars);

/// Render with terms in descending graded-lex order. Coefficients use the
/// shortest digit string that parses back to the same double, so
/// parse_polynomial(format_polynomial(p)) == p exactly.
std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& vars);

std::string format_monomial(const Monomial& m, const std::vector<std::string>& vars);

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

/// True if `name` matches [a-zA-Z_][a-zA-Z0-9_]* .
bool is_valid_identifier(std::string_view name);

} // namespace polymin

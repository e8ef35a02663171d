#pragma once

#include "dynsheaf/rational_map.hpp"

#include <string>

namespace dynsheaf {

/// Parses an arithmetic expression in z with complex literals (3, 2.5i,
/// 1+2i), operators + - * / ^ (integer exponents) and parentheses into a
/// rational map in lowest terms. Throws SyntaxError with a column position,
/// or NonRationalExpression for things like z^z.
RationalMap parse_map(const std::string& text, const Tolerances& tol = {});

} // namespace dynsheaf

#pragma once

#include <vector>

#include "liewn/matrix.hpp"

namespace liewn::detail {

/// a * b through the packed form; pays off for large operands.
sym::Expr packed_product(const sym::Expr& a, const sym::Expr& b);

/// Division-free determinant by expansion over column subsets, evaluated on a
/// packed integer-exponent representation. Intended for small non-unit cases.
sym::Expr subset_determinant(const SymMatrix& a);

/// det(A with column n replaced by b), for every n.
std::vector<sym::Expr> cramer_numerators(const SymMatrix& a, const std::vector<sym::Expr>& b);

}  // namespace liewn::detail

#pragma once

#include <string>

#include "liewn/expr.hpp"

namespace liewn::sym {

enum class Style { Latex, Text, Json };

/// Text output is parseable by parse_expr. LaTeX output folds matched
/// exponential pairs e^{±a} into cosh/sinh, or cos/sin when a is imaginary.
std::string render(const Expr& e, Style style);
std::string render(const RationalExpr& e, Style style);

inline std::string text(const Expr& e) { return render(e, Style::Text); }
inline std::string latex(const Expr& e) { return render(e, Style::Latex); }

Style style_from_name(const std::string& name);

}  // namespace liewn::sym

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liewn/tree.hpp"

namespace liewn::sym {

struct ParseOptions {
    /// When set, only these names are accepted as parameters (interned on use).
    /// When unset, any already-interned parameter name is accepted.
    std::optional<std::vector<std::string>> parameters;
    /// Accept and intern any unknown identifier as a parameter.
    bool allow_new_parameters = false;
};

/// Symbolic grammar: integers, `/`, `i`, `sqrt(d)`, symbols, `+ - * / ^`,
/// `exp(...)`, `cos/sin/cosh/sinh(...)` (expanded into exponentials), parentheses.
/// Throws ParseError with the byte offset of the failure.
Node::Ptr parse_tree(std::string_view s, const ParseOptions& opts = {});
Expr parse_expr(std::string_view s, const ParseOptions& opts = {});

/// Numeric grammar for CLI values: decimals, `i`, `pi`, `e`, `+ - * / ^`,
/// and ln, log, exp, sqrt, sin, cos, tan, sinh, cosh, tanh.
std::complex<double> parse_complex(std::string_view s);

/// Comma-separated list of parse_complex values.
std::vector<std::complex<double>> parse_complex_list(std::string_view s);

}  // namespace liewn::sym

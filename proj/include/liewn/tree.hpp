#pragma once

#include <memory>
#include <vector>

#include "liewn/expr.hpp"

namespace liewn::sym {

/// Raw expression tree, as produced by the parser or built by hand.
struct Node {
    enum class Kind { Add, Mul, Pow, Exp, Sym, Const };
    using Ptr = std::shared_ptr<const Node>;

    Kind kind = Kind::Const;
    std::vector<Ptr> children;
    Rational exponent;  // Pow
    Symbol symbol;      // Sym
    Coefficient value;  // Const

    static Ptr constant(Coefficient c);
    static Ptr sym(Symbol s);
    static Ptr add(std::vector<Ptr> xs);
    static Ptr mul(std::vector<Ptr> xs);
    static Ptr pow(Ptr base, Rational e);
    static Ptr exp(Ptr arg);
};

/// Canonical form of a tree. Negative exponents are accepted only on units
/// (coefficient times exponential); anything else raises UnsupportedForm.
Expr normalize(const Node& n);
inline Expr normalize(const Node::Ptr& n) { return normalize(*n); }

/// Tree whose normalization reproduces e exactly.
Node::Ptr to_tree(const Expr& e);

}  // namespace liewn::sym

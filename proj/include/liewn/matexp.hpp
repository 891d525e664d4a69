#pragma once

#include <string>
#include <utility>
#include <vector>

#include "liewn/matrix.hpp"

namespace liewn::mexp {

using sym::Coefficient;
using sym::Expr;
using sym::Rational;

using Eigenvalues = std::vector<std::pair<Coefficient, unsigned>>;

struct ExpClass {
    enum class Tag { Nilpotent, Diagonal, Spectral, Unsupported };
    Tag tag = Tag::Unsupported;
    unsigned degree = 0;      // Nilpotent: smallest k with M^k = 0
    Eigenvalues eigenvalues;  // Spectral
    std::string reason;       // Unsupported

    [[nodiscard]] std::string describe() const;
};

ExpClass classify(const SymMatrix& m);

/// Characteristic polynomial det(xI - M), coefficients from x^0 up to x^n.
std::vector<Coefficient> char_poly(const CMatrix& m);

/// Numerically located, lattice-snapped and exactly verified eigenvalues.
/// Throws UnsupportedForm when M has symbolic entries or a root cannot be identified.
Eigenvalues eigenvalues_exact(const SymMatrix& m);

/// exp(s M). Throws UnsupportedForm carrying the classification reason.
SymMatrix sym_exp(const SymMatrix& m, const Expr& s);
SymMatrix sym_exp(const SymMatrix& m, const Expr& s, const ExpClass& cls);

CMatrix to_constant(const SymMatrix& m);  // throws UnsupportedForm on symbolic entries

}  // namespace liewn::mexp

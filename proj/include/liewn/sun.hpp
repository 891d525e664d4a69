#pragma once

#include <string>
#include <vector>

#include "liewn/liealg.hpp"

namespace liewn::sun {

using sym::Expr;
using sym::Rational;

struct GeneratorLabel {
    enum class Role { PositiveRoot, Cartan, NegativeRoot, Other };
    Role role = Role::Other;
    std::size_t n = 0, k = 0;  // root (n,k); Cartan j is stored in n

    [[nodiscard]] std::string text() const;
};

struct GeneratorSet {
    std::size_t N = 0;
    std::vector<CMatrix> mats;
    std::vector<GeneratorLabel> labels;
    std::string name;

    [[nodiscard]] std::size_t order() const noexcept { return mats.size(); }
};

/// f1(n,k) = k + N(n-1) - (n/2)(n+1), evaluated exactly.
Rational f1(std::size_t n, std::size_t k, std::size_t N);
/// f2(n,k) = k + (n-1)(n-2)/2, evaluated exactly.
Rational f2(std::size_t n, std::size_t k);

/// Cartan-Weyl basis: raising E_nk (n<k), then diag(..,1,-1,..), then lowering E_nk (n>k).
GeneratorSet sun_generators(std::size_t N);

/// The eight Gell-Mann matrices.
GeneratorSet gellmann_generators();

/// (i/2) sigma_j, j = 1..3.
GeneratorSet pauli_generators();

/// E12, diag(1/2, -1/2), E21: the two-generator structure of the parametrized family
/// with upsilon = 1, epsilon = -1, used for single-qubit gates.
GeneratorSet qubit_generators();

lie::Algebra algebra(const GeneratorSet& g, sym::SymbolKind kind = sym::SymbolKind::Lambda);

/// prod_l exp(s_l g_l), left to right.
SymMatrix explicit_teo(const GeneratorSet& g, const std::vector<Expr>& symbols);
SymMatrix explicit_teo(const GeneratorSet& g, sym::SymbolKind kind = sym::SymbolKind::Lambda);

}  // namespace liewn::sun

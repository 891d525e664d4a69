#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "liewn/liealg.hpp"
#include "liewn/render.hpp"

namespace liewn::wn {

using lie::Algebra;
using lie::LieVector;
using sym::Expr;
using sym::RationalExpr;
using sym::Symbol;
using sym::SymbolKind;

struct BCHMatrixSet {
    std::vector<SymMatrix> b;  // b[0] = identity, b[i] = exp(Lambda_i Upsilon^i)
    [[nodiscard]] const SymMatrix& operator[](std::size_t i) const { return b.at(i); }
    [[nodiscard]] std::size_t order() const noexcept { return b.empty() ? 0 : b.size() - 1; }
};

BCHMatrixSet bch_matrices(const Algebra& a);

/// Row j of b^i: exp(Lambda_i ad g_i) g_j as a Lie vector.
LieVector similarity_transform(const Algebra& a, std::size_t i, std::size_t j);
LieVector similarity_transform(const BCHMatrixSet& b, std::size_t i, std::size_t j);

/// (index, scale) links; chain[0] is the innermost transformation, applied first.
using Chain = std::vector<std::pair<std::size_t, Expr>>;
LieVector nested_similarity(const Algebra& a, const Chain& chain, const LieVector& v);

std::string render_lie_vector(const LieVector& v, sym::Style style);

struct CouplingMatrix {
    SymMatrix xi;
    Expr det;
};

CouplingMatrix coupling_matrix(const Algebra& a);
CouplingMatrix coupling_matrix(const BCHMatrixSet& b);

/// Exact inverse num/den of a square matrix. Unit pivots give den = 1; the block
/// left without unit pivots contributes its determinant as den.
struct Inverse {
    SymMatrix num;
    Expr den;
    Expr det;
};
Inverse invert(const SymMatrix& m);
Expr determinant(const SymMatrix& m);

/// Matrix C with eta_l = sum_n C(l,n) dLambda_n/dt, i.e. C = i xi^T.
SymMatrix coupled_odes(const Algebra& a);

enum class ODEKind { TimeEvolution, Factorization };

struct ODESystem {
    ODEKind kind = ODEKind::TimeEvolution;
    SymbolKind coefficient_kind = SymbolKind::Lambda;  // unknowns
    SymbolKind input_kind = SymbolKind::Eta;           // eta or lambda
    /// TimeEvolution: i dLambda_n/dt = rhs[n-1]; Factorization: dLambda_n/dtheta = rhs[n-1].
    std::vector<RationalExpr> rhs;
    CouplingMatrix coupling;
    bool locally_valid = false;  // det is not a unit
    std::string singular_locus_note;

    [[nodiscard]] std::size_t order() const noexcept { return rhs.size(); }
    [[nodiscard]] Symbol unknown(std::size_t n) const { return {coefficient_kind, static_cast<std::uint32_t>(n)}; }
    [[nodiscard]] Symbol input(std::size_t n) const { return {input_kind, static_cast<std::uint32_t>(n)}; }
};

ODESystem decoupled_odes(const Algebra& a);
ODESystem factorization_odes(const Algebra& a);

std::string render_system(const ODESystem& s, sym::Style style);
std::string render_coupled(const SymMatrix& c, SymbolKind unknowns, sym::Style style);
std::string render_matrix(const SymMatrix& m, sym::Style style);

struct BCH3 {
    std::complex<double> L1, L2, L3;
};

/// BCH-like relations for the parametrized three-generator family.
/// Throws StructuralError at a branch singularity.
BCH3 bch_closed_form_3gen(std::complex<double> l1, std::complex<double> l2, std::complex<double> l3,
                          std::complex<double> upsilon, std::complex<double> epsilon);

struct UnitarityReport {
    double residual_modulus = 0;  // ||L3| - |L1||
    double residual_real = 0;     // |e^{Re L2} - (1 + |L1|^2)|
    double residual_phase = 0;    // |e^{i Im L2} + e^{i(phi1+phi3)}|, 0 when degenerate
    bool phase_degenerate = false;
    double tol = 0;
    [[nodiscard]] bool pass() const noexcept {
        return residual_modulus <= tol && residual_real <= tol && (phase_degenerate || residual_phase <= tol);
    }
};

UnitarityReport unitarity_check_su2(std::complex<double> l1, std::complex<double> l2, std::complex<double> l3,
                                    double tol);

}  // namespace liewn::wn

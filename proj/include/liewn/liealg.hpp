#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liewn/matrix.hpp"

namespace liewn::lie {

using sym::Expr;
using sym::Symbol;
using sym::SymbolKind;

/// gamma[i][j][l] with [g_i, g_j] = sum_l gamma[i][j][l] g_l. Indices are 1-based.
class StructureTensor {
public:
    StructureTensor() = default;
    explicit StructureTensor(std::size_t order) : order_(order), g_(order * order * order) {}

    [[nodiscard]] std::size_t order() const noexcept { return order_; }
    Expr& operator()(std::size_t i, std::size_t j, std::size_t l);
    const Expr& operator()(std::size_t i, std::size_t j, std::size_t l) const;

    friend bool operator==(const StructureTensor&, const StructureTensor&) = default;

private:
    [[nodiscard]] std::size_t offset(std::size_t i, std::size_t j, std::size_t l) const;
    std::size_t order_ = 0;
    std::vector<Expr> g_;
};

/// Components on g_1..g_L.
using LieVector = std::vector<Expr>;

struct Algebra {
    std::string name;
    StructureTensor gamma;
    /// Kind used for the factorized coefficients (Lambda, or Theta for the Pauli example).
    SymbolKind coefficient_kind = SymbolKind::Lambda;
    std::vector<CMatrix> generators;  // empty for abstract algebras
    std::vector<std::string> parameters;

    [[nodiscard]] std::size_t order() const noexcept { return gamma.order(); }
    [[nodiscard]] bool has_generators() const noexcept { return !generators.empty(); }
    [[nodiscard]] Symbol coefficient(std::size_t n) const { return {coefficient_kind, static_cast<std::uint32_t>(n)}; }

    friend bool operator==(const Algebra&, const Algebra&) = default;
};

struct StructureEntry {
    std::size_t i = 0, j = 0, l = 0;
    Expr coeff;
};

/// Entries are given for i < j only; the lower triangle follows by antisymmetry.
Algebra from_structure_constants(std::size_t order, const std::vector<StructureEntry>& upper,
                                 std::vector<std::string> parameters = {}, std::string name = {});

/// Structure constants by exact expansion of every commutator in the generator basis.
Algebra from_matrix_generators(const std::vector<CMatrix>& mats, std::string name = {});

struct ValidationReport {
    struct Antisymmetry {
        std::size_t i, j, l;
    };
    struct Jacobi {
        std::size_t i, j, k, l;
        Expr residual;
    };
    struct Representation {
        std::size_t i, j;
        std::string detail;
    };
    std::vector<Antisymmetry> antisymmetry;
    std::vector<Jacobi> jacobi;
    std::vector<Representation> representation;

    [[nodiscard]] bool empty() const noexcept {
        return antisymmetry.empty() && jacobi.empty() && representation.empty();
    }
    /// One finding per line; empty string when valid.
    [[nodiscard]] std::string summary() const;
};

ValidationReport validate(const Algebra& a, bool check_jacobi = true);

/// m[j][l] = gamma[i][j][l]
SymMatrix transverse_matrix(const Algebra& a, std::size_t i);

/// New generator k is old generator perm[k-1]; perm is 1-based.
Algebra reorder(const Algebra& a, const std::vector<std::size_t>& perm);

/// Inverse permutation (1-based).
std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& perm);

CMatrix commutator(const CMatrix& a, const CMatrix& b);

}  // namespace liewn::lie

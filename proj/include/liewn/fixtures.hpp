#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liewn/expr.hpp"
#include "liewn/matrix.hpp"
#include "liewn/weinorman.hpp"

namespace liewn::fixtures {

/// A published expression that fails an independent check, with the corrected form.
struct Erratum {
    std::string where;    // e.g. "equation 3" or "entry (1,1)"
    std::string printed;  // as published, in the text grammar
    std::string note;
};

/// Published right-hand side num/den in the text grammar.
struct Rhs {
    std::string num;
    std::string den = "1";
};

/// i dU_n/dt = rhs[n] (time evolution) for the algebra `algebra`.
struct SystemFixture {
    std::string id;
    std::string algebra;  // catalog stem
    std::vector<Rhs> rhs;
    std::string det;
    std::vector<Erratum> errata = {};
    /// Generator order of the published labels relative to the shipped algebra
    /// (1-based, as for lie::reorder); empty when they coincide.
    std::vector<std::size_t> order = {};
    std::string order_note = {};
};

/// Matrix with entries num(r,c) / den, after substituting `defs` (name -> text).
struct MatrixFixture {
    std::string id;
    std::vector<std::vector<std::string>> num;
    std::string den = "1";
    std::map<std::string, std::string> defs = {};
    std::vector<Erratum> errata = {};
};

const SystemFixture& table1_system();
const SystemFixture& su2_pauli_system();
const SystemFixture& su2_cwb_system();
const SystemFixture& su3_cwb_system();
const SystemFixture& su4_cwb_system();
const SystemFixture& oscillator_system();

const MatrixFixture& table1_xi();
/// b^1, b^2, b^3 for the three-generator family.
const std::vector<MatrixFixture>& table1_bch();
const MatrixFixture& pauli_xi();
const MatrixFixture& pauli_xi_inverse();
const MatrixFixture& su2_cwb_teo();
const MatrixFixture& su3_cwb_teo();
const MatrixFixture& su4_cwb_teo();

/// Shipped algebra in the fixture's generator order.
lie::Algebra algebra_for(const SystemFixture& f);
/// decoupled_odes on algebra_for(f).
wn::ODESystem derive(const SystemFixture& f);

/// Parsed expected values.
sym::RationalExpr expected_rhs(const Rhs& r);
sym::Expr expected_expr(const std::string& text, const std::map<std::string, std::string>& defs = {});
/// Entries as RationalExpr num/den.
Matrix<sym::RationalExpr> expected_matrix(const MatrixFixture& m);

struct Comparison {
    bool pass = true;
    std::vector<std::string> mismatches;  // one line per failing item
    [[nodiscard]] std::string summary() const;
};

Comparison compare_system(const SystemFixture& f, const std::vector<sym::RationalExpr>& rhs, const sym::Expr& det);
Comparison compare_matrix(const MatrixFixture& f, const SymMatrix& computed, const sym::Expr& den = sym::Expr(1));

}  // namespace liewn::fixtures

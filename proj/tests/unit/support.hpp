#pragma once

// Shared helpers for the unit tests: parsing shorthand, numeric evaluation and
// random bindings.

#include <complex>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "liewn/expr.hpp"
#include "liewn/matrix.hpp"
#include "liewn/parse.hpp"

namespace liewn::testsupport {

using cplx = std::complex<double>;

inline sym::Expr P(const std::string& s) { return sym::parse_expr(s, {.parameters = {}, .allow_new_parameters = true}); }

inline cplx random_cplx(std::mt19937_64& rng, double scale = 0.6) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

/// Binds every symbol occurring in `exprs` to a random complex value.
inline sym::NumericBindings random_bindings(std::mt19937_64& rng, const std::vector<sym::Expr>& exprs, double scale = 0.6) {
    sym::NumericBindings b;
    for (const auto& e : exprs) {
        for (const sym::Symbol& s : e.free_symbols()) {
            if (!b.contains(s)) b[s] = random_cplx(rng, scale);
        }
    }
    return b;
}

inline std::vector<sym::Expr> entries(const SymMatrix& m) {
    std::vector<sym::Expr> out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(m.at(r, c));
    }
    return out;
}

inline Eigen::MatrixXcd numeric(const SymMatrix& m, const sym::NumericBindings& b) {
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sym::eval_numeric(m.at(r, c), b);
        }
    }
    return out;
}

inline Eigen::MatrixXcd numeric(const CMatrix& m) { return numeric(to_sym(m), {}); }

}  // namespace liewn::testsupport

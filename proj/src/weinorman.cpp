#include "liewn/weinorman.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <tuple>
#include <sstream>

#include "json.hpp"
#include "liewn/detail/packed.hpp"
#include "liewn/matexp.hpp"

namespace liewn::wn {

using sym::Coefficient;
using sym::Style;

BCHMatrixSet bch_matrices(const Algebra& a) {
    const std::size_t L = a.order();
    BCHMatrixSet s;
    s.b.reserve(L + 1);
    s.b.push_back(SymMatrix::identity(L));
    for (std::size_t i = 1; i <= L; ++i) {
        const SymMatrix ups = lie::transverse_matrix(a, i);
        const auto cls = mexp::classify(ups);
        if (cls.tag == mexp::ExpClass::Tag::Unsupported) {
            throw UnsupportedForm("transverse matrix " + std::to_string(i) + ": " + cls.reason);
        }
        s.b.push_back(mexp::sym_exp(ups, Expr(a.coefficient(i)), cls));
    }
    return s;
}

LieVector similarity_transform(const BCHMatrixSet& b, std::size_t i, std::size_t j) {
    const std::size_t L = b.order();
    if (i < 1 || i > L || j < 1 || j > L) {
        throw IndexError("similarity index (" + std::to_string(i) + "," + std::to_string(j) + ") out of range 1.." +
                         std::to_string(L));
    }
    return b[i].row(j - 1);
}

LieVector similarity_transform(const Algebra& a, std::size_t i, std::size_t j) {
    const std::size_t L = a.order();
    if (i < 1 || i > L || j < 1 || j > L) {
        throw IndexError("similarity index (" + std::to_string(i) + "," + std::to_string(j) + ") out of range 1.." +
                         std::to_string(L));
    }
    const SymMatrix ups = lie::transverse_matrix(a, i);
    return mexp::sym_exp(ups, Expr(a.coefficient(i))).row(j - 1);
}

namespace {

LieVector row_times(const LieVector& v, const SymMatrix& m) {
    LieVector out(m.cols());
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k].is_zero()) continue;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (!m.at(k, c).is_zero()) out[c] += v[k] * m.at(k, c);
        }
    }
    return out;
}

}  // namespace

LieVector nested_similarity(const Algebra& a, const Chain& chain, const LieVector& v) {
    const std::size_t L = a.order();
    if (v.size() != L) throw IndexError("vector length " + std::to_string(v.size()) + " differs from order");
    LieVector out = v;
    for (const auto& [idx, s] : chain) {
        if (idx < 1 || idx > L) {
            throw IndexError("chain index " + std::to_string(idx) + " out of range 1.." + std::to_string(L));
        }
        out = row_times(out, mexp::sym_exp(lie::transverse_matrix(a, idx), s));
    }
    return out;
}

std::string render_lie_vector(const LieVector& v, Style style) {
    if (style == Style::Json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& c : v) j.push_back(sym::text(c));
        return j.dump();
    }
    std::string out;
    for (std::size_t l = 0; l < v.size(); ++l) {
        const Expr& c = v[l];
        if (c.is_zero()) continue;
        const std::string g = style == Style::Latex ? "\\hat{g}_{" + std::to_string(l + 1) + "}"
                                                    : "g" + std::to_string(l + 1);
        const std::string sep = style == Style::Latex ? "" : "*";
        std::string body;
        bool negative = false;
        if (c.is_one()) {
            body = g;
        } else if ((-c).is_one()) {
            body = g;
            negative = true;
        } else if (c.is_single_term()) {
            std::string r = sym::render(c, style);
            if (r.starts_with("-")) {
                negative = true;
                r = r.substr(1);
            }
            body = r + sep + g;
        } else {
            body = (style == Style::Latex ? "\\left(" + sym::render(c, style) + "\\right)"
                                          : "(" + sym::render(c, style) + ")") +
                   sep + g;
        }
        if (out.empty()) {
            out = negative ? "-" + body : body;
        } else {
            out += negative ? " - " + body : " + " + body;
        }
    }
    return out.empty() ? "0" : out;
}

namespace {

SymMatrix xi_matrix(const BCHMatrixSet& b) {
    const std::size_t L = b.order();
    SymMatrix xi(L, L);
    for (std::size_t n = 1; n <= L; ++n) {
        LieVector row(L);
        row[n - 1] = Expr(1);
        for (std::size_t k = n - 1; k >= 1; --k) row = row_times(row, b[k]);
        for (std::size_t l = 0; l < L; ++l) xi.at(n - 1, l) = row[l];
    }
    return xi;
}

}  // namespace

CouplingMatrix coupling_matrix(const BCHMatrixSet& b) {
    SymMatrix xi = xi_matrix(b);
    Expr det = determinant(xi);
    return {std::move(xi), std::move(det)};
}

CouplingMatrix coupling_matrix(const Algebra& a) { return coupling_matrix(bch_matrices(a)); }

namespace {

struct Solved {
    SymMatrix num;  // n x k
    Expr den;
    Expr det;
};

/// Solves A X = B exactly: X = num / den. Gauss-Jordan with unit pivots only;
/// the block left without unit pivots is handled by Cramer's rule over subset minors.
Solved solve_block(const SymMatrix& m, const SymMatrix& rhs) {
    if (!m.square()) throw StructuralError("matrix is not square");
    const std::size_t n = m.rows();
    const std::size_t k = rhs.cols();
    SymMatrix a = m;
    SymMatrix e = rhs;
    std::vector<bool> row_done(n, false), col_done(n, false);
    std::vector<std::size_t> pivot_col(n, n);
    Expr unit_factor(1);
    for (;;) {
        std::vector<std::size_t> row_nnz(n, 0), col_nnz(n, 0);
        for (std::size_t r = 0; r < n; ++r) {
            if (row_done[r]) continue;
            for (std::size_t c = 0; c < n; ++c) {
                if (col_done[c] || a.at(r, c).is_zero()) continue;
                ++row_nnz[r];
                ++col_nnz[c];
            }
        }
        // cost: Markowitz count, non-constant
        std::size_t pr = n, pc = n;
        std::pair<std::size_t, int> best{};
        for (std::size_t r = 0; r < n; ++r) {
            if (row_done[r]) continue;
            for (std::size_t c = 0; c < n; ++c) {
                if (col_done[c] || !a.at(r, c).is_unit()) continue;
                std::pair<std::size_t, int> cost{(row_nnz[r] - 1) * (col_nnz[c] - 1),
                                                 a.at(r, c).is_constant() ? 0 : 1};
                if (pr == n || cost < best) {
                    best = cost;
                    pr = r;
                    pc = c;
                }
            }
        }
        if (pr == n) break;
        row_done[pr] = true;
        col_done[pc] = true;
        pivot_col[pr] = pc;
        const Expr piv = a.at(pr, pc);
        unit_factor *= piv;
        const Expr pinv = piv.inverse_unit();
        for (std::size_t c = 0; c < n; ++c) {
            if (!a.at(pr, c).is_zero()) a.at(pr, c) *= pinv;
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (!e.at(pr, c).is_zero()) e.at(pr, c) *= pinv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == pr || a.at(r, pc).is_zero()) continue;
            const Expr f = a.at(r, pc);
            for (std::size_t c = 0; c < n; ++c) {
                if (!a.at(pr, c).is_zero()) a.at(r, c) -= f * a.at(pr, c);
            }
            for (std::size_t c = 0; c < k; ++c) {
                if (!e.at(pr, c).is_zero()) e.at(r, c) -= f * e.at(pr, c);
            }
        }
    }
    std::vector<std::size_t> rest_rows, rest_cols;
    for (std::size_t r = 0; r < n; ++r) {
        if (!row_done[r]) rest_rows.push_back(r);
        if (!col_done[r]) rest_cols.push_back(r);
    }
    // row -> column matching; its parity fixes the sign of det(A) / (unit_factor det(S))
    std::vector<std::size_t> perm = pivot_col;
    for (std::size_t j = 0; j < rest_rows.size(); ++j) perm[rest_rows[j]] = rest_cols[j];
    bool odd = false;
    for (std::size_t x = 0; x < n; ++x) {
        while (perm[x] != x) {
            std::swap(perm[x], perm[perm[x]]);
            odd = !odd;
        }
    }
    Solved out;
    out.num = SymMatrix(n, k);
    const std::size_t s = rest_rows.size();
    if (s == 0) {
        out.den = Expr(1);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < k; ++c) out.num.at(pivot_col[r], c) = e.at(r, c);
        }
    } else {
        SymMatrix schur(s, s);
        for (std::size_t x = 0; x < s; ++x) {
            for (std::size_t y = 0; y < s; ++y) schur.at(x, y) = a.at(rest_rows[x], rest_cols[y]);
        }
        out.den = detail::subset_determinant(schur);
        if (out.den.is_zero()) throw StructuralError("coupling matrix is singular: determinant vanishes identically");
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<Expr> b(s);
            for (std::size_t x = 0; x < s; ++x) b[x] = e.at(rest_rows[x], c);
            const std::vector<Expr> y = detail::cramer_numerators(schur, b);
            for (std::size_t x = 0; x < s; ++x) out.num.at(rest_cols[x], c) = y[x];
            for (std::size_t r = 0; r < n; ++r) {
                if (!row_done[r]) continue;
                Expr v = e.at(r, c) * out.den;
                for (std::size_t x = 0; x < s; ++x) {
                    const Expr& f = a.at(r, rest_cols[x]);
                    if (!f.is_zero() && !y[x].is_zero()) v -= f * y[x];
                }
                out.num.at(pivot_col[r], c) = std::move(v);
            }
        }
    }
    out.det = unit_factor * out.den;
    if (odd) out.det = -out.det;
    return out;
}

/// Row -> column perfect matching on the nonzero pattern (augmenting paths).
std::vector<std::size_t> match_rows(const SymMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<std::size_t> col_row(n, n), row_col(n, n);
    std::vector<bool> seen;
    std::function<bool(std::size_t)> augment = [&](std::size_t r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (m.at(r, c).is_zero() || seen[c]) continue;
            seen[c] = true;
            if (col_row[c] == n || augment(col_row[c])) {
                col_row[c] = r;
                row_col[r] = c;
                return true;
            }
        }
        return false;
    };
    for (std::size_t r = 0; r < n; ++r) {
        seen.assign(n, false);
        if (!augment(r)) throw StructuralError("coupling matrix is singular: determinant vanishes identically");
    }
    return row_col;
}

/// Diagonal blocks (rows, cols) of a block-triangular permutation, dependencies first.
std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> block_triangular(const SymMatrix& m) {
    const std::size_t n = m.rows();
    const std::vector<std::size_t> row_col = match_rows(m);
    std::vector<std::size_t> col_row(n);
    for (std::size_t r = 0; r < n; ++r) col_row[row_col[r]] = r;
    // node = column; the row matched to column v references every column in its pattern
    std::vector<std::size_t> index(n, n), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::size_t counter = 0;
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> blocks;
    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w = 0; w < n; ++w) {
            if (w == v || m.at(col_row[v], w).is_zero()) continue;
            if (index[w] == n) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] != index[v]) return;
        std::vector<std::size_t> rows, cols;
        std::size_t w;
        do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            cols.push_back(w);
            rows.push_back(col_row[w]);
        } while (w != v);
        std::sort(rows.begin(), rows.end());
        std::sort(cols.begin(), cols.end());
        blocks.emplace_back(std::move(rows), std::move(cols));
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (index[v] == n) visit(v);
    }
    return blocks;
}

Solved solve(const SymMatrix& m, const SymMatrix& rhs) {
    if (!m.square()) throw StructuralError("matrix is not square");
    const std::size_t n = m.rows();
    const std::size_t k = rhs.cols();
    const auto blocks = block_triangular(m);
    Solved out;
    out.num = SymMatrix(n, k);
    out.den = Expr(1);
    out.det = Expr(1);
    std::vector<std::size_t> perm(n);
    std::vector<bool> solved(n, false);
    for (const auto& [rows, cols] : blocks) {
        const std::size_t s = rows.size();
        SymMatrix block(s, s);
        SymMatrix b(s, k);
        for (std::size_t x = 0; x < s; ++x) {
            perm[rows[x]] = cols[x];
            for (std::size_t y = 0; y < s; ++y) block.at(x, y) = m.at(rows[x], cols[y]);
            for (std::size_t c = 0; c < k; ++c) {
                Expr v = rhs.at(rows[x], c) * out.den;
                for (std::size_t col = 0; col < n; ++col) {
                    if (!solved[col] || m.at(rows[x], col).is_zero() || out.num.at(col, c).is_zero()) continue;
                    v -= m.at(rows[x], col) * out.num.at(col, c);
                }
                b.at(x, c) = std::move(v);
            }
        }
        Solved part = solve_block(block, b);
        out.det *= part.det;
        if (!part.den.is_one()) {
            for (std::size_t col = 0; col < n; ++col) {
                if (!solved[col]) continue;
                for (std::size_t c = 0; c < k; ++c) out.num.at(col, c) *= part.den;
            }
            out.den *= part.den;
        }
        for (std::size_t y = 0; y < s; ++y) {
            solved[cols[y]] = true;
            for (std::size_t c = 0; c < k; ++c) out.num.at(cols[y], c) = std::move(part.num.at(y, c));
        }
    }
    bool odd = false;
    for (std::size_t x = 0; x < n; ++x) {
        while (perm[x] != x) {
            std::swap(perm[x], perm[perm[x]]);
            odd = !odd;
        }
    }
    if (odd) out.det = -out.det;
    return out;
}

}  // namespace

Inverse invert(const SymMatrix& m) {
    Solved s = solve(m, SymMatrix::identity(m.rows()));
    return {std::move(s.num), std::move(s.den), std::move(s.det)};
}

Expr determinant(const SymMatrix& m) { return solve(m, SymMatrix(m.rows(), 0)).det; }

SymMatrix coupled_odes(const Algebra& a) {
    const CouplingMatrix c = coupling_matrix(a);
    return scale(c.xi.transpose(), Expr(Coefficient::i()));
}

namespace {

ODESystem build_system(const Algebra& a, ODEKind kind) {
    ODESystem s;
    s.kind = kind;
    s.coefficient_kind = a.coefficient_kind;
    s.input_kind = kind == ODEKind::TimeEvolution ? SymbolKind::Eta : SymbolKind::SmallLambda;
    const BCHMatrixSet b = bch_matrices(a);
    s.coupling.xi = xi_matrix(b);
    SymMatrix inputs(a.order(), 1);
    for (std::size_t l = 0; l < a.order(); ++l) inputs.at(l, 0) = Expr(s.input(l + 1));
    const Solved inv = solve(s.coupling.xi.transpose(), inputs);
    s.coupling.det = inv.det;
    for (std::size_t n = 0; n < a.order(); ++n) s.rhs.emplace_back(inv.num.at(n, 0), inv.den);
    s.locally_valid = !inv.det.is_unit();
    if (s.locally_valid) {
        s.singular_locus_note = "locally valid: the inverse coupling matrix is singular where det = " +
                                sym::text(inv.det) + " vanishes";
    }
    return s;
}

std::string lhs(const ODESystem& s, std::size_t n, Style style) {
    const Symbol u = s.unknown(n);
    if (style == Style::Latex) {
        return s.kind == ODEKind::TimeEvolution ? "i\\dot{" + u.latex() + "}" : u.latex() + "'";
    }
    return s.kind == ODEKind::TimeEvolution ? "i*d" + u.text() + "/dt" : u.text() + "'";
}

}  // namespace

ODESystem decoupled_odes(const Algebra& a) { return build_system(a, ODEKind::TimeEvolution); }
ODESystem factorization_odes(const Algebra& a) { return build_system(a, ODEKind::Factorization); }

std::string render_system(const ODESystem& s, Style style) {
    if (style == Style::Json) {
        nlohmann::json eqs = nlohmann::json::array();
        for (std::size_t n = 1; n <= s.order(); ++n) {
            const auto& r = s.rhs[n - 1];
            eqs.push_back({{"lhs", lhs(s, n, Style::Text)},
                           {"rhs", sym::render(r, Style::Text)},
                           {"latex", lhs(s, n, Style::Latex) + " = " + sym::render(r, Style::Latex)},
                           {"polynomial", r.is_polynomial()}});
        }
        nlohmann::json j = {{"kind", s.kind == ODEKind::TimeEvolution ? "time_evolution" : "factorization"},
                            {"equations", eqs},
                            {"det", sym::text(s.coupling.det)},
                            {"locally_valid", s.locally_valid}};
        if (s.locally_valid) j["note"] = s.singular_locus_note;
        return j.dump(2);
    }
    std::ostringstream os;
    for (std::size_t n = 1; n <= s.order(); ++n) {
        os << lhs(s, n, style) << " = " << sym::render(s.rhs[n - 1], style);
        if (style == Style::Latex && n < s.order()) os << " \\\\";
        os << "\n";
    }
    if (s.locally_valid) os << (style == Style::Latex ? "% " : "# ") << s.singular_locus_note << "\n";
    return os.str();
}

std::string render_coupled(const SymMatrix& c, SymbolKind unknowns, Style style) {
    const std::size_t L = c.rows();
    if (style == Style::Json) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t l = 0; l < L; ++l) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t n = 0; n < L; ++n) row.push_back(sym::text(c.at(l, n)));
            rows.push_back(row);
        }
        return rows.dump();
    }
    std::ostringstream os;
    for (std::size_t l = 0; l < L; ++l) {
        const Symbol eta = Symbol::eta(static_cast<std::uint32_t>(l + 1));
        os << (style == Style::Latex ? eta.latex() : eta.text()) << " = ";
        bool first = true;
        for (std::size_t n = 0; n < L; ++n) {
            const Expr& e = c.at(l, n);
            if (e.is_zero()) continue;
            const Symbol u{unknowns, static_cast<std::uint32_t>(n + 1)};
            const std::string d = style == Style::Latex ? "\\dot{" + u.latex() + "}" : "d" + u.text() + "/dt";
            const std::string coeff = style == Style::Latex ? "\\left(" + sym::latex(e) + "\\right)"
                                                            : "(" + sym::text(e) + ")";
            if (!first) os << " + ";
            os << coeff << (style == Style::Latex ? "" : "*") << d;
            first = false;
        }
        if (first) os << "0";
        if (style == Style::Latex && l + 1 < L) os << " \\\\";
        os << "\n";
    }
    return os.str();
}

std::string render_matrix(const SymMatrix& m, Style style) {
    if (style == Style::Json) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r < m.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(sym::text(m.at(r, c)));
            rows.push_back(row);
        }
        return rows.dump();
    }
    std::ostringstream os;
    if (style == Style::Latex) os << "\\begin{pmatrix}\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << (style == Style::Latex ? " & " : ", ");
            os << sym::render(m.at(r, c), style);
        }
        if (style == Style::Latex && r + 1 < m.rows()) os << " \\\\";
        os << "\n";
    }
    if (style == Style::Latex) os << "\\end{pmatrix}\n";
    return os.str();
}

BCH3 bch_closed_form_3gen(std::complex<double> l1, std::complex<double> l2, std::complex<double> l3,
                          std::complex<double> upsilon, std::complex<double> epsilon) {
    using C = std::complex<double>;
    const C half = upsilon * l2 / 2.0;
    const C nu2 = half * half - epsilon * upsilon * l1 * l3;
    C S;
    C Ch;
    if (nu2 == C(0)) {
        S = 1.0;
        Ch = 1.0;
    } else if (std::abs(nu2) < 1e-6) {
        // sinh(nu)/nu and cosh(nu) as series in nu^2
        S = 1.0 + nu2 / 6.0 + nu2 * nu2 / 120.0 + nu2 * nu2 * nu2 / 5040.0;
        Ch = 1.0 + nu2 / 2.0 + nu2 * nu2 / 24.0 + nu2 * nu2 * nu2 / 720.0;
    } else {
        const C nu = std::sqrt(nu2);
        S = std::sinh(nu) / nu;
        Ch = std::cosh(nu);
    }
    const C d = Ch - half * S;
    if (std::abs(d) <= 8 * std::numeric_limits<double>::epsilon() * (std::abs(Ch) + std::abs(half * S))) throw StructuralError("branch singularity: cosh(nu) - (upsilon lambda2 / 2nu) sinh(nu) = 0");
    BCH3 r;
    r.L1 = l1 * S / d;
    r.L3 = l3 * S / d;
    r.L2 = -(2.0 / upsilon) * std::log(d);
    return r;
}

UnitarityReport unitarity_check_su2(std::complex<double> l1, std::complex<double> l2, std::complex<double> l3,
                                    double tol) {
    UnitarityReport r;
    r.tol = tol;
    r.residual_modulus = std::abs(std::abs(l3) - std::abs(l1));
    r.residual_real = std::abs(std::exp(l2.real()) - (1.0 + std::norm(l1)));
    if (std::abs(l1) < tol || std::abs(l3) < tol) {
        r.phase_degenerate = true;
        r.residual_phase = 0;
    } else {
        const std::complex<double> lhs = std::polar(1.0, l2.imag());
        const std::complex<double> rhs = std::polar(1.0, std::arg(l1) + std::arg(l3));
        r.residual_phase = std::abs(lhs + rhs);
    }
    return r;
}

}  // namespace liewn::wn

#include "liewn/matexp.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <optional>

namespace liewn::mexp {

namespace {

using UPoly = std::vector<Coefficient>;  // coefficients of s^0, s^1, ...

/// sum_mu p_mu(s) exp(mu s)
using ExpPoly = std::vector<std::pair<Coefficient, UPoly>>;

void trim(UPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

UPoly derivative(const UPoly& p) {
    UPoly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * Coefficient(static_cast<std::int64_t>(k)));
    trim(d);
    return d;
}

UPoly integral(const UPoly& p) {
    UPoly r(p.size() + 1);
    for (std::size_t k = 0; k < p.size(); ++k) r[k + 1] = p[k] / Coefficient(static_cast<std::int64_t>(k + 1));
    trim(r);
    return r;
}

void add_to(UPoly& a, const UPoly& b, const Coefficient& f = Coefficient(1)) {
    if (a.size() < b.size()) a.resize(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) a[k] += b[k] * f;
    trim(a);
}

void add_term(ExpPoly& e, const Coefficient& mu, const UPoly& p) {
    for (auto& [m, q] : e) {
        if (m == mu) {
            add_to(q, p);
            return;
        }
    }
    if (!p.empty()) e.emplace_back(mu, p);
}

/// Solution of r' = lambda r + f with r(0) = 0.
ExpPoly solve_first_order(const Coefficient& lambda, const ExpPoly& f) {
    ExpPoly r;
    Coefficient c0;
    for (const auto& [mu, p] : f) {
        UPoly q;
        if (mu == lambda) {
            q = integral(p);
        } else {
            // q = sum_k (-1)^k p^(k) / (mu - lambda)^(k+1)
            const Coefficient inv = (mu - lambda).inverse();
            Coefficient scale = inv;
            UPoly d = p;
            bool neg = false;
            while (!d.empty()) {
                add_to(q, d, neg ? -scale : scale);
                d = derivative(d);
                scale *= inv;
                neg = !neg;
            }
        }
        if (!q.empty()) c0 += q[0];
        add_term(r, mu, q);
    }
    if (!c0.is_zero()) add_term(r, lambda, UPoly{-c0});
    return r;
}

Expr to_expr(const ExpPoly& e, const Expr& s) {
    Expr out;
    for (const auto& [mu, p] : e) {
        Expr poly;
        Expr power(1);
        for (const auto& c : p) {
            if (!c.is_zero()) poly += power * c;
            power *= s;
        }
        out += mu.is_zero() ? poly : poly * Expr::exp(s * Expr(mu));
    }
    return out;
}

std::optional<Rational> snap_rational(double y) {
    for (std::int64_t q = 1; q <= 64; ++q) {
        const double p = std::round(y * static_cast<double>(q));
        if (std::abs(p) > 64) continue;
        if (std::abs(y - p / static_cast<double>(q)) <= 1e-7) return Rational(static_cast<std::int64_t>(p), q);
    }
    return std::nullopt;
}

std::optional<Coefficient> snap_real(double x) {
    if (std::abs(x) <= 1e-9) return Coefficient{};
    for (std::int64_t d : {1, 2, 3, 5}) {
        if (auto r = snap_rational(x / std::sqrt(static_cast<double>(d)))) {
            return Coefficient(*r) * Coefficient::sqrt(d);
        }
    }
    return std::nullopt;
}

/// Divides p by (x - root) when exact; returns false otherwise.
bool divide_root(std::vector<Coefficient>& p, const Coefficient& root) {
    const std::size_t n = p.size() - 1;
    if (n == 0) return false;
    std::vector<Coefficient> b(n);
    b[n - 1] = p[n];
    for (std::size_t k = n - 1; k >= 1; --k) b[k - 1] = p[k] + root * b[k];
    const Coefficient rem = p[0] + root * b[0];
    if (!rem.is_zero()) return false;
    p = std::move(b);
    return true;
}

bool is_diagonal(const SymMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (r != c && !m.at(r, c).is_zero()) return false;
        }
    }
    return true;
}

bool is_constant(const SymMatrix& m) {
    return std::all_of(m.data().begin(), m.data().end(), [](const Expr& e) { return e.is_constant(); });
}

}  // namespace

std::string ExpClass::describe() const {
    switch (tag) {
        case Tag::Nilpotent: return "Nilpotent(" + std::to_string(degree) + ")";
        case Tag::Diagonal: return "Diagonal";
        case Tag::Spectral: {
            std::string s = "Spectral{";
            for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
                if (k) s += ", ";
                s += eigenvalues[k].first.text() + "^" + std::to_string(eigenvalues[k].second);
            }
            return s + "}";
        }
        case Tag::Unsupported: return "Unsupported(" + reason + ")";
    }
    return {};
}

CMatrix to_constant(const SymMatrix& m) {
    CMatrix c(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t k = 0; k < m.cols(); ++k) {
            if (!m.at(r, k).is_constant()) throw UnsupportedForm("matrix has symbolic entries");
            c.at(r, k) = m.at(r, k).constant_value();
        }
    }
    return c;
}

std::vector<Coefficient> char_poly(const CMatrix& a) {
    // Faddeev-LeVerrier
    const std::size_t n = a.rows();
    std::vector<Coefficient> c(n + 1);
    c[n] = Coefficient(1);
    CMatrix mk(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        CMatrix next = a * mk;
        for (std::size_t d = 0; d < n; ++d) next.at(d, d) += c[n - k + 1];
        mk = std::move(next);
        const CMatrix am = a * mk;
        Coefficient tr;
        for (std::size_t d = 0; d < n; ++d) tr += am.at(d, d);
        c[n - k] = -tr / Coefficient(static_cast<std::int64_t>(k));
    }
    return c;
}

Eigenvalues eigenvalues_exact(const SymMatrix& m) {
    if (!m.square()) throw UnsupportedForm("matrix is not square");
    const CMatrix a = to_constant(m);
    const std::size_t n = a.rows();
    std::vector<Coefficient> poly = char_poly(a);
    Eigen::MatrixXcd num(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) num(r, c) = a.at(r, c).to_complex();
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(num, false);
    if (solver.info() != Eigen::Success) throw UnsupportedForm("numeric eigen-decomposition failed");
    std::vector<Coefficient> candidates;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const auto z = solver.eigenvalues()[k];
        auto re = snap_real(z.real());
        auto im = snap_real(z.imag());
        if (!re || !im) {
            throw UnsupportedForm("eigenvalue (" + std::to_string(z.real()) + "," + std::to_string(z.imag()) +
                                  ") is not on the supported lattice");
        }
        Coefficient v = *re + *im * Coefficient::i();
        if (std::find(candidates.begin(), candidates.end(), v) == candidates.end()) candidates.push_back(v);
    }
    std::sort(candidates.begin(), candidates.end());
    Eigenvalues out;
    unsigned total = 0;
    for (const auto& v : candidates) {
        unsigned mult = 0;
        while (poly.size() > 1 && divide_root(poly, v)) ++mult;
        if (mult == 0) throw UnsupportedForm("eigenvalue candidate " + v.text() + " failed exact verification");
        out.emplace_back(v, mult);
        total += mult;
    }
    if (total != n) throw UnsupportedForm("eigenvalue multiplicities do not account for the full dimension");
    return out;
}

ExpClass classify(const SymMatrix& m) {
    ExpClass cls;
    if (!m.square()) {
        cls.reason = "matrix is not square";
        return cls;
    }
    const std::size_t n = m.rows();
    if (m.is_zero_matrix()) {
        cls.tag = ExpClass::Tag::Nilpotent;
        cls.degree = 1;
        return cls;
    }
    if (is_diagonal(m)) {
        cls.tag = ExpClass::Tag::Diagonal;
        return cls;
    }
    SymMatrix p = m;
    for (unsigned k = 2; k <= n; ++k) {
        p = p * m;
        if (p.is_zero_matrix()) {
            cls.tag = ExpClass::Tag::Nilpotent;
            cls.degree = k;
            return cls;
        }
    }
    if (!is_constant(m)) {
        cls.reason = "symbolic entries outside the nilpotent and diagonal classes";
        return cls;
    }
    try {
        cls.eigenvalues = eigenvalues_exact(m);
        cls.tag = ExpClass::Tag::Spectral;
    } catch (const UnsupportedForm& e) {
        cls.reason = e.what();
    }
    return cls;
}

SymMatrix sym_exp(const SymMatrix& m, const Expr& s) { return sym_exp(m, s, classify(m)); }

SymMatrix sym_exp(const SymMatrix& m, const Expr& s, const ExpClass& cls) {
    const std::size_t n = m.rows();
    switch (cls.tag) {
        case ExpClass::Tag::Unsupported: throw UnsupportedForm("matrix exponential unsupported: " + cls.reason);
        case ExpClass::Tag::Diagonal: {
            SymMatrix e(n, n);
            for (std::size_t k = 0; k < n; ++k) e.at(k, k) = Expr::exp(s * m.at(k, k));
            return e;
        }
        case ExpClass::Tag::Nilpotent: {
            SymMatrix e = SymMatrix::identity(n);
            SymMatrix term = SymMatrix::identity(n);
            for (unsigned k = 1; k < cls.degree; ++k) {
                // term = s^k M^k / k!
                term = scale(term * m, s * Expr(sym::Coefficient(Rational(1, k))));
                e = e + term;
            }
            return e;
        }
        case ExpClass::Tag::Spectral: {
            // Putzer: exp(sM) = sum_k r_{k+1}(s) P_k, P_k = prod_{j<=k}(M - lambda_j I)
            std::vector<Coefficient> lambdas;
            for (const auto& [v, mult] : cls.eigenvalues) lambdas.insert(lambdas.end(), mult, v);
            const CMatrix a = to_constant(m);
            SymMatrix e(n, n);
            CMatrix pk = CMatrix::identity(n);
            ExpPoly r{{lambdas[0], UPoly{Coefficient(1)}}};
            for (std::size_t k = 0; k < n; ++k) {
                if (k > 0) {
                    CMatrix shifted = a;
                    for (std::size_t d = 0; d < n; ++d) shifted.at(d, d) -= lambdas[k - 1];
                    pk = pk * shifted;
                    if (pk.is_zero_matrix()) break;
                    r = solve_first_order(lambdas[k], r);
                }
                const Expr rk = to_expr(r, s);
                for (std::size_t x = 0; x < n; ++x) {
                    for (std::size_t y = 0; y < n; ++y) {
                        if (!pk.at(x, y).is_zero()) e.at(x, y) += rk * pk.at(x, y);
                    }
                }
            }
            return e;
        }
    }
    return {};
}

}  // namespace liewn::mexp

#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "liewn/coefficient.hpp"
#include "liewn/errors.hpp"
#include "liewn/symbol.hpp"

namespace liewn::sym {

/// Sorted (symbol, positive power) pairs.
using Monomial = std::vector<std::pair<Symbol, std::uint32_t>>;

std::uint32_t degree(const Monomial& m);
Monomial mono_mul(const Monomial& a, const Monomial& b);
bool mono_divides(const Monomial& a, const Monomial& b);  // a | b
Monomial mono_div(const Monomial& b, const Monomial& a);  // b / a, requires a | b
Monomial mono_gcd(const Monomial& a, const Monomial& b);
/// Graded lexicographic order.
std::strong_ordering mono_cmp(const Monomial& a, const Monomial& b);

struct PolyTerm {
    Monomial mono;
    Coefficient coeff;
    friend bool operator==(const PolyTerm&, const PolyTerm&) = default;
};

/// Exp-free polynomial used as the argument of an exponential atom.
/// Sorted by descending mono_cmp, no zero coefficients.
using ExpArg = std::vector<PolyTerm>;

/// Order on exponent arguments compatible with addition.
std::strong_ordering exparg_cmp(const ExpArg& a, const ExpArg& b);
ExpArg exparg_add(const ExpArg& a, const ExpArg& b);
ExpArg exparg_neg(const ExpArg& a);

/// coeff * mono * exp(exp)
struct Term {
    Coefficient coeff;
    Monomial mono;
    ExpArg exp;
    friend bool operator==(const Term&, const Term&) = default;
};

/// Multiplicative term order: exponent argument first, then graded monomial.
std::strong_ordering term_key_cmp(const Term& a, const Term& b);

using NumericBindings = std::unordered_map<Symbol, std::complex<double>, SymbolHash>;

class Expr;
using Substitution = std::map<Symbol, Expr>;

/// Canonical sum of terms, sorted by descending term_key_cmp.
class Expr {
public:
    Expr() = default;
    Expr(Coefficient c);  // NOLINT(implicit)
    Expr(int n) : Expr(Coefficient(n)) {}  // NOLINT(implicit)
    Expr(Symbol s);  // NOLINT(implicit)

    /// exp(arg); arg must itself be free of exponential atoms.
    static Expr exp(const Expr& arg);
    /// Takes ownership of arbitrary terms and canonicalizes them.
    static Expr from_terms(std::vector<Term> terms);

    [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] bool is_one() const noexcept;
    [[nodiscard]] bool is_constant() const noexcept;
    [[nodiscard]] Coefficient constant_value() const;  // requires is_constant()
    /// Single term c*exp(a) with no monomial part: invertible in the ring.
    [[nodiscard]] bool is_unit() const noexcept;
    [[nodiscard]] bool is_single_term() const noexcept { return terms_.size() == 1; }
    [[nodiscard]] bool has_exp() const noexcept;
    [[nodiscard]] const Term& leading() const { return terms_.front(); }

    [[nodiscard]] Expr inverse_unit() const;  // requires is_unit()
    [[nodiscard]] Expr pow(unsigned n) const;
    [[nodiscard]] std::set<Symbol> free_symbols() const;
    [[nodiscard]] ExpArg as_exparg() const;  // throws UnsupportedForm when exp atoms present
    static Expr from_exparg(const ExpArg& a);

    Expr operator-() const;
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    Expr& operator+=(const Expr& o) { return *this = *this + o; }
    Expr& operator-=(const Expr& o) { return *this = *this - o; }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }
    friend Expr operator*(const Expr& a, const Coefficient& c);

    friend bool operator==(const Expr&, const Expr&) = default;

    [[nodiscard]] std::size_t hash() const noexcept;

private:
    void canonicalize();
    std::vector<Term> terms_;
};

/// Simultaneous substitution followed by canonicalization.
/// Throws UnsupportedForm if an exponential would land inside an exponent.
Expr substitute(const Expr& e, const Substitution& bindings);

/// Throws UnboundSymbol naming the first unbound symbol.
std::complex<double> eval_numeric(const Expr& e, const NumericBindings& bindings);
std::complex<double> eval_numeric(const Expr& e,
                                  const std::function<std::optional<std::complex<double>>(Symbol)>& lookup);

/// Exact quotient num/den when den divides num in the Laurent ring
/// (polynomials in the symbols, Laurent in the exponential atoms).
std::optional<Expr> exact_divide(const Expr& num, const Expr& den);

/// num/den, normalized: exact division when possible, otherwise common monomial
/// and exponential factors removed and den made monic in its leading term.
class RationalExpr {
public:
    RationalExpr() : den_(1) {}
    RationalExpr(Expr num) : num_(std::move(num)), den_(1) {}  // NOLINT(implicit)
    RationalExpr(Expr num, Expr den);

    [[nodiscard]] const Expr& num() const noexcept { return num_; }
    [[nodiscard]] const Expr& den() const noexcept { return den_; }
    [[nodiscard]] bool is_polynomial() const noexcept { return den_.is_one(); }
    [[nodiscard]] bool is_zero() const noexcept { return num_.is_zero(); }

    /// Cross-multiplication equality; tolerant of un-cancelled common factors.
    [[nodiscard]] bool equivalent(const RationalExpr& o) const;

    friend RationalExpr operator+(const RationalExpr& a, const RationalExpr& b);
    friend RationalExpr operator*(const RationalExpr& a, const RationalExpr& b);
    friend bool operator==(const RationalExpr&, const RationalExpr&) = default;

private:
    void normalize();
    Expr num_;
    Expr den_;
};

RationalExpr substitute(const RationalExpr& e, const Substitution& bindings);
std::complex<double> eval_numeric(const RationalExpr& e, const NumericBindings& bindings);

}  // namespace liewn::sym

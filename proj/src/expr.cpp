#include "liewn/expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "liewn/detail/packed.hpp"

namespace liewn::sym {

// ---------------------------------------------------------------- monomials

std::uint32_t degree(const Monomial& m) {
    std::uint32_t d = 0;
    for (const auto& [s, p] : m) d += p;
    return d;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    Monomial r;
    r.reserve(a.size() + b.size());
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->first == j->first) {
            r.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        } else if (i->first < j->first) {
            r.push_back(*i++);
        } else {
            r.push_back(*j++);
        }
    }
    r.insert(r.end(), i, a.end());
    r.insert(r.end(), j, b.end());
    return r;
}

bool mono_divides(const Monomial& a, const Monomial& b) {
    auto j = b.begin();
    for (const auto& [s, p] : a) {
        while (j != b.end() && j->first < s) ++j;
        if (j == b.end() || !(j->first == s) || j->second < p) return false;
    }
    return true;
}

Monomial mono_div(const Monomial& b, const Monomial& a) {
    Monomial r;
    auto i = a.begin();
    for (const auto& [s, p] : b) {
        if (i != a.end() && i->first == s) {
            if (p > i->second) r.emplace_back(s, p - i->second);
            ++i;
        } else {
            r.emplace_back(s, p);
        }
    }
    return r;
}

Monomial mono_gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    auto j = b.begin();
    for (const auto& [s, p] : a) {
        while (j != b.end() && j->first < s) ++j;
        if (j != b.end() && j->first == s) r.emplace_back(s, std::min(p, j->second));
    }
    return r;
}

std::strong_ordering mono_cmp(const Monomial& a, const Monomial& b) {
    if (a.size() == 1 && b.size() == 1) {
        if (auto c = a[0].second <=> b[0].second; c != 0) return c;
        if (a[0].first == b[0].first) return std::strong_ordering::equal;
        return (a[0].first < b[0].first) ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (auto c = degree(a) <=> degree(b); c != 0) return c;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (!(i->first == j->first)) {
            // the side holding the earlier symbol has the larger exponent there
            return (i->first < j->first) ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        if (i->second != j->second) return i->second <=> j->second;
        ++i;
        ++j;
    }
    if (i != a.end()) return std::strong_ordering::greater;
    if (j != b.end()) return std::strong_ordering::less;
    return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- exp args

std::strong_ordering exparg_cmp(const ExpArg& a, const ExpArg& b) {
    const Coefficient zero;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() || j != b.end()) {
        std::strong_ordering m = std::strong_ordering::equal;
        if (i == a.end()) {
            m = std::strong_ordering::less;
        } else if (j == b.end()) {
            m = std::strong_ordering::greater;
        } else {
            m = mono_cmp(i->mono, j->mono);
        }
        if (m > 0) {
            if (auto c = i->coeff <=> zero; c != 0) return c;
            ++i;
        } else if (m < 0) {
            if (auto c = zero <=> j->coeff; c != 0) return c;
            ++j;
        } else {
            if (auto c = i->coeff <=> j->coeff; c != 0) return c;
            ++i;
            ++j;
        }
    }
    return std::strong_ordering::equal;
}

ExpArg exparg_add(const ExpArg& a, const ExpArg& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    ExpArg r;
    r.reserve(a.size() + b.size());
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() || j != b.end()) {
        std::strong_ordering m = std::strong_ordering::equal;
        if (i == a.end()) {
            m = std::strong_ordering::less;
        } else if (j == b.end()) {
            m = std::strong_ordering::greater;
        } else {
            m = mono_cmp(i->mono, j->mono);
        }
        if (m > 0) {
            r.push_back(*i++);
        } else if (m < 0) {
            r.push_back(*j++);
        } else {
            Coefficient c = i->coeff + j->coeff;
            if (!c.is_zero()) r.push_back({i->mono, std::move(c)});
            ++i;
            ++j;
        }
    }
    return r;
}

ExpArg exparg_neg(const ExpArg& a) {
    ExpArg r = a;
    for (auto& t : r) t.coeff = -t.coeff;
    return r;
}

std::strong_ordering term_key_cmp(const Term& a, const Term& b) {
    if (auto c = exparg_cmp(a.exp, b.exp); c != 0) return c;
    return mono_cmp(a.mono, b.mono);
}

// ---------------------------------------------------------------- Expr

Expr::Expr(Coefficient c) {
    if (!c.is_zero()) terms_.push_back({std::move(c), {}, {}});
}

Expr::Expr(Symbol s) { terms_.push_back({Coefficient(1), {{s, 1}}, {}}); }

Expr Expr::exp(const Expr& arg) {
    Expr e;
    e.terms_.push_back({Coefficient(1), {}, arg.as_exparg()});
    return e;
}

Expr Expr::from_terms(std::vector<Term> terms) {
    Expr e;
    e.terms_ = std::move(terms);
    e.canonicalize();
    return e;
}

void Expr::canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return term_key_cmp(a, b) > 0; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && term_key_cmp(out.back(), t) == 0) {
            out.back().coeff += t.coeff;
        } else {
            if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
            out.push_back(std::move(t));
        }
    }
    if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
    terms_ = std::move(out);
}

bool Expr::is_one() const noexcept {
    return terms_.size() == 1 && terms_[0].mono.empty() && terms_[0].exp.empty() && terms_[0].coeff.is_one();
}

bool Expr::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty() && terms_[0].exp.empty());
}

Coefficient Expr::constant_value() const {
    if (!is_constant()) throw UnsupportedForm("expression is not constant");
    return terms_.empty() ? Coefficient{} : terms_[0].coeff;
}

bool Expr::is_unit() const noexcept { return terms_.size() == 1 && terms_[0].mono.empty(); }

bool Expr::has_exp() const noexcept {
    return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return !t.exp.empty(); });
}

Expr Expr::inverse_unit() const {
    if (!is_unit()) throw UnsupportedForm("inverse of a non-unit expression");
    Expr e;
    e.terms_.push_back({terms_[0].coeff.inverse(), {}, exparg_neg(terms_[0].exp)});
    return e;
}

Expr Expr::pow(unsigned n) const {
    Expr r(1);
    Expr b = *this;
    while (n) {
        if (n & 1U) r *= b;
        n >>= 1U;
        if (n) b *= b;
    }
    return r;
}

std::set<Symbol> Expr::free_symbols() const {
    std::set<Symbol> s;
    for (const auto& t : terms_) {
        for (const auto& [sym, p] : t.mono) s.insert(sym);
        for (const auto& pt : t.exp) {
            for (const auto& [sym, p] : pt.mono) s.insert(sym);
        }
    }
    return s;
}

ExpArg Expr::as_exparg() const {
    ExpArg a;
    a.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!t.exp.empty()) throw UnsupportedForm("exponential inside an exponent");
        a.push_back({t.mono, t.coeff});
    }
    return a;
}

Expr Expr::from_exparg(const ExpArg& a) {
    Expr e;
    e.terms_.reserve(a.size());
    for (const auto& pt : a) e.terms_.push_back({pt.coeff, pt.mono, {}});
    return e;
}

Expr Expr::operator-() const {
    Expr e = *this;
    for (auto& t : e.terms_) t.coeff = -t.coeff;
    return e;
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.terms_.empty()) return b;
    if (b.terms_.empty()) return a;
    Expr r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
        std::strong_ordering m = std::strong_ordering::equal;
        if (i == a.terms_.end()) {
            m = std::strong_ordering::less;
        } else if (j == b.terms_.end()) {
            m = std::strong_ordering::greater;
        } else {
            m = term_key_cmp(*i, *j);
        }
        if (m > 0) {
            r.terms_.push_back(*i++);
        } else if (m < 0) {
            r.terms_.push_back(*j++);
        } else {
            Coefficient c = i->coeff + j->coeff;
            if (!c.is_zero()) r.terms_.push_back({std::move(c), i->mono, i->exp});
            ++i;
            ++j;
        }
    }
    return r;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
    if (a.terms_.empty() || b.terms_.empty()) return {};
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    if (a.terms_.size() * b.terms_.size() >= 2048) return liewn::detail::packed_product(a, b);
    std::vector<Term> prod;
    prod.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            prod.push_back({x.coeff * y.coeff, mono_mul(x.mono, y.mono), exparg_add(x.exp, y.exp)});
        }
    }
    return Expr::from_terms(std::move(prod));
}

Expr operator*(const Expr& a, const Coefficient& c) {
    if (c.is_zero()) return {};
    Expr r = a;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
}

std::size_t Expr::hash() const noexcept {
    std::size_t h = terms_.size();
    for (const auto& t : terms_) {
        h = h * 1000003u ^ t.coeff.hash();
        for (const auto& [s, p] : t.mono) h = h * 31u ^ (SymbolHash{}(s) + p);
        for (const auto& pt : t.exp) h = h * 131u ^ pt.coeff.hash();
    }
    return h;
}

// ---------------------------------------------------------------- substitution

namespace {

Expr monomial_value(const Monomial& m, const Substitution& b) {
    Expr r(1);
    Monomial kept;
    for (const auto& [s, p] : m) {
        auto it = b.find(s);
        if (it == b.end()) {
            kept.emplace_back(s, p);
        } else {
            r *= it->second.pow(p);
        }
    }
    if (!kept.empty()) r *= Expr::from_terms({Term{Coefficient(1), kept, {}}});
    return r;
}

}  // namespace

Expr substitute(const Expr& e, const Substitution& bindings) {
    if (bindings.empty()) return e;
    Expr acc;
    for (const auto& t : e.terms()) {
        Expr term(t.coeff);
        term *= monomial_value(t.mono, bindings);
        if (!t.exp.empty()) {
            Expr arg;
            for (const auto& pt : t.exp) arg += monomial_value(pt.mono, bindings) * pt.coeff;
            term *= Expr::exp(arg);
        }
        acc += term;
    }
    return acc;
}

std::complex<double> eval_numeric(const Expr& e,
                                  const std::function<std::optional<std::complex<double>>(Symbol)>& lookup) {
    auto mono_val = [&](const Monomial& m) {
        std::complex<double> v(1.0, 0.0);
        for (const auto& [s, p] : m) {
            auto x = lookup(s);
            if (!x) throw UnboundSymbol(s.text());
            for (std::uint32_t k = 0; k < p; ++k) v *= *x;
        }
        return v;
    };
    std::complex<double> sum{};
    for (const auto& t : e.terms()) {
        std::complex<double> v = t.coeff.to_complex() * mono_val(t.mono);
        if (!t.exp.empty()) {
            std::complex<double> arg{};
            for (const auto& pt : t.exp) arg += pt.coeff.to_complex() * mono_val(pt.mono);
            v *= std::exp(arg);
        }
        sum += v;
    }
    return sum;
}

std::complex<double> eval_numeric(const Expr& e, const NumericBindings& bindings) {
    return eval_numeric(e, [&](Symbol s) -> std::optional<std::complex<double>> {
        auto it = bindings.find(s);
        if (it == bindings.end()) return std::nullopt;
        return it->second;
    });
}

// ---------------------------------------------------------------- division

std::optional<Expr> exact_divide(const Expr& num, const Expr& den) {
    if (den.is_zero()) throw StructuralError("division by zero expression");
    if (num.is_zero()) return Expr{};
    if (den.is_one()) return num;
    const Term& ld = den.leading();
    const Coefficient inv_lc = ld.coeff.inverse();
    const ExpArg neg_exp = exparg_neg(ld.exp);
    if (den.is_single_term()) {
        std::vector<Term> q;
        q.reserve(num.size());
        for (const auto& t : num.terms()) {
            if (!mono_divides(ld.mono, t.mono)) return std::nullopt;
            q.push_back({t.coeff * inv_lc, mono_div(t.mono, ld.mono), exparg_add(t.exp, neg_exp)});
        }
        return Expr::from_terms(std::move(q));
    }
    // Every quotient term lies between lt(num)/lt(den) and tail(num)/tail(den).
    const Term& tn = num.terms().back();
    const Term& td = den.terms().back();
    if (!mono_divides(td.mono, tn.mono)) return std::nullopt;
    const Term qmin{{}, mono_div(tn.mono, td.mono), exparg_add(tn.exp, exparg_neg(td.exp))};
    auto desc = [](const Term& x, const Term& y) { return term_key_cmp(x, y) > 0; };
    std::map<Term, Coefficient, decltype(desc)> rem(desc);
    for (const auto& t : num.terms()) rem.emplace(Term{{}, t.mono, t.exp}, t.coeff);
    std::vector<Term> q;
    const std::size_t max_steps = 4 * (num.size() + den.size()) + 256;
    const std::size_t max_rem = 8 * (num.size() + den.size()) + 256;
    while (!rem.empty()) {
        if (q.size() > max_steps || rem.size() > max_rem) return std::nullopt;
        auto it = rem.begin();
        if (!mono_divides(ld.mono, it->first.mono)) return std::nullopt;
        Term qt{it->second * inv_lc, mono_div(it->first.mono, ld.mono), exparg_add(it->first.exp, neg_exp)};
        if (term_key_cmp(qt, qmin) < 0) return std::nullopt;
        for (const auto& dt : den.terms()) {
            Term key{{}, mono_mul(qt.mono, dt.mono), exparg_add(qt.exp, dt.exp)};
            const Coefficient c = qt.coeff * dt.coeff;
            auto [pos, inserted] = rem.try_emplace(std::move(key), -c);
            if (!inserted) {
                pos->second -= c;
                if (pos->second.is_zero()) rem.erase(pos);
            }
        }
        q.push_back(std::move(qt));
    }
    return Expr::from_terms(std::move(q));
}

// ---------------------------------------------------------------- RationalExpr

RationalExpr::RationalExpr(Expr num, Expr den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

void RationalExpr::normalize() {
    if (den_.is_zero()) throw StructuralError("rational expression with zero denominator");
    if (num_.is_zero()) {
        den_ = Expr(1);
        return;
    }
    std::optional<Expr> q;
    try {
        q = exact_divide(num_, den_);
    } catch (const std::overflow_error&) {
        // coefficient growth in a failing trial division
    }
    if (q) {
        num_ = std::move(*q);
        den_ = Expr(1);
        return;
    }
    Monomial g = den_.leading().mono;
    for (const auto& t : den_.terms()) g = mono_gcd(g, t.mono);
    for (const auto& t : num_.terms()) g = mono_gcd(g, t.mono);
    const Term& ld = den_.leading();
    Term scale{ld.coeff, g, ld.exp};
    const Expr s = Expr::from_terms({scale});
    num_ = *exact_divide(num_, s);
    den_ = *exact_divide(den_, s);
}

bool RationalExpr::equivalent(const RationalExpr& o) const { return num_ * o.den_ == o.num_ * den_; }

RationalExpr operator+(const RationalExpr& a, const RationalExpr& b) {
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalExpr operator*(const RationalExpr& a, const RationalExpr& b) { return {a.num_ * b.num_, a.den_ * b.den_}; }

RationalExpr substitute(const RationalExpr& e, const Substitution& bindings) {
    return {substitute(e.num(), bindings), substitute(e.den(), bindings)};
}

std::complex<double> eval_numeric(const RationalExpr& e, const NumericBindings& bindings) {
    return eval_numeric(e.num(), bindings) / eval_numeric(e.den(), bindings);
}

}  // namespace liewn::sym

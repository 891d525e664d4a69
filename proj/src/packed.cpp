#include "liewn/detail/packed.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>

namespace liewn::detail {

namespace {

using sym::Coefficient;
using sym::Expr;
using sym::Monomial;
using sym::Rational;

/// One real exponent direction: coefficient part (radicand, imaginary flag) of a monomial.
struct Direction {
    Monomial mono;
    std::int64_t radicand;
    bool imag;
    auto operator<=>(const Direction& o) const {
        if (auto c = sym::mono_cmp(mono, o.mono); c != 0) return c;
        if (auto c = radicand <=> o.radicand; c != 0) return c;
        return imag <=> o.imag;
    }
    bool operator==(const Direction& o) const { return (*this <=> o) == 0; }
};

class Packing {
public:
    explicit Packing(const std::vector<const Expr*>& exprs) {
        std::map<sym::Symbol, std::size_t> syms;
        std::map<Direction, std::int64_t> lcd;
        for (const Expr* e : exprs) {
            for (const auto& t : e->terms()) {
                for (const auto& [s, p] : t.mono) syms.emplace(s, 0);
                for (const auto& pt : t.exp) {
                    for (const auto& part : pt.coeff.parts()) {
                        for (bool imag : {false, true}) {
                            const Rational& v = imag ? part.im : part.re;
                            if (v.num() == 0) continue;
                            auto [it, _] = lcd.emplace(Direction{pt.mono, part.radicand, imag}, 1);
                            it->second = std::lcm(it->second, v.den());
                        }
                    }
                }
            }
        }
        for (auto& [s, idx] : syms) {
            idx = symbols_.size();
            symbols_.push_back(s);
        }
        sym_index_ = std::move(syms);
        for (const auto& [d, l] : lcd) {
            dir_index_.emplace(d, directions_.size());
            directions_.push_back(d);
            scale_.push_back(l);
        }
        width_ = symbols_.size() + directions_.size();
    }

    [[nodiscard]] std::size_t width() const noexcept { return width_; }

    struct Poly {
        std::vector<std::int32_t> keys;  // width ints per term
        std::vector<Coefficient> coeffs;
        [[nodiscard]] std::size_t size() const noexcept { return coeffs.size(); }
        [[nodiscard]] bool empty() const noexcept { return coeffs.empty(); }
    };

    [[nodiscard]] Poly pack(const Expr& e) const {
        Poly p;
        p.keys.assign(e.size() * width_, 0);
        p.coeffs.reserve(e.size());
        std::size_t k = 0;
        for (const auto& t : e.terms()) {
            std::int32_t* key = p.keys.data() + k * width_;
            for (const auto& [s, pw] : t.mono) key[sym_index_.at(s)] = static_cast<std::int32_t>(pw);
            for (const auto& pt : t.exp) {
                for (const auto& part : pt.coeff.parts()) {
                    for (bool imag : {false, true}) {
                        const Rational& v = imag ? part.im : part.re;
                        if (v.num() == 0) continue;
                        const std::size_t d = dir_index_.at(Direction{pt.mono, part.radicand, imag});
                        key[symbols_.size() + d] =
                            static_cast<std::int32_t>(v.num() * (scale_[d] / v.den()));
                    }
                }
            }
            p.coeffs.push_back(t.coeff);
            ++k;
        }
        return p;
    }

    [[nodiscard]] Expr unpack(const Poly& p) const {
        std::vector<sym::Term> terms;
        terms.reserve(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) {
            const std::int32_t* key = p.keys.data() + k * width_;
            sym::Term t;
            t.coeff = p.coeffs[k];
            for (std::size_t s = 0; s < symbols_.size(); ++s) {
                if (key[s]) t.mono.emplace_back(symbols_[s], static_cast<std::uint32_t>(key[s]));
            }
            // directions are sorted ascending by monomial; exp arguments want descending
            for (std::size_t d = directions_.size(); d-- > 0;) {
                const std::int32_t v = key[symbols_.size() + d];
                if (!v) continue;
                const Direction& dir = directions_[d];
                Coefficient c = Coefficient(Rational(v, scale_[d])) * Coefficient::sqrt(dir.radicand);
                if (dir.imag) c = c * Coefficient::i();
                if (!t.exp.empty() && t.exp.back().mono == dir.mono) {
                    t.exp.back().coeff += c;
                    if (t.exp.back().coeff.is_zero()) t.exp.pop_back();
                } else {
                    t.exp.push_back({dir.mono, std::move(c)});
                }
            }
            terms.push_back(std::move(t));
        }
        return Expr::from_terms(std::move(terms));
    }

    [[nodiscard]] Poly mul(const Poly& a, const Poly& b) const {
        Poly r;
        if (a.empty() || b.empty()) return r;
        const std::size_t n = a.size() * b.size();
        std::vector<std::int32_t> keys(n * width_);
        std::vector<Coefficient> coeffs;
        coeffs.reserve(n);
        std::size_t k = 0;
        for (std::size_t x = 0; x < a.size(); ++x) {
            const std::int32_t* ka = a.keys.data() + x * width_;
            for (std::size_t y = 0; y < b.size(); ++y) {
                const std::int32_t* kb = b.keys.data() + y * width_;
                std::int32_t* kr = keys.data() + k * width_;
                for (std::size_t w = 0; w < width_; ++w) kr[w] = ka[w] + kb[w];
                coeffs.push_back(a.coeffs[x] * b.coeffs[y]);
                ++k;
            }
        }
        return collect(keys, coeffs);
    }

    [[nodiscard]] Poly add(const Poly& a, const Poly& b, bool negate_b) const {
        std::vector<std::int32_t> keys = a.keys;
        keys.insert(keys.end(), b.keys.begin(), b.keys.end());
        std::vector<Coefficient> coeffs = a.coeffs;
        for (const auto& c : b.coeffs) coeffs.push_back(negate_b ? -c : c);
        return collect(keys, coeffs);
    }

private:
    /// Sums coefficients of equal keys; output order is unspecified.
    [[nodiscard]] Poly collect(const std::vector<std::int32_t>& keys, const std::vector<Coefficient>& coeffs) const {
        const std::size_t n = coeffs.size();
        const std::size_t w = width_;
        auto key = [&](std::size_t i) { return keys.data() + i * w; };
        std::size_t cap = 16;
        while (cap < 2 * n) cap <<= 1;
        constexpr std::uint32_t empty = 0xffffffffU;
        std::vector<std::uint32_t> slot(cap, empty);
        std::vector<std::uint32_t> first;  // representative input index per distinct key
        std::vector<Coefficient> sum;
        first.reserve(n);
        sum.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t h = 1469598103934665603ULL;
            for (std::size_t x = 0; x < w; ++x) h = (h ^ static_cast<std::uint32_t>(key(i)[x])) * 1099511628211ULL;
            std::size_t pos = (h ^ (h >> 29)) & (cap - 1);
            for (;;) {
                if (slot[pos] == empty) {
                    slot[pos] = static_cast<std::uint32_t>(first.size());
                    first.push_back(static_cast<std::uint32_t>(i));
                    sum.push_back(coeffs[i]);
                    break;
                }
                if (std::equal(key(i), key(i) + w, key(first[slot[pos]]))) {
                    sum[slot[pos]] += coeffs[i];
                    break;
                }
                pos = (pos + 1) & (cap - 1);
            }
        }
        Poly r;
        r.keys.reserve(first.size() * w);
        r.coeffs.reserve(first.size());
        for (std::size_t d = 0; d < first.size(); ++d) {
            if (sum[d].is_zero()) continue;
            r.keys.insert(r.keys.end(), key(first[d]), key(first[d]) + w);
            r.coeffs.push_back(std::move(sum[d]));
        }
        return r;
    }

    std::vector<sym::Symbol> symbols_;
    std::map<sym::Symbol, std::size_t> sym_index_;
    std::vector<Direction> directions_;
    std::map<Direction, std::size_t> dir_index_;
    std::vector<std::int64_t> scale_;
    std::size_t width_ = 0;
};

using Poly = Packing::Poly;

/// Consumes column c: minors over row subsets of size c become minors of size c + 1,
/// by cofactor expansion along the new last column.
std::vector<Poly> extend(const Packing& pk, const std::vector<Poly>& col, std::size_t c,
                         const std::vector<Poly>& minors) {
    const std::size_t n = col.size();
    std::vector<Poly> next(minors.size());
    for (std::uint32_t R = 0; R < minors.size(); ++R) {
        if (static_cast<std::size_t>(__builtin_popcount(R)) != c + 1) continue;
        Poly acc;
        for (std::size_t r = 0; r < n; ++r) {
            if (!(R & (1U << r))) continue;
            const Poly& x = col[r];
            const Poly& m = minors[R & ~(1U << r)];
            if (x.empty() || m.empty()) continue;
            const bool neg = (__builtin_popcount(R & ((1U << r) - 1)) + c) % 2 == 1;
            acc = pk.add(acc, pk.mul(x, m), neg);
        }
        next[R] = std::move(acc);
    }
    return next;
}

}  // namespace

Expr packed_product(const Expr& a, const Expr& b) {
    const Packing pk({&a, &b});
    return pk.unpack(pk.mul(pk.pack(a), pk.pack(b)));
}

Expr subset_determinant(const SymMatrix& a) {
    return cramer_numerators(a, {}).back();
}

std::vector<Expr> cramer_numerators(const SymMatrix& a, const std::vector<Expr>& b) {
    const std::size_t n = a.rows();
    if (!a.square() || n > 20) throw StructuralError("subset determinant needs a square matrix of order <= 20");
    std::vector<const Expr*> all;
    for (const auto& e : a.data()) all.push_back(&e);
    for (const auto& e : b) all.push_back(&e);
    const Packing pk(all);
    std::vector<std::vector<Poly>> cols(n, std::vector<Poly>(n));
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) cols[c][r] = pk.pack(a.at(r, c));
    }
    // prefix[k]: minors after columns 0..k-1, shared by every replaced column >= k
    std::vector<std::vector<Poly>> prefix;
    std::vector<Poly> minors(std::size_t{1} << n);
    minors[0].keys.assign(pk.width(), 0);
    minors[0].coeffs.push_back(Coefficient(1));
    prefix.push_back(minors);
    for (std::size_t c = 0; c < n; ++c) {
        minors = extend(pk, cols[c], c, minors);
        prefix.push_back(minors);
    }
    std::vector<Expr> out;
    if (b.empty()) {
        out.push_back(pk.unpack(minors.back()));
        return out;
    }
    if (b.size() != n) throw IndexError("right-hand side length differs from matrix order");
    std::vector<Poly> bp;
    for (const auto& e : b) bp.push_back(pk.pack(e));
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Poly> m = extend(pk, bp, k, prefix[k]);
        for (std::size_t c = k + 1; c < n; ++c) m = extend(pk, cols[c], c, m);
        out.push_back(pk.unpack(m.back()));
    }
    return out;
}

}  // namespace liewn::detail

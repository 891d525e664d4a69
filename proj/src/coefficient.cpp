#include "liewn/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace liewn::sym {

std::int64_t square_free_part(std::int64_t n, std::int64_t* outside) {
    if (n < 1) throw std::domain_error("square_free_part of non-positive integer");
    std::int64_t out = 1;
    std::int64_t rest = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int k = 0; k < e / 2; ++k) out *= p;
        if (e % 2) rest *= p;
    }
    rest *= n;
    if (outside) *outside = out;
    return rest;
}

namespace {

std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> ps;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

std::string rat_abs_num(const Rational& q) {
    return std::to_string(q.num() < 0 ? -q.num() : q.num());
}

struct Atom {
    Rational q;
    bool imag;
    std::int64_t radicand;
};

std::vector<Atom> atoms_of(const std::vector<Coefficient::Part>& parts) {
    std::vector<Atom> out;
    for (const auto& p : parts) {
        if (!p.re.is_zero()) out.push_back({p.re, false, p.radicand});
        if (!p.im.is_zero()) out.push_back({p.im, true, p.radicand});
    }
    return out;
}

std::string atom_text(const Atom& a) {
    std::vector<std::string> f;
    const bool unit_num = a.q.num() == 1 || a.q.num() == -1;
    if (!unit_num) f.push_back(rat_abs_num(a.q));
    if (a.imag) f.emplace_back("i");
    if (a.radicand != 1) f.push_back("sqrt(" + std::to_string(a.radicand) + ")");
    std::string s = a.q.sign() < 0 ? "-" : "";
    if (f.empty()) {
        s += "1";
    } else {
        for (std::size_t k = 0; k < f.size(); ++k) s += (k ? "*" : "") + f[k];
    }
    if (!a.q.is_integer()) s += "/" + std::to_string(a.q.den());
    return s;
}

std::string atom_latex(const Atom& a) {
    std::string top;
    const bool unit_num = a.q.num() == 1 || a.q.num() == -1;
    if (!unit_num) top += rat_abs_num(a.q);
    if (a.imag) top += "i";
    if (a.radicand != 1) top += "\\sqrt{" + std::to_string(a.radicand) + "}";
    if (top.empty()) top = "1";
    std::string s = a.q.sign() < 0 ? "-" : "";
    if (a.q.is_integer()) return s + top;
    return s + "\\frac{" + top + "}{" + std::to_string(a.q.den()) + "}";
}

}  // namespace

void Coefficient::set(std::int64_t r, Rational re, Rational im) {
    parts_.clear();
    if (!re.is_zero() || !im.is_zero()) parts_.push_back({r, re, im});
}

Coefficient Coefficient::sqrt(std::int64_t d) {
    std::int64_t out = 1;
    const std::int64_t r = square_free_part(d, &out);
    Coefficient c;
    c.parts_.push_back({r, Rational(out), Rational(0)});
    return c;
}

bool Coefficient::is_one() const noexcept {
    return parts_.size() == 1 && parts_[0].radicand == 1 && parts_[0].re.is_one() && parts_[0].im.is_zero();
}

bool Coefficient::is_rational() const noexcept {
    return parts_.empty() || (parts_.size() == 1 && parts_[0].radicand == 1 && parts_[0].im.is_zero());
}

bool Coefficient::is_gaussian() const noexcept {
    return parts_.empty() || (parts_.size() == 1 && parts_[0].radicand == 1);
}

bool Coefficient::is_real() const noexcept {
    return std::all_of(parts_.begin(), parts_.end(), [](const Part& p) { return p.im.is_zero(); });
}

Rational Coefficient::rational() const noexcept { return parts_.empty() ? Rational{} : parts_[0].re; }

std::complex<double> Coefficient::to_complex() const noexcept {
    std::complex<double> z{};
    for (const auto& p : parts_) {
        const double s = std::sqrt(static_cast<double>(p.radicand));
        z += std::complex<double>(p.re.to_double() * s, p.im.to_double() * s);
    }
    return z;
}

Coefficient Coefficient::operator-() const {
    Coefficient c = *this;
    for (auto& p : c.parts_) {
        p.re = -p.re;
        p.im = -p.im;
    }
    return c;
}

Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    if (a.parts_.empty()) return b;
    if (b.parts_.empty()) return a;
    Coefficient c;
    c.parts_.reserve(a.parts_.size() + b.parts_.size());
    auto i = a.parts_.begin();
    auto j = b.parts_.begin();
    while (i != a.parts_.end() || j != b.parts_.end()) {
        if (j == b.parts_.end() || (i != a.parts_.end() && i->radicand < j->radicand)) {
            c.parts_.push_back(*i++);
        } else if (i == a.parts_.end() || j->radicand < i->radicand) {
            c.parts_.push_back(*j++);
        } else {
            Coefficient::Part p{i->radicand, i->re + j->re, i->im + j->im};
            if (!p.re.is_zero() || !p.im.is_zero()) c.parts_.push_back(p);
            ++i;
            ++j;
        }
    }
    return c;
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    if (a.parts_.empty() || b.parts_.empty()) return {};
    if (a.parts_.size() == 1 && b.parts_.size() == 1 && a.parts_[0].radicand == 1 && b.parts_[0].radicand == 1) {
        const auto& x = a.parts_[0];
        const auto& y = b.parts_[0];
        Coefficient c;
        c.set(1, x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re);
        return c;
    }
    Coefficient acc;
    for (const auto& x : a.parts_) {
        for (const auto& y : b.parts_) {
            const std::int64_t g = std::gcd(x.radicand, y.radicand);
            const std::int64_t r = (x.radicand / g) * (y.radicand / g);
            const Rational re = (x.re * y.re - x.im * y.im) * Rational(g);
            const Rational im = (x.re * y.im + x.im * y.re) * Rational(g);
            Coefficient term;
            if (!re.is_zero() || !im.is_zero()) term.parts_.push_back({r, re, im});
            acc += term;
        }
    }
    return acc;
}

Coefficient Coefficient::sigma(std::int64_t p) const {
    Coefficient c = *this;
    for (auto& part : c.parts_) {
        if (part.radicand % p == 0) {
            part.re = -part.re;
            part.im = -part.im;
        }
    }
    return c;
}

Coefficient Coefficient::conj() const {
    Coefficient c = *this;
    for (auto& p : c.parts_) p.im = -p.im;
    return c;
}

Coefficient Coefficient::inverse() const {
    if (parts_.empty()) throw std::domain_error("division by zero coefficient");
    Coefficient num(1);
    Coefficient cur = *this;
    std::vector<std::int64_t> primes;
    for (const auto& p : parts_) {
        for (auto q : prime_factors(p.radicand)) primes.push_back(q);
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    // each conjugation removes one prime from every radicand
    for (auto p : primes) {
        const Coefficient s = cur.sigma(p);
        num *= s;
        cur *= s;
    }
    if (!cur.is_gaussian()) throw std::logic_error("coefficient inverse failed to rationalize");
    const auto& z = cur.parts_[0];
    const Rational n2 = z.re * z.re + z.im * z.im;
    Coefficient zi;
    zi.set(1, z.re / n2, -z.im / n2);
    return num * zi;
}

Coefficient Coefficient::pow(int n) const {
    if (n < 0) return inverse().pow(-n);
    Coefficient r(1);
    Coefficient b = *this;
    while (n) {
        if (n & 1) r *= b;
        n >>= 1;
        if (n) b *= b;
    }
    return r;
}

std::strong_ordering operator<=>(const Coefficient& a, const Coefficient& b) {
    if (a.parts_.size() == 1 && b.parts_.size() == 1 && a.parts_[0].radicand == b.parts_[0].radicand) {
        if (auto c = a.parts_[0].re <=> b.parts_[0].re; c != 0) return c;
        return a.parts_[0].im <=> b.parts_[0].im;
    }
    auto i = a.parts_.begin();
    auto j = b.parts_.begin();
    const Rational zero;
    while (i != a.parts_.end() || j != b.parts_.end()) {
        if (j == b.parts_.end() || (i != a.parts_.end() && i->radicand < j->radicand)) {
            if (auto c = i->re <=> zero; c != 0) return c;
            if (auto c = i->im <=> zero; c != 0) return c;
            ++i;
        } else if (i == a.parts_.end() || j->radicand < i->radicand) {
            if (auto c = zero <=> j->re; c != 0) return c;
            if (auto c = zero <=> j->im; c != 0) return c;
            ++j;
        } else {
            if (auto c = i->re <=> j->re; c != 0) return c;
            if (auto c = i->im <=> j->im; c != 0) return c;
            ++i;
            ++j;
        }
    }
    return std::strong_ordering::equal;
}

int Coefficient::leading_sign() const noexcept {
    if (parts_.empty()) return 0;
    const auto& p = parts_[0];
    return p.re.is_zero() ? p.im.sign() : p.re.sign();
}

std::size_t Coefficient::atom_count() const noexcept {
    std::size_t n = 0;
    for (const auto& p : parts_) n += !p.re.is_zero() + !p.im.is_zero();
    return n;
}

std::string Coefficient::text() const {
    const auto atoms = atoms_of(parts_);
    if (atoms.empty()) return "0";
    if (atoms.size() == 1) return atom_text(atoms[0]);
    std::string s = "(";
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const std::string a = atom_text(atoms[k]);
        if (k && a[0] != '-') s += "+";
        s += a;
    }
    return s + ")";
}

std::string Coefficient::latex() const {
    const auto atoms = atoms_of(parts_);
    if (atoms.empty()) return "0";
    if (atoms.size() == 1) return atom_latex(atoms[0]);
    std::string s = "\\left(";
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const std::string a = atom_latex(atoms[k]);
        if (k && a[0] != '-') s += "+";
        s += a;
    }
    return s + "\\right)";
}

std::size_t Coefficient::hash() const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto& p : parts_) {
        h ^= std::hash<std::int64_t>{}(p.radicand) + (h << 6) + (h >> 2);
        h ^= p.re.hash() + (h << 6) + (h >> 2);
        h ^= p.im.hash() + (h << 6) + (h >> 2);
    }
    return h;
}

}  // namespace liewn::sym

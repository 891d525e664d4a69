#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "liewn/rational.hpp"

namespace liewn::sym {

/// Element of Q(i)(sqrt 2, sqrt 3, ...): a finite sum of (re + i*im)*sqrt(r).
class Coefficient {
public:
    struct Part {
        std::int64_t radicand = 1;  // square-free, >= 1
        Rational re;
        Rational im;
        friend bool operator==(const Part&, const Part&) = default;
    };

    Coefficient() = default;
    Coefficient(Rational re) { set(1, re, Rational{}); }  // NOLINT(implicit)
    Coefficient(std::int64_t n) : Coefficient(Rational(n)) {}  // NOLINT(implicit)
    Coefficient(int n) : Coefficient(Rational(n)) {}  // NOLINT(implicit)
    Coefficient(Rational re, Rational im) { set(1, re, im); }

    static Coefficient i() { return {Rational(0), Rational(1)}; }
    /// sqrt(d) for d >= 1; perfect-square factors are pulled out.
    static Coefficient sqrt(std::int64_t d);

    [[nodiscard]] const std::vector<Part>& parts() const noexcept { return parts_; }
    [[nodiscard]] bool is_zero() const noexcept { return parts_.empty(); }
    [[nodiscard]] bool is_one() const noexcept;
    [[nodiscard]] bool is_rational() const noexcept;
    [[nodiscard]] bool is_gaussian() const noexcept;  // no radicals
    [[nodiscard]] bool is_real() const noexcept;
    /// Rational value; only meaningful when is_rational().
    [[nodiscard]] Rational rational() const noexcept;

    [[nodiscard]] std::complex<double> to_complex() const noexcept;

    Coefficient operator-() const;
    friend Coefficient operator+(const Coefficient& a, const Coefficient& b);
    friend Coefficient operator-(const Coefficient& a, const Coefficient& b) { return a + (-b); }
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
    friend Coefficient operator/(const Coefficient& a, const Coefficient& b) { return a * b.inverse(); }
    Coefficient& operator+=(const Coefficient& o) { return *this = *this + o; }
    Coefficient& operator-=(const Coefficient& o) { return *this = *this - o; }
    Coefficient& operator*=(const Coefficient& o) { return *this = *this * o; }
    Coefficient& operator/=(const Coefficient& o) { return *this = *this / o; }

    [[nodiscard]] Coefficient inverse() const;
    [[nodiscard]] Coefficient conj() const;
    [[nodiscard]] Coefficient pow(int n) const;

    friend bool operator==(const Coefficient&, const Coefficient&) = default;
    /// Total order compatible with addition (lexicographic on the part vector).
    friend std::strong_ordering operator<=>(const Coefficient& a, const Coefficient& b);

    /// Sign of the leading real-or-imaginary component: +1, -1 or 0.
    [[nodiscard]] int leading_sign() const noexcept;

    /// Parseable text, e.g. "3/2", "-i", "sqrt(3)/2", "(1+sqrt(2))".
    /// Multi-atom values are wrapped in parentheses.
    [[nodiscard]] std::string text() const;
    [[nodiscard]] std::string latex() const;
    /// Number of printable atoms (rational * [i] * [sqrt]).
    [[nodiscard]] std::size_t atom_count() const noexcept;

    [[nodiscard]] std::size_t hash() const noexcept;

private:
    void set(std::int64_t r, Rational re, Rational im);
    /// Flip the sign of parts whose radicand is divisible by the prime p.
    [[nodiscard]] Coefficient sigma(std::int64_t p) const;

    std::vector<Part> parts_;  // sorted by radicand, no zero parts
};

std::int64_t square_free_part(std::int64_t n, std::int64_t* outside = nullptr);

}  // namespace liewn::sym

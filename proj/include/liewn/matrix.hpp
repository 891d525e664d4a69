#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "liewn/errors.hpp"
#include "liewn/expr.hpp"

namespace liewn {

/// Dense row-major matrix. operator() is 1-based; at() is 0-based.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t k = 0; k < n; ++k) m.at(k, k) = T(1);
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    T& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    T& operator()(std::size_t i, std::size_t j) { return at(check(i, rows_) - 1, check(j, cols_) - 1); }
    const T& operator()(std::size_t i, std::size_t j) const {
        return at(check(i, rows_) - 1, check(j, cols_) - 1);
    }

    [[nodiscard]] Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        }
        return t;
    }

    /// 0-based row copy.
    [[nodiscard]] std::vector<T> row(std::size_t r) const {
        return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                              data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix dimension mismatch");
        Matrix m(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& x = a.at(r, k);
                if (is_zero(x)) continue;
                for (std::size_t c = 0; c < b.cols_; ++c) {
                    const T& y = b.at(k, c);
                    if (!is_zero(y)) m.at(r, c) += x * y;
                }
            }
        }
        return m;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        Matrix m = a;
        for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] += b.data_[k];
        return m;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        Matrix m = a;
        for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] -= b.data_[k];
        return m;
    }
    friend bool operator==(const Matrix&, const Matrix&) = default;

    [[nodiscard]] bool is_zero_matrix() const {
        for (const auto& x : data_) {
            if (!is_zero(x)) return false;
        }
        return true;
    }

    [[nodiscard]] const std::vector<T>& data() const noexcept { return data_; }

private:
    static bool is_zero(const T& x) { return x.is_zero(); }
    static std::size_t check(std::size_t i, std::size_t n) {
        if (i < 1 || i > n) {
            throw IndexError("matrix index " + std::to_string(i) + " out of range 1.." + std::to_string(n));
        }
        return i;
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using SymMatrix = Matrix<sym::Expr>;
using CMatrix = Matrix<sym::Coefficient>;

inline SymMatrix to_sym(const CMatrix& m) {
    SymMatrix s(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) s.at(r, c) = sym::Expr(m.at(r, c));
    }
    return s;
}

inline SymMatrix scale(const SymMatrix& m, const sym::Expr& s) {
    SymMatrix r = m;
    for (std::size_t a = 0; a < m.rows(); ++a) {
        for (std::size_t b = 0; b < m.cols(); ++b) {
            if (!m.at(a, b).is_zero()) r.at(a, b) = m.at(a, b) * s;
        }
    }
    return r;
}

}  // namespace liewn

// Dense row-major matrices sized for small state-space models (n <= 10 or so).
#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "physguard/errors.hpp"

namespace physguard {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) {
                throw DimensionMismatch("Matrix: ragged initializer list");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const Vector& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix product: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    }
    return out;
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("matrix sum: shapes differ");
    }
    Matrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
    }
    return out;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("matrix difference: shapes differ");
    }
    Matrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
    }
    return out;
}

inline Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    }
    return out;
}

inline Vector mat_vec(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) throw DimensionMismatch("mat_vec: vector length differs from column count");
    Vector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        out[i] = acc;
    }
    return out;
}

inline Vector vec_add(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vec_add: lengths differ");
    Vector out = a;
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

inline Vector vec_sub(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vec_sub: lengths differ");
    Vector out = a;
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

inline bool is_symmetric(const Matrix& m, double rel_tol = 1e-12) {
    if (m.rows() != m.cols()) return false;
    double scale = 0.0;
    for (double v : m.data()) scale = std::max(scale, std::abs(v));
    const double tol = rel_tol * std::max(scale, 1.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > tol) return false;
        }
    }
    return true;
}

// Solves a * x = rhs by Gauss-Jordan elimination with partial pivoting.
// Returns nullopt when a pivot falls below the singularity threshold.
inline std::optional<Matrix> solve(Matrix a, Matrix rhs) {
    if (a.rows() != a.cols()) throw DimensionMismatch("solve: matrix must be square");
    if (a.rows() != rhs.rows()) throw DimensionMismatch("solve: rhs row count differs");
    const std::size_t n = a.rows();
    double scale = 0.0;
    for (double v : a.data()) scale = std::max(scale, std::abs(v));
    if (!(scale > 0.0)) return std::nullopt;
    const double tiny = 1e-14 * scale;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        }
        if (!(std::abs(a(pivot, col)) > tiny)) return std::nullopt;
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            for (std::size_t j = 0; j < rhs.cols(); ++j) std::swap(rhs(pivot, j), rhs(col, j));
        }
        const double inv = 1.0 / a(col, col);
        for (std::size_t j = 0; j < n; ++j) a(col, j) *= inv;
        for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(col, j) *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a(r, col);
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) a(r, j) -= factor * a(col, j);
            for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(r, j) -= factor * rhs(col, j);
        }
    }
    return rhs;
}

}  // namespace physguard

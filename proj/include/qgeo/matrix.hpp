#pragma once

// Small dense row-major matrices. Every matrix in this library is at most
// 8x8, so the kernel favors clarity and determinism over throughput.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qgeo/errors.hpp"

namespace qgeo {

using cdouble = std::complex<double>;
using RealVector = std::vector<double>;
using ComplexVector = std::vector<cdouble>;

template <typename T>
class basic_matrix {
public:
    basic_matrix() = default;
    basic_matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

    static basic_matrix zero(std::size_t rows, std::size_t cols) { return basic_matrix(rows, cols); }

    static basic_matrix identity(std::size_t n) {
        basic_matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<T>& data() const { return data_; }

    basic_matrix& operator+=(const basic_matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    basic_matrix& operator-=(const basic_matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    basic_matrix& operator*=(const T& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend basic_matrix operator+(basic_matrix a, const basic_matrix& b) { return a += b; }
    friend basic_matrix operator-(basic_matrix a, const basic_matrix& b) { return a -= b; }
    friend basic_matrix operator*(basic_matrix a, const T& s) { return a *= s; }
    friend basic_matrix operator*(const T& s, basic_matrix a) { return a *= s; }

    friend basic_matrix operator*(const basic_matrix& a, const basic_matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
        basic_matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend std::vector<T> operator*(const basic_matrix& a, const std::vector<T>& v) {
        if (a.cols_ != v.size()) throw DimensionMismatch("matrix-vector shape mismatch");
        std::vector<T> out(a.rows_, T{});
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
        return out;
    }

private:
    void require_same_shape(const basic_matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = basic_matrix<double>;
using ComplexMatrix = basic_matrix<cdouble>;

inline ComplexMatrix to_complex(const RealMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline RealMatrix real_part(const ComplexMatrix& m) {
    RealMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).real();
    return out;
}

inline RealMatrix imag_part(const ComplexMatrix& m) {
    RealMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).imag();
    return out;
}

template <typename T>
basic_matrix<T> transpose(const basic_matrix<T>& m) {
    basic_matrix<T> out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
    return out;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

template <typename T>
double max_abs(const basic_matrix<T>& m) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v = std::max(v, std::abs(m(i, j)));
    return v;
}

template <typename T>
double max_abs_diff(const basic_matrix<T>& a, const basic_matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("max_abs_diff shape mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) v = std::max(v, std::abs(a(i, j) - b(i, j)));
    return v;
}

template <typename T>
bool all_finite(const basic_matrix<T>& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(std::abs(m(i, j)))) return false;
        }
    return true;
}

template <typename T>
basic_matrix<T> principal_submatrix(const basic_matrix<T>& m, const std::vector<std::size_t>& idx) {
    for (std::size_t k : idx)
        if (k >= m.rows() || k >= m.cols()) throw IndexOutOfRange("submatrix index out of range");
    basic_matrix<T> out(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
    return out;
}

inline double hermiticity_residual(const ComplexMatrix& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
    return r;
}

inline double antisymmetry_residual(const RealMatrix& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) + m(j, i)));
    return r;
}

inline double symmetry_residual(const RealMatrix& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) - m(j, i)));
    return r;
}

// Hermitian matrix with validated construction. Entries are exactly
// symmetrized so downstream eigensolves see a bit-exact Hermitian input.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const ComplexMatrix& m, double tol = 1e-12) {
        if (!m.square()) throw DimensionMismatch("HermitianMatrix requires a square matrix");
        if (!all_finite(m)) throw NumericalInconsistency("HermitianMatrix: non-finite entries");
        if (hermiticity_residual(m) > tol)
            throw NumericalInconsistency("HermitianMatrix: hermiticity residual above tolerance");
        m_ = ComplexMatrix(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            m_(i, i) = m(i, i).real();
            for (std::size_t j = i + 1; j < m.cols(); ++j) {
                const cdouble avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
                m_(i, j) = avg;
                m_(j, i) = std::conj(avg);
            }
        }
    }

    explicit HermitianMatrix(const RealMatrix& m, double tol = 1e-12)
        : HermitianMatrix(to_complex(m), tol) {}

    std::size_t dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }

private:
    ComplexMatrix m_;
};

// Vector helpers (Hilbert-space states are plain ComplexVector).

inline cdouble inner(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("inner product size mismatch");
    cdouble s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

inline double norm(const ComplexVector& v) { return std::sqrt(inner(v, v).real()); }

inline ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b) {
    ComplexMatrix out(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
    return out;
}

inline ComplexVector scaled(const ComplexVector& v, cdouble s) {
    ComplexVector out(v);
    for (auto& x : out) x *= s;
    return out;
}

inline ComplexVector add(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector add size mismatch");
    ComplexVector out(a);
    for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
    return out;
}

inline ComplexVector sub(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector sub size mismatch");
    ComplexVector out(a);
    for (std::size_t k = 0; k < b.size(); ++k) out[k] -= b[k];
    return out;
}

}  // namespace qgeo

#include "qclt/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace qclt {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    assert(r_ == o.r_ && c_ == o.c_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    assert(r_ == o.r_ && c_ == o.c_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

Matrix& Matrix::operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
}

Matrix Matrix::dagger() const {
    Matrix m(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
}

double Matrix::frobenius() const {
    double s = 0.0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
}

double Matrix::one_norm() const {
    double m = 0.0;
    for (std::size_t j = 0; j < c_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < r_; ++i) s += std::abs((*this)(i, j));
        m = std::max(m, s);
    }
    return m;
}

bool Matrix::is_hermitian(double tol) const {
    if (r_ != c_) return false;
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = i; j < c_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

bool Matrix::is_real(double tol) const {
    for (const auto& x : a_)
        if (std::abs(x.imag()) > tol) return false;
    return true;
}

cplx Matrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(r_, c_); ++i) t += (*this)(i, i);
    return t;
}

Matrix operator+(Matrix a, const Matrix& b) { a += b; return a; }
Matrix operator-(Matrix a, const Matrix& b) { a -= b; return a; }
Matrix operator*(cplx s, Matrix a) { a *= s; return a; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    assert(a.cols() == b.rows());
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    Matrix c(n, m);
    // ikj loop order keeps the inner loop contiguous in b and c
    for (std::size_t i = 0; i < n; ++i) {
        cplx* ci = c.data() + i * m;
        const cplx* ai = a.data() + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const cplx aip = ai[p];
            if (aip == cplx(0.0, 0.0)) continue;
            const cplx* bp = b.data() + p * m;
            for (std::size_t j = 0; j < m; ++j) ci[j] += aip * bp[j];
        }
    }
    return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    c(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return c;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

cplx trace_product(const Matrix& a, const Matrix& b) {
    assert(a.cols() == b.rows() && a.rows() == b.cols());
    cplx t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t += a(i, j) * b(j, i);
    return t;
}

} // namespace qclt

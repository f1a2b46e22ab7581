#ifndef QCLT_MATRIX_HPP
#define QCLT_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace qclt {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Small and boring on purpose: every
// Hilbert-space path in this project is dense by design.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : r_(rows), c_(cols), a_(rows * cols, cplx(0.0, 0.0)) {}

    static Matrix identity(std::size_t n);
    static Matrix zero(std::size_t n) { return Matrix(n, n); }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(cplx s);

    Matrix dagger() const;
    double max_abs() const;         // max entrywise |a_ij|
    double frobenius() const;
    double one_norm() const;        // max column abs sum
    bool is_hermitian(double tol) const;
    bool is_real(double tol = 0.0) const;
    cplx trace() const;

  private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<cplx> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(cplx s, Matrix a);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix commutator(const Matrix& a, const Matrix& b);
cplx trace_product(const Matrix& a, const Matrix& b); // Tr(a b) without forming a*b

} // namespace qclt

#endif

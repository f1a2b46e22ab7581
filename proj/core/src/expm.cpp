#include "qclt/expm.hpp"

#include "qclt/errors.hpp"

#include <cmath>
#include <cstddef>

namespace qclt {

Matrix expm(const Matrix& A) {
    if (A.rows() != A.cols()) throw invalid_parameter("expm: square matrix required");
    const std::size_t n = A.rows();

    const double nrm = A.one_norm();
    int s = 0;
    if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));

    Matrix B = A;
    B *= cplx(std::ldexp(1.0, -s), 0.0);

    // Taylor: with ||B|| <= 1/2 the term norms fall by >= 2x per order, so the
    // remainder after order k is below 2 * (1/2)^{k+1} / (k+1)!.
    Matrix result = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    double term_bound = 1.0;
    const double scaled_norm = B.one_norm();
    for (int k = 1; k <= 40; ++k) {
        term = term * B;
        term *= cplx(1.0 / k, 0.0);
        result += term;
        term_bound *= scaled_norm / k;
        if (term_bound < 1e-17) break;
    }
    for (int k = 0; k < s; ++k) result = result * result;
    return result;
}

Matrix expm_i(const Matrix& H, double t) {
    Matrix A = H;
    A *= cplx(0.0, t);
    return expm(A);
}

} // namespace qclt

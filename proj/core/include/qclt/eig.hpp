#ifndef QCLT_EIG_HPP
#define QCLT_EIG_HPP

#include "qclt/matrix.hpp"

#include <vector>

namespace qclt {

struct EigResult {
    std::vector<double> values;  // ascending
    Matrix vectors;              // columns are eigenvectors (empty if not requested)
    bool have_vectors = false;
};

// Hermitian eigendecomposition: Householder tridiagonalization followed by
// implicit-shift QL. Exactly real input takes a real-symmetric fast path;
// want_vectors=false skips all transformation accumulation (roughly 3x faster,
// used by the maximally-mixed spectral paths).
EigResult eig_hermitian(const Matrix& A, bool want_vectors = true);

// Cyclic complex Jacobi. Slow, independent of the QL path; used as a
// validation cross-check. Always produces vectors.
EigResult eig_jacobi_hermitian(const Matrix& A);

// Largest singular value. Hermitian matrices are diagonalized directly,
// anything else goes through A^dagger A.
double spectral_norm(const Matrix& A);

} // namespace qclt

#endif

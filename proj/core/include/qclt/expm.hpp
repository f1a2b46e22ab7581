#ifndef QCLT_EXPM_HPP
#define QCLT_EXPM_HPP

#include "qclt/matrix.hpp"

namespace qclt {

// Matrix exponential by scaling-and-squaring with a Taylor series whose order
// is chosen from the scaled norm; absolute accuracy target 1e-12 for the
// skew-Hermitian arguments used throughout (unitarity preserved to ~1e-12).
Matrix expm(const Matrix& A);

// exp(i * t * H) for Hermitian H.
Matrix expm_i(const Matrix& H, double t);

} // namespace qclt

#endif

#ifndef RSVD_QR_HPP
#define RSVD_QR_HPP

#include "rsvd/dense_matrix.hpp"

namespace rsvd {

/// Thin QR factors: Q has orthonormal columns, R is square upper triangular
/// with nonnegative diagonal.
struct QrFactors {
  DenseMatrix q;  // m x k
  DenseMatrix r;  // k x k
};

/// Householder thin QR of a full-column-rank matrix (cols <= rows).
/// Throws NumericalError naming the first dependent column when rank
/// deficient, InputError when cols > rows.
QrFactors thin_qr(const DenseMatrix& v);

}  // namespace rsvd

#endif

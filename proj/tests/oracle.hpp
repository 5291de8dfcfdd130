#ifndef RSVD_TESTS_ORACLE_HPP
#define RSVD_TESTS_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "rsvd/dense_matrix.hpp"

// Independent reference computations for checking the library's numerics.
// Nothing here shares code with the src/ decomposition paths.
namespace oracle {

struct EigResult {
  std::vector<double> values;  // descending
  rsvd::DenseMatrix vectors;   // columns aligned with values
};

/// Brute-force cyclic Jacobi eigensolver for a symmetric matrix.
EigResult jacobi_eigen_symmetric(const rsvd::DenseMatrix& sym);

/// Gram matrix A^T A formed explicitly.
rsvd::DenseMatrix gram(const rsvd::DenseMatrix& a);

/// Singular values of X as square roots of the Gram eigenvalues.
std::vector<double> singular_values_via_gram(const rsvd::DenseMatrix& x);

/// Triple-loop matrix product, the slow reference.
rsvd::DenseMatrix naive_matmul(const rsvd::DenseMatrix& a,
                               const rsvd::DenseMatrix& b);

/// Seeded random matrix with uniform(-1, 1) entries.
rsvd::DenseMatrix random_matrix(std::size_t rows, std::size_t cols,
                                std::uint64_t seed);

/// Random matrix with orthonormal columns (QR-free construction).
rsvd::DenseMatrix random_orthonormal(std::size_t rows, std::size_t cols,
                                     std::uint64_t seed);

}  // namespace oracle

#endif

#ifndef RSVD_SVD_HPP
#define RSVD_SVD_HPP

#include <cstddef>
#include <vector>

#include "rsvd/dense_matrix.hpp"

namespace rsvd {

/// Request all min(rows, cols) singular triplets.
inline constexpr std::size_t kFullRank = 0;

/// Thin SVD triple X = F diag(sigma) G^T with orthonormal columns and
/// nonincreasing sigma. Column signs are canonical: the largest-magnitude
/// entry of each left singular vector is positive.
struct SvdFactors {
  DenseMatrix f;              // n x r
  std::vector<double> sigma;  // r, nonincreasing, nonnegative
  DenseMatrix g;              // m x r

  std::size_t rank_count() const { return sigma.size(); }
};

/// Top-k (or full) SVD. Small problems run one-sided Jacobi on the columns;
/// large problems with k far below min(n, m) run Ritz-accelerated subspace
/// iteration with a Jacobi finish. Deterministic for a fixed input.
/// Throws InputError on non-finite entries or k > min(n, m).
SvdFactors thin_svd(const DenseMatrix& x, std::size_t k = kFullRank);

/// Same as thin_svd(x, k) but seeds the iterative path with an initial
/// right-subspace guess (columns of `right_guess`, m x c with c >= 1) and a
/// caller-chosen convergence tolerance on the singular values. The guess
/// only affects iteration count, never the result beyond `tol`.
SvdFactors thin_svd_warm(const DenseMatrix& x, std::size_t k,
                         const DenseMatrix* right_guess, double tol = 1e-13);

}  // namespace rsvd

#endif

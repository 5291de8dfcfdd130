#ifndef RSVD_SOLVERS_HPP
#define RSVD_SOLVERS_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rsvd/dense_matrix.hpp"
#include "rsvd/svd.hpp"

namespace rsvd {

enum class SolverMethod { als, closed_form };

enum class SolutionStatus {
  converged,
  max_iter_reached,       // returned with full histories for diagnosis
  degenerate_all_zero,    // lambda at or above the top singular value
};

struct RsvdConfig {
  std::size_t k = 1;
  double lambda = 0.0;
  std::size_t max_iter = 500;
  double tol = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;  // throws InputError on bad fields
};

/// Factor pair with the per-iteration diagnostics of the alternating run.
struct RsvdSolution {
  DenseMatrix u;  // n x k
  DenseMatrix v;  // m x k
  double objective = 0.0;
  std::vector<double> objective_history;
  std::vector<double> dv_history;
  std::size_t iterations = 0;
  SolverMethod method = SolverMethod::als;
  SolutionStatus status = SolutionStatus::converged;
};

/// Shrunk spectrum omega_i = sqrt(max(sigma_i - lambda, 0)), i = 1..k.
struct ShrinkageSpectrum {
  std::vector<double> omega;      // nonincreasing
  std::size_t effective_rank = 0; // strictly positive entries
};

/// ||X - U V^T||_F^2 + lambda ||U||_F^2 + lambda ||V||_F^2
double objective_j1(const DenseMatrix& x, const DenseMatrix& u,
                    const DenseMatrix& v, double lambda);

/// Ridge update U = X V (V^T V + lambda I)^{-1} via an SPD solve.
DenseMatrix update_u(const DenseMatrix& x, const DenseMatrix& v,
                     double lambda);

/// Mirror update V = X^T U (U^T U + lambda I)^{-1}.
DenseMatrix update_v(const DenseMatrix& x, const DenseMatrix& u,
                     double lambda);

/// Observer invoked after each full alternating iteration.
using IterationCallback = std::function<void(
    std::size_t iter, const DenseMatrix& u, const DenseMatrix& v)>;

/// Alternating ridge iteration from a seeded uniform(-1,1) start for V.
/// Stops when the relative objective change or the V displacement falls
/// under config.tol; hitting max_iter flags the solution rather than
/// throwing.
RsvdSolution rsvd_als(const DenseMatrix& x, const RsvdConfig& config,
                      const IterationCallback& on_iteration = nullptr);

/// Same iteration warm-started from an explicit V (m x k).
RsvdSolution rsvd_als_from(const DenseMatrix& x, const RsvdConfig& config,
                           const DenseMatrix& v0,
                           const IterationCallback& on_iteration = nullptr);

ShrinkageSpectrum shrink_singular_values(const std::vector<double>& sigma,
                                         double lambda, std::size_t k);

/// Global minimizer built from a rank-k SVD: the balanced pair
/// U = F_k Omega, V = G_k Omega. Singular values of U V^T come out as
/// max(sigma_i - lambda, 0).
RsvdSolution rsvd_closed_form(const DenseMatrix& x, std::size_t k,
                              double lambda);

/// Closed-form assembly from factors already at hand (at least k columns).
RsvdSolution closed_form_from_svd(const SvdFactors& svd, const DenseMatrix& x,
                                  std::size_t k, double lambda);

/// ||V_now - V_prev||_F
double dv_residual(const DenseMatrix& v_now, const DenseMatrix& v_prev);

/// Squared distances of (U_t, V_t) from the spans of the SVD factors:
/// r1 = ||U_t - F A||_F^2 with A the least-squares coefficient, same for r2.
std::pair<double, double> subspace_residuals(const DenseMatrix& u_t,
                                             const DenseMatrix& v_t,
                                             const SvdFactors& svd);

}  // namespace rsvd

#endif

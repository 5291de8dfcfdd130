#ifndef RSVD_COMPLETION_HPP
#define RSVD_COMPLETION_HPP

#include <vector>

#include "rsvd/observed_matrix.hpp"
#include "rsvd/solvers.hpp"

namespace rsvd {

enum class InitFill { column_mean, row_mean, global_mean };

struct CompletionConfig {
  RsvdConfig inner;
  SolverMethod solver = SolverMethod::closed_form;
  std::size_t em_max_iter = 200;
  double em_tol = 1e-4;
  InitFill init_fill = InitFill::column_mean;

  void validate() const;
};

struct CompletionResult {
  DenseMatrix u;
  DenseMatrix v;
  DenseMatrix x_hat;  // observed entries match the data bit-exactly
  std::vector<double> dx_history;        // imputation change per EM step
  std::vector<double> dx_model_history;  // model change on observed entries
  std::vector<double> surrogate_history; // filled-matrix objective per step
  std::size_t em_iterations = 0;
  bool converged = false;
};

/// Dense matrix with observed values in place and missing cells set to the
/// chosen average. Columns (rows) without observations fall back to the
/// global observed mean.
DenseMatrix initialize_fill(const ObservedMatrix& observed, InitFill mode);

/// Impute-and-factorize loop: fill, factorize with the configured solver,
/// re-impute missing cells from U V^T, repeat until the imputation change
/// falls under em_tol. The inner solver is warm-started between steps.
CompletionResult em_complete(const ObservedMatrix& observed,
                             const CompletionConfig& config);

/// (1/sqrt(n_set)) * sqrt(sum over measure_set of (X_now - X_prev)^2).
/// n_set must equal the set size and be positive.
double dx_residual(const DenseMatrix& x_now, const DenseMatrix& x_prev,
                   const IndexSet& measure_set, std::size_t n_set);

/// The user's row of U V^T.
std::vector<double> predict_scores(const CompletionResult& result,
                                   std::size_t user);

}  // namespace rsvd

#endif

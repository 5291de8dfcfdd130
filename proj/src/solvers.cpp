#include "rsvd/solvers.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rsvd/errors.hpp"
#include "rsvd/rng.hpp"

namespace rsvd {

namespace {

// In-place Cholesky of a k x k row-major symmetric matrix; lower triangle
// receives L. Returns false when a pivot is not strictly positive.
bool cholesky(std::vector<double>& a, std::size_t k) {
  for (std::size_t j = 0; j < k; ++j) {
    double d = a[j * k + j];
    for (std::size_t p = 0; p < j; ++p) d -= a[j * k + p] * a[j * k + p];
    if (!(d > 0.0)) return false;
    const double l = std::sqrt(d);
    a[j * k + j] = l;
    for (std::size_t i = j + 1; i < k; ++i) {
      double s = a[i * k + j];
      for (std::size_t p = 0; p < j; ++p) s -= a[i * k + p] * a[j * k + p];
      a[i * k + j] = s / l;
    }
  }
  return true;
}

// Solves (L L^T) y = b in place for a single right-hand side.
void cholesky_solve(const std::vector<double>& l, std::size_t k, double* b) {
  for (std::size_t i = 0; i < k; ++i) {
    double s = b[i];
    for (std::size_t p = 0; p < i; ++p) s -= l[i * k + p] * b[p];
    b[i] = s / l[i * k + i];
  }
  for (std::size_t i = k; i-- > 0;) {
    double s = b[i];
    for (std::size_t p = i + 1; p < k; ++p) s -= l[p * k + i] * b[p];
    b[i] = s / l[i * k + i];
  }
}

// Gram matrix plus ridge: B^T B + lambda I, as a flat k x k buffer.
std::vector<double> ridged_gram(const DenseMatrix& b, double lambda) {
  const std::size_t k = b.cols();
  std::vector<double> m(k * k, 0.0);
  for (std::size_t r = 0; r < b.rows(); ++r) {
    const double* row = b.row_ptr(r);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) m[i * k + j] += row[i] * row[j];
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) m[i * k + j] = m[j * k + i];
    m[i * k + i] += lambda;
  }
  return m;
}

// Computes W (M + jitter)^{-1} row by row, where M is the ridged Gram of
// factor. Semidefinite systems at lambda = 0 get one jittered retry.
DenseMatrix ridge_solve(const DenseMatrix& w, const DenseMatrix& factor,
                        double lambda, const char* who) {
  const std::size_t k = factor.cols();
  std::vector<double> m = ridged_gram(factor, lambda);
  std::vector<double> l = m;
  if (!cholesky(l, k)) {
    if (lambda > 0.0) {
      throw NumericalError(std::string(who) +
                           ": ridge system not positive definite");
    }
    l = m;
    for (std::size_t i = 0; i < k; ++i) l[i * k + i] += 1e-12;
    if (!cholesky(l, k)) {
      throw NumericalError(std::string(who) +
                           ": singular system at lambda = 0");
    }
  }
  DenseMatrix out = w;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    cholesky_solve(l, k, out.row_ptr(r));
  }
  return out;
}

void check_factor_shapes(const DenseMatrix& x, const DenseMatrix& u,
                         const DenseMatrix& v, const char* who) {
  if (u.rows() != x.rows() || v.rows() != x.cols() || u.cols() != v.cols()) {
    throw InputError(std::string(who) + ": factor dimensions disagree with X");
  }
}

DenseMatrix random_init(std::size_t rows, std::size_t cols,
                        std::uint64_t seed) {
  DenseMatrix v(rows, cols);
  Rng rng(seed);
  for (double& e : v.data()) e = rng.uniform_pm1();
  return v;
}

RsvdSolution run_als(const DenseMatrix& x, const RsvdConfig& config,
                     DenseMatrix v, const IterationCallback& on_iteration) {
  RsvdSolution sol;
  sol.method = SolverMethod::als;
  sol.status = SolutionStatus::max_iter_reached;

  double j_prev = std::numeric_limits<double>::infinity();
  DenseMatrix u;
  for (std::size_t t = 1; t <= config.max_iter; ++t) {
    u = update_u(x, v, config.lambda);
    DenseMatrix v_next = update_v(x, u, config.lambda);
    const double dv = dv_residual(v_next, v);
    v = std::move(v_next);
    const double j = objective_j1(x, u, v, config.lambda);
    sol.objective_history.push_back(j);
    sol.dv_history.push_back(dv);
    sol.iterations = t;
    if (on_iteration) on_iteration(t, u, v);
    const bool objective_settled =
        std::isfinite(j_prev) &&
        std::abs(j - j_prev) <= config.tol * std::max(1.0, j_prev);
    if (objective_settled || dv <= config.tol) {
      sol.status = SolutionStatus::converged;
      j_prev = j;
      break;
    }
    j_prev = j;
  }
  sol.u = std::move(u);
  sol.v = std::move(v);
  sol.objective = sol.objective_history.back();
  return sol;
}

}  // namespace

void RsvdConfig::validate() const {
  if (k < 1) throw InputError("RsvdConfig: k must be at least 1");
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw InputError("RsvdConfig: lambda must be nonnegative");
  }
  if (max_iter < 1) throw InputError("RsvdConfig: max_iter must be at least 1");
  if (!(tol > 0.0)) throw InputError("RsvdConfig: tol must be positive");
}

double objective_j1(const DenseMatrix& x, const DenseMatrix& u,
                    const DenseMatrix& v, double lambda) {
  check_factor_shapes(x, u, v, "objective_j1");
  // Residual formed explicitly: the difference of large near-equal traces
  // loses all digits once the fit is tight.
  const DenseMatrix r = subtract(x, multiply_a_bt(u, v));
  return frobenius_sq(r) + lambda * (frobenius_sq(u) + frobenius_sq(v));
}

DenseMatrix update_u(const DenseMatrix& x, const DenseMatrix& v,
                     double lambda) {
  if (v.rows() != x.cols()) {
    throw InputError("update_u: V row count must equal X column count");
  }
  return ridge_solve(multiply(x, v), v, lambda, "update_u");
}

DenseMatrix update_v(const DenseMatrix& x, const DenseMatrix& u,
                     double lambda) {
  if (u.rows() != x.rows()) {
    throw InputError("update_v: U row count must equal X row count");
  }
  return ridge_solve(multiply_at_b(x, u), u, lambda, "update_v");
}

RsvdSolution rsvd_als(const DenseMatrix& x, const RsvdConfig& config,
                      const IterationCallback& on_iteration) {
  config.validate();
  if (config.k > std::min(x.rows(), x.cols())) {
    throw InputError("rsvd_als: k exceeds min(n, m)");
  }
  return run_als(x, config, random_init(x.cols(), config.k, config.seed),
                 on_iteration);
}

RsvdSolution rsvd_als_from(const DenseMatrix& x, const RsvdConfig& config,
                           const DenseMatrix& v0,
                           const IterationCallback& on_iteration) {
  config.validate();
  if (v0.rows() != x.cols() || v0.cols() != config.k) {
    throw InputError("rsvd_als_from: V0 must be m x k");
  }
  return run_als(x, config, v0, on_iteration);
}

ShrinkageSpectrum shrink_singular_values(const std::vector<double>& sigma,
                                         double lambda, std::size_t k) {
  if (sigma.size() < k) {
    throw InputError("shrink_singular_values: fewer than k singular values");
  }
  ShrinkageSpectrum s;
  s.omega.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double shifted = sigma[i] - lambda;
    const double w = shifted > 0.0 ? std::sqrt(shifted) : 0.0;
    s.omega.push_back(w);
    if (w > 0.0) ++s.effective_rank;
  }
  return s;
}

RsvdSolution closed_form_from_svd(const SvdFactors& svd, const DenseMatrix& x,
                                  std::size_t k, double lambda) {
  if (svd.rank_count() < k) {
    throw InputError("closed_form_from_svd: factors hold fewer than k columns");
  }
  const ShrinkageSpectrum spectrum =
      shrink_singular_values(svd.sigma, lambda, k);
  RsvdSolution sol;
  sol.method = SolverMethod::closed_form;
  sol.u = DenseMatrix(svd.f.rows(), k);
  sol.v = DenseMatrix(svd.g.rows(), k);
  for (std::size_t i = 0; i < sol.u.rows(); ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      sol.u(i, j) = svd.f(i, j) * spectrum.omega[j];
    }
  }
  for (std::size_t i = 0; i < sol.v.rows(); ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      sol.v(i, j) = svd.g(i, j) * spectrum.omega[j];
    }
  }
  sol.objective = objective_j1(x, sol.u, sol.v, lambda);
  sol.objective_history = {sol.objective};
  sol.iterations = 0;
  sol.status = spectrum.effective_rank == 0
                   ? SolutionStatus::degenerate_all_zero
                   : SolutionStatus::converged;
  return sol;
}

RsvdSolution rsvd_closed_form(const DenseMatrix& x, std::size_t k,
                              double lambda) {
  if (k < 1 || k > std::min(x.rows(), x.cols())) {
    throw InputError("rsvd_closed_form: k out of range");
  }
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw InputError("rsvd_closed_form: lambda must be nonnegative");
  }
  return closed_form_from_svd(thin_svd(x, k), x, k, lambda);
}

double dv_residual(const DenseMatrix& v_now, const DenseMatrix& v_prev) {
  if (v_now.rows() != v_prev.rows() || v_now.cols() != v_prev.cols()) {
    throw InputError("dv_residual: shapes disagree");
  }
  return std::sqrt(frobenius_sq(subtract(v_now, v_prev)));
}

std::pair<double, double> subspace_residuals(const DenseMatrix& u_t,
                                             const DenseMatrix& v_t,
                                             const SvdFactors& svd) {
  if (u_t.rows() != svd.f.rows() || v_t.rows() != svd.g.rows()) {
    throw InputError("subspace_residuals: row dimensions disagree");
  }
  if (svd.rank_count() < u_t.cols() || svd.rank_count() < v_t.cols()) {
    throw InputError("subspace_residuals: factors hold fewer columns than k");
  }
  auto residual = [](const DenseMatrix& basis, const DenseMatrix& y) {
    const std::size_t r = basis.cols();
    std::vector<double> gram = ridged_gram(basis, 0.0);
    if (!cholesky(gram, r)) {
      throw NumericalError("subspace_residuals: basis Gram not SPD");
    }
    DenseMatrix coeff = multiply_at_b(basis, y);  // r x k
    for (std::size_t j = 0; j < coeff.cols(); ++j) {
      std::vector<double> col(r);
      for (std::size_t i = 0; i < r; ++i) col[i] = coeff(i, j);
      cholesky_solve(gram, r, col.data());
      for (std::size_t i = 0; i < r; ++i) coeff(i, j) = col[i];
    }
    return frobenius_sq(subtract(y, multiply(basis, coeff)));
  };
  return {residual(svd.f, u_t), residual(svd.g, v_t)};
}

}  // namespace rsvd

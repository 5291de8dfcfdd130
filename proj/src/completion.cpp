#include "rsvd/completion.hpp"

#include <cmath>
#include <string>

#include "rsvd/errors.hpp"

namespace rsvd {

void CompletionConfig::validate() const {
  inner.validate();
  if (em_max_iter < 1) {
    throw InputError("CompletionConfig: em_max_iter must be at least 1");
  }
  if (!(em_tol > 0.0)) {
    throw InputError("CompletionConfig: em_tol must be positive");
  }
}

DenseMatrix initialize_fill(const ObservedMatrix& observed, InitFill mode) {
  const std::size_t n = observed.n_users();
  const std::size_t m = observed.m_items();

  double global_sum = 0.0;
  for (const Rating& e : observed.entries()) global_sum += e.value;
  const double global_mean = global_sum / static_cast<double>(observed.size());

  const std::size_t groups = mode == InitFill::column_mean ? m
                             : mode == InitFill::row_mean  ? n
                                                           : 1;
  std::vector<double> sum(groups, 0.0);
  std::vector<std::size_t> count(groups, 0);
  if (mode != InitFill::global_mean) {
    for (const Rating& e : observed.entries()) {
      const std::size_t g = mode == InitFill::column_mean ? e.item : e.user;
      sum[g] += e.value;
      ++count[g];
    }
  }
  auto fill_value = [&](std::size_t i, std::size_t j) {
    if (mode == InitFill::global_mean) return global_mean;
    const std::size_t g = mode == InitFill::column_mean ? j : i;
    return count[g] > 0 ? sum[g] / static_cast<double>(count[g]) : global_mean;
  };

  DenseMatrix x(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) x(i, j) = fill_value(i, j);
  }
  for (const Rating& e : observed.entries()) x(e.user, e.item) = e.value;
  return x;
}

CompletionResult em_complete(const ObservedMatrix& observed,
                             const CompletionConfig& config) {
  config.validate();
  const std::size_t n = observed.n_users();
  const std::size_t m = observed.m_items();
  if (config.inner.k > std::min(n, m)) {
    throw InputError("em_complete: inner rank exceeds min(n, m)");
  }

  std::vector<std::uint8_t> is_observed(n * m, 0);
  for (const Rating& e : observed.entries()) {
    is_observed[e.user * m + e.item] = 1;
  }
  const std::size_t n_missing = n * m - observed.size();
  const double n_omega = static_cast<double>(observed.size());

  CompletionResult result;
  DenseMatrix x = initialize_fill(observed, config.init_fill);
  std::vector<double> prev_model_on_omega(observed.size());
  {
    std::size_t idx = 0;
    for (const Rating& e : observed.entries()) {
      prev_model_on_omega[idx++] = e.value;
    }
  }

  DenseMatrix warm_v;  // previous right factor, seeds the next inner solve
  for (std::size_t t = 1; t <= config.em_max_iter; ++t) {
    RsvdSolution sol;
    if (config.solver == SolverMethod::closed_form) {
      const SvdFactors svd =
          thin_svd_warm(x, config.inner.k, warm_v.empty() ? nullptr : &warm_v,
                        1e-11);
      sol = closed_form_from_svd(svd, x, config.inner.k, config.inner.lambda);
    } else {
      sol = warm_v.empty()
                ? rsvd_als(x, config.inner)
                : rsvd_als_from(x, config.inner, warm_v);
    }
    const DenseMatrix model = multiply_a_bt(sol.u, sol.v);

    // Imputation change over the missing cells; observed cells are clamped
    // and cannot move.
    double dx = 0.0;
    if (n_missing > 0) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double* mr = model.row_ptr(i);
        double* xr = x.row_ptr(i);
        const std::uint8_t* obs = is_observed.data() + i * m;
        for (std::size_t j = 0; j < m; ++j) {
          if (obs[j]) continue;
          const double d = mr[j] - xr[j];
          acc += d * d;
          xr[j] = mr[j];
        }
      }
      dx = std::sqrt(acc / static_cast<double>(n_missing));
    }

    double model_change = 0.0;
    {
      std::size_t idx = 0;
      for (const Rating& e : observed.entries()) {
        const double now = model(e.user, e.item);
        const double d = now - prev_model_on_omega[idx];
        model_change += d * d;
        prev_model_on_omega[idx++] = now;
      }
      model_change = std::sqrt(model_change / n_omega);
    }

    result.dx_history.push_back(dx);
    result.dx_model_history.push_back(model_change);
    result.surrogate_history.push_back(sol.objective);
    result.em_iterations = t;
    warm_v = sol.v;
    result.u = std::move(sol.u);
    result.v = std::move(sol.v);
    if (dx <= config.em_tol) {
      result.converged = true;
      break;
    }
  }
  result.x_hat = std::move(x);
  return result;
}

double dx_residual(const DenseMatrix& x_now, const DenseMatrix& x_prev,
                   const IndexSet& measure_set, std::size_t n_set) {
  if (x_now.rows() != x_prev.rows() || x_now.cols() != x_prev.cols()) {
    throw InputError("dx_residual: shapes disagree");
  }
  if (measure_set.empty() || n_set != measure_set.size()) {
    throw InputError("dx_residual: n_set must equal the nonempty set size");
  }
  double acc = 0.0;
  for (const auto& [i, j] : measure_set) {
    if (i >= x_now.rows() || j >= x_now.cols()) {
      throw InputError("dx_residual: index out of range");
    }
    const double d = x_now(i, j) - x_prev(i, j);
    acc += d * d;
  }
  return std::sqrt(acc) / std::sqrt(static_cast<double>(n_set));
}

std::vector<double> predict_scores(const CompletionResult& result,
                                   std::size_t user) {
  if (user >= result.u.rows()) {
    throw InputError("predict_scores: user out of range");
  }
  const std::size_t m = result.v.rows();
  const std::size_t k = result.v.cols();
  std::vector<double> scores(m, 0.0);
  const double* ur = result.u.row_ptr(user);
  for (std::size_t j = 0; j < m; ++j) {
    const double* vr = result.v.row_ptr(j);
    double s = 0.0;
    for (std::size_t c = 0; c < k; ++c) s += ur[c] * vr[c];
    scores[j] = s;
  }
  return scores;
}

}  // namespace rsvd

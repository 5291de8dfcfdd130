#ifndef RSVD_CLI_HPP
#define RSVD_CLI_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsvd/completion.hpp"
#include "rsvd/datasets.hpp"
#include "rsvd/evaluation.hpp"

namespace rsvd::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode {
  exit_ok = 0,
  exit_usage = 1,
  exit_data = 2,
  exit_numeric = 3,
};

/// Bad invocation that flag parsing alone cannot catch (empty sweep lists).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DataFormat { movielens, triples, grid };

struct RunConfig {
  std::string input;
  DataFormat format = DataFormat::movielens;
  std::string out_dir = "out";

  // model
  std::size_t k = 3;
  double lambda = 0.0;
  SolverMethod solver = SolverMethod::closed_form;
  double tol = 1e-8;
  std::size_t max_iter = 500;

  // mask-out protocol
  std::size_t mask_t = 100;
  std::size_t n_mask = 90;
  std::uint64_t seed = 1;
  std::size_t runs = 1;

  // EM loop
  std::size_t em_max_iter = 200;
  double em_tol = 1e-4;

  // data preparation
  std::optional<std::size_t> min_ratings;
  std::optional<std::size_t> max_ratings;
  IndexBase index_base = IndexBase::zero;
  std::optional<double> grid_sentinel = 99.0;
};

/// Factorizes a dense matrix CSV. Writes U.csv and V.csv plus, for the
/// alternating solver, convergence.csv (iter,J1,dV); for the closed form,
/// spectrum.csv (sigma,omega). Throws on any module error.
void run_factorize(const RunConfig& config);

/// Full pipeline: load, optional user filtering, binarize, `runs`
/// independent mask-outs (seeds seed+0 .. seed+runs-1), EM completion,
/// Top-N evaluation, averaging. Writes pr_curve.csv, f1.txt,
/// em_convergence.csv and, with the alternating solver,
/// subspace_residuals.csv. Returns the averaged report.
EvalReport run_evaluate(const RunConfig& config);

/// Cross product of run_evaluate cells under out_dir, one subdirectory per
/// (k, lambda). Writes f1_table.csv; failed cells are recorded and the
/// worst exit code is returned (exit_ok when every cell passed).
int run_sweep(const RunConfig& config, const std::vector<std::size_t>& k_list,
              const std::vector<double>& lambda_list);

/// Maps a caught exception onto the documented exit codes.
int exit_code_for(const std::exception& e);

/// Loads + prepares the configured dataset down to the binarized matrix.
ObservedMatrix load_binary_dataset(const RunConfig& config);

}  // namespace rsvd::cli

#endif

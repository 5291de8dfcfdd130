#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsvd/cli.hpp"

namespace {

using rsvd::cli::RunConfig;

void add_model_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--k", config.k, "Target rank")->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", config.lambda, "Regularization weight")
      ->check(CLI::NonNegativeNumber);
  const std::map<std::string, rsvd::SolverMethod> solvers{
      {"closed", rsvd::SolverMethod::closed_form},
      {"als", rsvd::SolverMethod::als}};
  cmd->add_option("--solver", config.solver, "Factorization solver")
      ->transform(CLI::CheckedTransformer(solvers, CLI::ignore_case));
  cmd->add_option("--tol", config.tol, "Solver convergence threshold")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", config.max_iter,
                  "Alternating-solver iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", config.seed, "Base RNG seed");
  cmd->add_option("--out", config.out_dir, "Output directory");
}

void add_dataset_options(CLI::App* cmd, RunConfig& config) {
  const std::map<std::string, rsvd::cli::DataFormat> formats{
      {"movielens", rsvd::cli::DataFormat::movielens},
      {"triples", rsvd::cli::DataFormat::triples},
      {"grid", rsvd::cli::DataFormat::grid}};
  cmd->add_option("--format", config.format, "Input dataset format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  const std::map<std::string, rsvd::IndexBase> bases{
      {"0", rsvd::IndexBase::zero}, {"1", rsvd::IndexBase::one}};
  cmd->add_option("--index-base", config.index_base,
                  "Index base of triples CSV input")
      ->transform(CLI::CheckedTransformer(bases));
  cmd->add_option("--sentinel", config.grid_sentinel,
                  "Missing-cell marker in grid CSV input");
  cmd->add_option("--min-ratings", config.min_ratings,
                  "Keep users with at least this many ratings");
  cmd->add_option("--max-ratings", config.max_ratings,
                  "Keep users with at most this many ratings");
  cmd->add_option("--mask-t", config.mask_t,
                  "Rating-count threshold selecting training users");
  cmd->add_option("--n-mask", config.n_mask, "Hidden ratings per training user")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--runs", config.runs, "Independent mask-out repetitions")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--em-max-iter", config.em_max_iter,
                  "Completion loop iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--em-tol", config.em_tol,
                  "Completion loop convergence threshold")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized SVD: factorization, matrix completion and"
               " Top-N recommendation evaluation"};
  app.require_subcommand(1);
  // key=value file with one [factorize]/[evaluate]/[sweep] section per
  // subcommand; command-line flags take precedence.
  app.set_config("--config", "", "Configuration file (key=value sections)");

  RunConfig config;
  std::vector<std::size_t> k_list;
  std::vector<double> lambda_list;

  CLI::App* factorize =
      app.add_subcommand("factorize", "Factorize a dense matrix CSV");
  factorize->add_option("--input", config.input, "Dense matrix CSV")
      ->required();
  add_model_options(factorize, config);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Mask-out, complete and score a rating dataset");
  evaluate->add_option("--input", config.input, "Rating dataset file")
      ->required();
  add_model_options(evaluate, config);
  add_dataset_options(evaluate, config);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Grid of evaluate runs over rank and regularization");
  sweep->add_option("--input", config.input, "Rating dataset file")
      ->required();
  add_model_options(sweep, config);
  add_dataset_options(sweep, config);
  sweep->add_option("--k-list", k_list, "Ranks to sweep")->delimiter(',');
  sweep->add_option("--lambda-list", lambda_list, "Weights to sweep")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rsvd::cli::exit_ok : rsvd::cli::exit_usage;
  }

  try {
    if (factorize->parsed()) {
      rsvd::cli::run_factorize(config);
    } else if (evaluate->parsed()) {
      rsvd::cli::run_evaluate(config);
    } else if (sweep->parsed()) {
      return rsvd::cli::run_sweep(config, k_list, lambda_list);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rsvd::cli::exit_code_for(e);
  }
  return rsvd::cli::exit_ok;
}

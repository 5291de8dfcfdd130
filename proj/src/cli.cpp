#include "rsvd/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rsvd/errors.hpp"
#include "rsvd/matrix_csv.hpp"
#include "rsvd/qr.hpp"

namespace rsvd::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError(path.string() + ": cannot open for writing");
  }
  return out;
}

std::string solver_name(SolverMethod s) {
  return s == SolverMethod::closed_form ? "closed" : "als";
}

std::string provenance_line(const RunConfig& c) {
  std::ostringstream os;
  os << "input=" << c.input << " k=" << c.k << " lambda=" << fmt_short(c.lambda)
     << " solver=" << solver_name(c.solver) << " seed=" << c.seed;
  return os.str();
}

CompletionConfig completion_config(const RunConfig& c) {
  CompletionConfig cfg;
  cfg.inner.k = c.k;
  cfg.inner.lambda = c.lambda;
  cfg.inner.max_iter = c.max_iter;
  cfg.inner.tol = c.tol;
  cfg.inner.seed = c.seed;
  cfg.solver = c.solver;
  cfg.em_max_iter = c.em_max_iter;
  cfg.em_tol = c.em_tol;
  return cfg;
}

void write_em_convergence(const CompletionResult& result,
                          const fs::path& path, const std::string& comment) {
  std::ofstream out = open_out(path);
  out << "# " << comment << "\n";
  out << "iter,dX,dX_model\n";
  for (std::size_t t = 0; t < result.dx_history.size(); ++t) {
    out << (t + 1) << ',' << fmt(result.dx_history[t]) << ','
        << fmt(result.dx_model_history[t]) << '\n';
  }
}

// Alternating-solver diagnostic: distances of each iterate from the spans
// of the data matrix's leading singular vectors.
void write_subspace_residuals(const DenseMatrix& x, const RunConfig& c,
                              const fs::path& path) {
  const SvdFactors svd = thin_svd(x, c.k);
  RsvdConfig inner;
  inner.k = c.k;
  inner.lambda = c.lambda;
  inner.max_iter = c.max_iter;
  inner.tol = c.tol;
  inner.seed = c.seed;
  std::ofstream out = open_out(path);
  out << "# " << provenance_line(c) << "\n";
  out << "iter,r1,r2\n";
  rsvd_als(x, inner,
           [&](std::size_t iter, const DenseMatrix& u, const DenseMatrix& v) {
             const auto [r1, r2] = subspace_residuals(u, v, svd);
             out << iter << ',' << fmt(r1) << ',' << fmt(r2) << '\n';
           });
}

}  // namespace

ObservedMatrix load_binary_dataset(const RunConfig& config) {
  RatingTriples triples;
  switch (config.format) {
    case DataFormat::movielens:
      triples = load_movielens_100k(config.input);
      break;
    case DataFormat::triples:
      triples = load_csv_triples(config.input, CsvLayout::triples,
                                 std::nullopt, config.index_base);
      break;
    case DataFormat::grid:
      triples = load_csv_triples(config.input, CsvLayout::grid,
                                 config.grid_sentinel);
      break;
  }
  if (config.min_ratings || config.max_ratings) {
    triples = filter_users_by_rating_count(triples, config.min_ratings,
                                           config.max_ratings);
  }
  return binarize(triples);
}

void run_factorize(const RunConfig& config) {
  const DenseMatrix x = read_matrix_csv(config.input);
  fs::create_directories(config.out_dir);
  const fs::path dir(config.out_dir);
  const std::string comment = provenance_line(config);

  if (config.solver == SolverMethod::closed_form) {
    const SvdFactors svd = thin_svd(x, config.k);
    const ShrinkageSpectrum spectrum =
        shrink_singular_values(svd.sigma, config.lambda, config.k);
    const RsvdSolution sol =
        closed_form_from_svd(svd, x, config.k, config.lambda);
    write_matrix_csv(sol.u, (dir / "U.csv").string(), comment);
    write_matrix_csv(sol.v, (dir / "V.csv").string(), comment);
    std::ofstream out = open_out(dir / "spectrum.csv");
    out << "# " << comment << "\n";
    out << "sigma,omega\n";
    for (std::size_t i = 0; i < config.k; ++i) {
      out << fmt(svd.sigma[i]) << ',' << fmt(spectrum.omega[i]) << '\n';
    }
  } else {
    RsvdConfig inner;
    inner.k = config.k;
    inner.lambda = config.lambda;
    inner.max_iter = config.max_iter;
    inner.tol = config.tol;
    inner.seed = config.seed;
    const RsvdSolution sol = rsvd_als(x, inner);
    write_matrix_csv(sol.u, (dir / "U.csv").string(), comment);
    write_matrix_csv(sol.v, (dir / "V.csv").string(), comment);
    std::ofstream out = open_out(dir / "convergence.csv");
    out << "# " << comment << "\n";
    out << "iter,J1,dV\n";
    for (std::size_t t = 0; t < sol.objective_history.size(); ++t) {
      out << (t + 1) << ',' << fmt(sol.objective_history[t]) << ','
          << fmt(sol.dv_history[t]) << '\n';
    }
    if (sol.status == SolutionStatus::max_iter_reached) {
      std::cerr << "warning: alternating solver hit max_iter without"
                   " meeting tol\n";
    }
  }
}

EvalReport run_evaluate(const RunConfig& config) {
  if (config.runs < 1) {
    throw UsageError("evaluate: runs must be at least 1");
  }
  const ObservedMatrix binary = load_binary_dataset(config);
  fs::create_directories(config.out_dir);
  const fs::path dir(config.out_dir);
  const CompletionConfig cfg = completion_config(config);

  std::vector<EvalReport> reports;
  std::optional<CompletionResult> first_run;
  for (std::size_t r = 0; r < config.runs; ++r) {
    const MaskedDataset masked =
        mask_out(binary, config.mask_t, config.n_mask, config.seed + r);
    CompletionResult result = em_complete(masked.train, cfg);
    reports.push_back(evaluate(result, masked));
    if (r == 0) first_run = std::move(result);
  }
  const EvalReport averaged = average_runs(reports);

  const std::string comment = provenance_line(config) +
                              " mask_t=" + std::to_string(config.mask_t) +
                              " n_mask=" + std::to_string(config.n_mask) +
                              " runs=" + std::to_string(config.runs);
  {
    std::ofstream out = open_out(dir / "pr_curve.csv");
    write_pr_curve_csv(averaged, out, comment);
  }
  {
    std::ofstream out = open_out(dir / "f1.txt");
    write_f1_summary(averaged, out);
  }
  write_em_convergence(*first_run, dir / "em_convergence.csv", comment);
  if (config.solver == SolverMethod::als) {
    const MaskedDataset masked =
        mask_out(binary, config.mask_t, config.n_mask, config.seed);
    const DenseMatrix x0 = initialize_fill(masked.train, cfg.init_fill);
    write_subspace_residuals(x0, config, dir / "subspace_residuals.csv");
  }
  return averaged;
}

int run_sweep(const RunConfig& config, const std::vector<std::size_t>& k_list,
              const std::vector<double>& lambda_list) {
  if (k_list.empty() || lambda_list.empty()) {
    throw UsageError("sweep: k list and lambda list must be nonempty");
  }
  fs::create_directories(config.out_dir);
  const fs::path dir(config.out_dir);

  int worst = exit_ok;
  std::ofstream table = open_out(dir / "f1_table.csv");
  table << "k";
  for (const double lambda : lambda_list) {
    table << ",lambda_" << fmt_short(lambda);
  }
  table << '\n';
  for (const std::size_t k : k_list) {
    table << k;
    for (const double lambda : lambda_list) {
      RunConfig cell = config;
      cell.k = k;
      cell.lambda = lambda;
      cell.out_dir = (dir / ("k" + std::to_string(k) + "_lambda_" +
                             fmt_short(lambda)))
                         .string();
      try {
        const EvalReport report = run_evaluate(cell);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", report.f1_at_nmask);
        table << ',' << buf;
      } catch (const std::exception& e) {
        std::cerr << "sweep cell k=" << k << " lambda=" << fmt_short(lambda)
                  << " failed: " << e.what() << '\n';
        table << ",failed";
        worst = std::max(worst, exit_code_for(e));
      }
    }
    table << '\n';
  }
  return worst;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) != nullptr) return exit_usage;
  if (dynamic_cast<const InputError*>(&e) != nullptr) return exit_data;
  if (dynamic_cast<const ParseError*>(&e) != nullptr) return exit_data;
  return exit_numeric;
}

}  // namespace rsvd::cli

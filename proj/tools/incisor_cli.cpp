// Command-line front end: one subcommand per experiment, all numerics
// handled by the library.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "incisor/analysis.hpp"
#include "incisor/eigensolve.hpp"
#include "incisor/io_export.hpp"
#include "incisor/spectral2d.hpp"
#include "incisor/spectral3d.hpp"
#include "incisor/verify.hpp"

namespace {

using namespace incisor;

constexpr double kPi2 = M_PI * M_PI;

struct CommonOptions {
  std::string out_dir;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--out", opts.out_dir, "Directory for output artifacts");
  cmd->add_option("--format", opts.format, "Machine-readable stdout format")
      ->check(CLI::IsMember({"csv", "json"}));
}

void add_numerics2d(CLI::App* cmd, Numerics2D& num) {
  cmd->add_option("--R", num.R, "Truncation abscissa of the strip");
  cmd->add_option("--ny", num.ny, "Cells across the layer thickness");
  cmd->add_option("--nx", num.nx, "Cells along the strip (0: automatic)");
  cmd->add_option("--order", num.order, "FE order (1 or 2)");
  cmd->add_option("--grading", num.grading, "Cell-size ratio toward the slanted edge");
  cmd->add_option("--grading-t", num.grading_t, "Cell-size ratio toward xi2 = 1");
  cmd->add_option("--tol", num.tol, "Eigensolver residual tolerance");
  cmd->add_option_function<std::string>(
         "--bc", [&num](const std::string& v) {
           num.artificial_bc = v == "neumann" ? ArtificialBc::Neumann : ArtificialBc::Dirichlet;
         },
         "Artificial boundary condition (dirichlet|neumann)")
      ->check(CLI::IsMember({"dirichlet", "neumann"}));
}

void add_numerics3d(CLI::App* cmd, Numerics3D& num) {
  cmd->add_option("--R1", num.R1, "Truncation abscissa along x1");
  cmd->add_option("--R2", num.R2, "Truncation abscissa along x2");
  cmd->add_option("--n3", num.n3, "Cells across the layer thickness");
  cmd->add_option("--n1", num.n1, "Cells along x1 (0: automatic)");
  cmd->add_option("--n2", num.n2, "Cells along x2 (0: automatic)");
  cmd->add_option("--order", num.order, "FE order (1 or 2)");
  cmd->add_option("--grading", num.grading, "Cell-size ratio toward the sharp edges");
  cmd->add_option("--k", num.k, "Number of eigenpairs to compute");
  cmd->add_option("--tol", num.tol, "Eigensolver residual tolerance");
  cmd->add_option("--margin", num.margin, "Detection margin (<= 0: automatic)");
  cmd->add_option_function<std::string>(
         "--bc", [&num](const std::string& v) {
           num.artificial_bc = v == "dirichlet" ? ArtificialBc::Dirichlet : ArtificialBc::Neumann;
         },
         "Artificial boundary condition (dirichlet|neumann)")
      ->check(CLI::IsMember({"dirichlet", "neumann"}));
}

void ensure_out_dir(const std::string& dir) {
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

void export_eigenfunction(const Eigenfunction2D& v, const std::string& path) {
  std::vector<double> field(v.grid.mesh->n_vertices());
  for (std::size_t i = 0; i < field.size(); ++i) {
    field[i] = v.coeffs[v.space->vertex_dof[i]];
  }
  write_vtk(*v.grid.mesh, field, path);
}

void print_report(const SpectrumReport& rep, const std::string& format) {
  if (format == "json") {
    std::cout << spectrum_report_json(rep) << "\n";
    return;
  }
  std::cout << "kappa = (" << rep.kappa.kappa1 << ", " << rep.kappa.kappa2 << ")\n";
  std::cout << "lambda_dagger/pi^2 = " << rep.lambda_dagger / kPi2
            << "  margin/pi^2 = " << rep.margin / kPi2 << "\n";
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    std::cout << "lambda_" << i + 1 << "/pi^2 = " << rep.eigenvalues[i] / kPi2
              << (rep.below[i] ? "  [below threshold]" : "") << "\n";
  }
  if (const auto l1 = rep.lambda1()) {
    std::cout << "lambda1/pi^2 = " << *l1 / kPi2 << "\n";
  } else {
    std::cout << "no eigenvalue below lambda_dagger - margin\n";
  }
  if (!rep.warning.empty()) std::cout << "warning: " << rep.warning << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Spectral laboratory for trapped modes in chamfered layers"};
  app.require_subcommand(1);

  // mu1
  auto* cmd_mu1 = app.add_subcommand("mu1", "Smallest eigenvalue of the pointed-strip problem");
  double alpha = M_PI / 4.0;
  Numerics2D num2d_mu1;
  CommonOptions opt_mu1;
  cmd_mu1->add_option("--alpha", alpha, "Slant angle in [0, pi/2)")->required();
  add_numerics2d(cmd_mu1, num2d_mu1);
  add_common(cmd_mu1, opt_mu1);
  cmd_mu1->callback([&]() {
    const ThresholdSample s = mu1(alpha, num2d_mu1);
    std::cout << "mu1 = " << s.mu1 << "\nmu1/pi^2 = " << s.mu1 / kPi2
              << "\nresidual = " << s.residual << "\n";
    if (!opt_mu1.out_dir.empty()) {
      ensure_out_dir(opt_mu1.out_dir);
      CurveTable table;
      table.columns = {"alpha", "mu1", "mu1_over_pi2", "R", "nx", "ny", "order", "residual"};
      table.add_row({s.alpha, s.mu1, s.mu1 / kPi2, s.R, double(s.nx), double(s.ny),
                     double(s.order), s.residual});
      write_csv(table, opt_mu1.out_dir + "/mu1.csv");
      export_eigenfunction(*s.eigenfunction, opt_mu1.out_dir + "/v.vtk");
    }
  });

  // threshold-curve
  auto* cmd_curve = app.add_subcommand("threshold-curve", "mu1 over a grid of slant angles");
  double alpha_min = 0.1, alpha_max = 1.4;
  int curve_samples = 14;
  Numerics2D num2d_curve;
  CommonOptions opt_curve;
  cmd_curve->add_option("--alpha-min", alpha_min, "First angle");
  cmd_curve->add_option("--alpha-max", alpha_max, "Last angle");
  cmd_curve->add_option("--samples", curve_samples, "Number of samples");
  add_numerics2d(cmd_curve, num2d_curve);
  add_common(cmd_curve, opt_curve);
  cmd_curve->callback([&]() {
    if (curve_samples < 1) throw ValidationError("--samples must be >= 1");
    std::vector<double> alphas;
    for (int i = 0; i < curve_samples; ++i) {
      alphas.push_back(curve_samples == 1
                           ? alpha_min
                           : alpha_min + (alpha_max - alpha_min) * i / (curve_samples - 1.0));
    }
    const auto samples = threshold_curve(alphas, num2d_curve);
    CurveTable table;
    table.columns = {"alpha", "mu1", "mu1_over_pi2", "R", "nx", "ny", "order", "residual"};
    for (const auto& s : samples) {
      table.add_row({s.alpha, s.mu1, s.mu1 / kPi2, s.R, double(s.nx), double(s.ny),
                     double(s.order), s.residual});
      std::cout << "alpha = " << s.alpha << "  mu1/pi^2 = " << s.mu1 / kPi2 << "\n";
    }
    const std::string dir = opt_curve.out_dir.empty() ? "." : opt_curve.out_dir;
    ensure_out_dir(dir);
    write_csv(table, dir + "/threshold_curve.csv");
  });

  // lambda-dagger
  auto* cmd_dagger = app.add_subcommand("lambda-dagger", "Essential spectrum threshold");
  double ld_k1 = 1.0, ld_k2 = 0.0;
  Numerics2D num2d_dagger;
  cmd_dagger->add_option("--kappa1", ld_k1, "Chamfer slope kappa1")->required();
  cmd_dagger->add_option("--kappa2", ld_k2, "Chamfer slope kappa2");
  add_numerics2d(cmd_dagger, num2d_dagger);
  cmd_dagger->callback([&]() {
    const double value = lambda_dagger(KappaPair(ld_k1, ld_k2), num2d_dagger);
    std::cout << "lambda_dagger = " << value << "\nlambda_dagger/pi^2 = " << value / kPi2
              << "\n";
  });

  // solve3d
  auto* cmd_solve = app.add_subcommand("solve3d", "Discrete spectrum of the truncated incisor");
  double s_k1 = 1.0, s_k2 = -1.0;
  bool s_dump_matrices = false;
  Numerics3D num3d_solve;
  CommonOptions opt_solve;
  cmd_solve->add_option("--kappa1", s_k1, "Chamfer slope kappa1")->required();
  cmd_solve->add_option("--kappa2", s_k2, "Chamfer slope kappa2")->required();
  cmd_solve->add_flag("--dump-matrices", s_dump_matrices,
                      "Write K/M in Matrix Market format (needs --out)");
  add_numerics3d(cmd_solve, num3d_solve);
  add_common(cmd_solve, opt_solve);
  cmd_solve->callback([&]() {
    const IncisorSolution sol = solve_incisor_full(KappaPair(s_k1, s_k2), num3d_solve);
    print_report(sol.report, opt_solve.format);
    if (!opt_solve.out_dir.empty()) {
      ensure_out_dir(opt_solve.out_dir);
      std::ofstream json(opt_solve.out_dir + "/report.json", std::ios::binary);
      json << spectrum_report_json(sol.report) << "\n";
      std::vector<double> field(sol.mesh->n_vertices());
      const Eigen::VectorXd full =
          expand_free_vector(*sol.space, sol.pair, sol.eigen.vectors.col(0));
      for (std::size_t i = 0; i < field.size(); ++i) field[i] = full[sol.space->vertex_dof[i]];
      write_vtk(*sol.mesh, field, opt_solve.out_dir + "/u.vtk");
      write_vtk_boundary(*sol.mesh, opt_solve.out_dir + "/boundary.vtk");
      if (s_dump_matrices) {
        write_matrix_market(sol.pair.K, opt_solve.out_dir + "/K.mtx");
        write_matrix_market(sol.pair.M, opt_solve.out_dir + "/M.mtx");
      }
    }
  });

  // sweep-kappa2
  auto* cmd_sweep = app.add_subcommand("sweep-kappa2", "lambda1 over a kappa2 grid");
  double sw_k1 = 1.0, sw_lo = -1.0, sw_hi = 1.0;
  int sw_samples = 9, sw_jobs = 1;
  Numerics3D num3d_sweep;
  CommonOptions opt_sweep;
  cmd_sweep->add_option("--kappa1", sw_k1, "Chamfer slope kappa1")->required();
  cmd_sweep->add_option("--kappa2-min", sw_lo, "First kappa2");
  cmd_sweep->add_option("--kappa2-max", sw_hi, "Last kappa2");
  cmd_sweep->add_option("--samples", sw_samples, "Number of grid points");
  cmd_sweep->add_option("--jobs", sw_jobs, "Concurrent solves");
  add_numerics3d(cmd_sweep, num3d_sweep);
  add_common(cmd_sweep, opt_sweep);
  cmd_sweep->callback([&]() {
    if (sw_samples < 1) throw ValidationError("--samples must be >= 1");
    std::vector<double> grid;
    for (int i = 0; i < sw_samples; ++i) {
      grid.push_back(sw_samples == 1 ? sw_lo
                                     : sw_lo + (sw_hi - sw_lo) * i / (sw_samples - 1.0));
    }
    const SweepResult sweep = sweep_kappa2(sw_k1, grid, num3d_sweep, sw_jobs);
    for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
      const auto& rep = sweep.reports[i];
      std::cout << "kappa2 = " << grid[i] << "  ";
      if (const auto l1 = rep.lambda1()) {
        std::cout << "lambda1/pi^2 = " << *l1 / kPi2 << "\n";
      } else {
        std::cout << "no trapped mode detected\n";
      }
    }
    const std::string dir = opt_sweep.out_dir.empty() ? "." : opt_sweep.out_dir;
    ensure_out_dir(dir);
    write_sweep_csv(sweep, dir + "/sweep_kappa2.csv");
  });

  // find-h
  auto* cmd_findh = app.add_subcommand("find-h", "Transition point h(kappa1) by bisection");
  double fh_k1 = 1.0, fh_lo = 0.0, fh_tol = 0.05;
  std::optional<double> fh_hi;
  Numerics3D num3d_findh;
  cmd_findh->add_option("--kappa1", fh_k1, "Chamfer slope kappa1")->required();
  cmd_findh->add_option("--lo", fh_lo, "Bracket low end (discrete spectrum absent)");
  cmd_findh->add_option("--hi", fh_hi, "Bracket high end (default kappa1)");
  cmd_findh->add_option("--tol-kappa2", fh_tol, "Bracket width target");
  add_numerics3d(cmd_findh, num3d_findh);
  cmd_findh->callback([&]() {
    const FindHResult result =
        find_h(fh_k1, {fh_lo, fh_hi.value_or(fh_k1)}, fh_tol, num3d_findh);
    std::cout << "h = " << result.h << "\nbracket = [" << result.bracket_lo << ", "
              << result.bracket_hi << "]\nsolves = " << result.solves << "\n"
              << "note: discretization-dependent estimate (n3 = " << result.numerics.n3
              << ", order = " << result.numerics.order << ")\n";
  });

  // count
  auto* cmd_count = app.add_subcommand("count", "Number of eigenvalues below the threshold");
  double c_k1 = 1.0, c_k2 = -1.0;
  Numerics3D num3d_count;
  cmd_count->add_option("--kappa1", c_k1, "Chamfer slope kappa1")->required();
  cmd_count->add_option("--kappa2", c_k2, "Chamfer slope kappa2")->required();
  add_numerics3d(cmd_count, num3d_count);
  cmd_count->callback([&]() {
    std::cout << "count = " << count_discrete(KappaPair(c_k1, c_k2), num3d_count) << "\n";
  });

  // dirichlet-check
  auto* cmd_dir = app.add_subcommand("dirichlet-check",
                                     "All-Dirichlet absence check over truncation radii");
  double d_k1 = 1.0, d_k2 = -1.0;
  std::vector<double> d_Rs = {4.0, 6.0, 8.0};
  Numerics3D num3d_dir;
  cmd_dir->add_option("--kappa1", d_k1, "Chamfer slope kappa1")->required();
  cmd_dir->add_option("--kappa2", d_k2, "Chamfer slope kappa2")->required();
  cmd_dir->add_option("--Rs", d_Rs, "Truncation radii");
  add_numerics3d(cmd_dir, num3d_dir);
  cmd_dir->callback([&]() {
    const DirichletAbsenceReport rep =
        dirichlet_absence_check(KappaPair(d_k1, d_k2), d_Rs, num3d_dir);
    for (std::size_t i = 0; i < rep.R_values.size(); ++i) {
      std::cout << "R = " << rep.R_values[i] << "  lambda1/pi^2 = " << rep.lambda1[i] / kPi2
                << "\n";
    }
    std::cout << "all >= pi^2 (1 - 0.001): " << (rep.all_above_pi2 ? "yes" : "NO")
              << "\nnonincreasing in R: " << (rep.nonincreasing ? "yes" : "NO") << "\n";
    if (!rep.all_above_pi2) {
      throw SolverError("all-Dirichlet eigenvalue fell below pi^2: solver or mesh bug");
    }
  });

  // certify-negative
  auto* cmd_neg = app.add_subcommand("certify-negative",
                                     "Trial-function certificate for kappa2 < 0");
  double n_k1 = 1.0, n_k2 = -1.0;
  std::optional<double> n_eps;
  Numerics2D num2d_neg;
  cmd_neg->add_option("--kappa1", n_k1, "Chamfer slope kappa1")->required();
  cmd_neg->add_option("--kappa2", n_k2, "Chamfer slope kappa2 (< 0)")->required();
  cmd_neg->add_option("--epsilon", n_eps, "Decay parameter (default: min(1e-3, -I_Gamma1))");
  add_numerics2d(cmd_neg, num2d_neg);
  cmd_neg->callback([&]() {
    const KappaPair kappa(n_k1, n_k2);
    const ThresholdSample s = lambda_dagger_sample(kappa, num2d_neg);
    const double ig = boundary_integral_IGamma1(kappa, *s.eigenfunction);
    const double eps = n_eps.value_or(std::min(1e-3, -ig));
    const TrialReport rep = trial_quotient_negative_kappa2(kappa, eps, *s.eigenfunction);
    std::cout << "epsilon = " << rep.epsilon << "\nplus_part = " << rep.plus_part
              << " (epsilon/2 = " << rep.epsilon / 2.0 << ")\nI_Gamma1 = " << rep.I_Gamma1
              << "\nquotient_gap = " << rep.quotient_gap << "\nepsilon_star = "
              << rep.epsilon_star << "\ncertified negative: " << (rep.negative ? "yes" : "NO")
              << "\n";
  });

  // certify-symmetric
  auto* cmd_sym = app.add_subcommand("certify-symmetric",
                                     "Trial-function certificate for kappa1 = kappa2");
  double sy_k1 = 1.0, sy_eps = 1e-3;
  Numerics2D num2d_sym;
  cmd_sym->add_option("--kappa1", sy_k1, "Chamfer slope kappa1 = kappa2 (> 0)")->required();
  cmd_sym->add_option("--epsilon", sy_eps, "Decay parameter");
  add_numerics2d(cmd_sym, num2d_sym);
  cmd_sym->callback([&]() {
    const KappaPair kappa(sy_k1, sy_k1);
    const ThresholdSample s = lambda_dagger_sample(kappa, num2d_sym);
    const TrialReport rep = trial_quotient_symmetric(sy_k1, sy_eps, *s.eigenfunction);
    std::cout << "epsilon = " << rep.epsilon << "\nvolume_term = " << rep.volume_term
              << "\nedge_term = " << rep.edge_term << "\nquotient_gap = " << rep.quotient_gap
              << "\nepsilon_star = " << rep.epsilon_star
              << "\ncertified negative: " << (rep.negative ? "yes" : "NO") << "\n";
  });

  // tau1-prime
  auto* cmd_tau = app.add_subcommand("tau1-prime", "Perturbation coefficient tau1'");
  double t_alpha = M_PI / 4.0;
  Numerics2D num2d_tau;
  cmd_tau->add_option("--alpha1", t_alpha, "Chamfer angle alpha1 in (0, pi/2)")->required();
  add_numerics2d(cmd_tau, num2d_tau);
  cmd_tau->callback([&]() {
    const ThresholdSample s = mu1(t_alpha, num2d_tau);
    std::cout << "tau1_prime = " << tau1_prime(t_alpha, *s.eigenfunction) << "\n";
  });

  // repro-paper
  auto* cmd_repro = app.add_subcommand("repro-paper",
                                       "Run the full reproduction suite and write a summary");
  std::string repro_out = "repro_out";
  cmd_repro->add_option("--out", repro_out, "Directory for artifacts and the summary");
  bool repro_failed = false;
  cmd_repro->callback([&]() {
    VerifyConfig config;
    config.out_dir = repro_out;
    config.on_check = [](const CheckOutcome& outcome) {
      std::printf("[%s] %-4s %-60s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL",
                  outcome.id.c_str(), outcome.name.c_str(), outcome.seconds);
      if (!outcome.detail.empty()) std::printf("       %s\n", outcome.detail.c_str());
      std::fflush(stdout);
    };
    const auto outcomes = run_verification(config);
    int passed = 0;
    for (const auto& o : outcomes) passed += o.pass ? 1 : 0;
    std::printf("%d/%zu checks passed; summary in %s/summary.csv\n", passed, outcomes.size(),
                repro_out.c_str());
    repro_failed = passed != static_cast<int>(outcomes.size());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return repro_failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }

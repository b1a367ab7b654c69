#include "incisor/verify.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "incisor/analysis.hpp"
#include "incisor/eigensolve.hpp"
#include "incisor/io_export.hpp"
#include "incisor/spectral2d.hpp"
#include "incisor/spectral3d.hpp"

namespace incisor {

namespace {

constexpr double kPi2 = M_PI * M_PI;

struct Runner {
  const VerifyConfig& config;
  std::vector<CheckOutcome> outcomes;

  template <typename Fn>
  void check(const std::string& id, const std::string& name, Fn&& fn) {
    CheckOutcome outcome;
    outcome.id = id;
    outcome.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      std::ostringstream detail;
      outcome.pass = fn(detail);
      outcome.detail = detail.str();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    outcome.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (config.on_check) config.on_check(outcome);
    outcomes.push_back(std::move(outcome));
  }
};

bool strictly_monotone(const std::vector<double>& v, int direction, double min_step) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double diff = direction * (v[i] - v[i - 1]);
    if (!(diff > min_step)) return false;
  }
  return true;
}

/// Least-squares slope of log(err) against log(h).
double fit_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const double n = static_cast<double>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double rect_eigenvalue(int nx, int ny, int order) {
  StripSpec spec;
  spec.alpha = 0.0;
  spec.R = 3.0;
  spec.artificial_bc = ArtificialBc::Neumann; // both short sides Neumann
  spec.grading = 1.0;
  auto mesh = std::make_shared<Mesh>(build_strip_mesh(spec, nx, ny));
  const FeSpace space = build_space(mesh, order, spec.artificial_bc);
  const AssembledPair pair = assemble(space);
  return smallest_eigenpairs(pair, 1, 1e-10).values[0];
}

double oracle_mismatch(const AssembledPair& pair, int k) {
  const EigenSolveResult lan = smallest_eigenpairs(pair, k, 1e-9);
  const EigenSolveResult dense = dense_oracle(pair);
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    worst = std::max(worst, std::abs(lan.values[i] - dense.values[i]) / dense.values[i]);
  }
  return worst;
}

} // namespace

std::vector<CheckOutcome> run_verification(const VerifyConfig& config) {
  Runner runner{config, {}};
  const bool save = !config.out_dir.empty();
  if (save) std::filesystem::create_directories(config.out_dir);
  auto artifact = [&](const std::string& name) { return config.out_dir + "/" + name; };

  const Numerics2D num2d;   // P2, R=12, 40 cells across the thickness
  const Numerics3D num3d;   // P2, R1=R2=6, Neumann truncation
  const KappaPair k1m1(1.0, -1.0);
  const KappaPair k1p1(1.0, 1.0);
  const KappaPair k1z(1.0, 0.0);

  // C1: threshold value at alpha = pi/4.
  runner.check("C1", "threshold value mu1(pi/4)/pi^2 in [0.924, 0.934]", [&](std::ostream& out) {
    const ThresholdSample s = lambda_dagger_sample(k1m1, num2d);
    const double ratio = s.mu1 / kPi2;
    out << "mu1/pi^2 = " << ratio << " (nx=" << s.nx << ", ny=" << s.ny << ")";
    return ratio >= 0.924 && ratio <= 0.934;
  });

  // C2: threshold curve strictly decreasing inside (pi^2/4, pi^2). The
  // curve runs with the Neumann cut: near alpha = 0 the mode is bound by
  // only ~4e-5 pi^2, less than the excess any affordable Dirichlet
  // truncation adds, so the Dirichlet-cut values land above pi^2 there.
  runner.check("C2", "threshold curve decreasing in (pi^2/4, pi^2)", [&](std::ostream& out) {
    std::vector<double> alphas;
    for (int i = 1; i <= 14; ++i) alphas.push_back(0.1 * i);
    Numerics2D curve_num = num2d;
    curve_num.artificial_bc = ArtificialBc::Neumann;
    const auto samples = threshold_curve(alphas, curve_num);
    if (save) {
      CurveTable table;
      table.columns = {"alpha", "mu1", "mu1_over_pi2", "R", "nx", "ny", "order", "residual"};
      for (const auto& s : samples) {
        table.add_row({s.alpha, s.mu1, s.mu1 / kPi2, s.R, double(s.nx), double(s.ny),
                       double(s.order), s.residual});
      }
      write_csv(table, artifact("threshold_curve.csv"));
    }
    bool in_range = true;
    std::vector<double> values;
    for (const auto& s : samples) {
      values.push_back(s.mu1);
      if (!(s.mu1 > kPi2 / 4.0 && s.mu1 < kPi2)) in_range = false;
    }
    const bool decreasing = strictly_monotone(values, -1, 0.0);
    out << "mu1/pi^2 from " << values.front() / kPi2 << " to " << values.back() / kPi2
        << ", decreasing=" << decreasing << ", in_range=" << in_range;
    return decreasing && in_range;
  });

  // C3: existence for kappa = (1,-1).
  runner.check("C3", "kappa=(1,-1): lambda1/pi^2 in [0.79, 0.83] below threshold",
               [&](std::ostream& out) {
    const SpectrumReport rep = solve_incisor(k1m1, num3d);
    if (!rep.lambda1()) {
      out << "no eigenvalue below threshold (lambda_min/pi^2 = "
          << rep.eigenvalues.front() / kPi2 << ")";
      return false;
    }
    const double ratio = *rep.lambda1() / kPi2;
    out << "lambda1/pi^2 = " << ratio << ", lambda_dagger/pi^2 = " << rep.lambda_dagger / kPi2
        << ", margin/pi^2 = " << rep.margin / kPi2;
    return ratio >= 0.79 && ratio <= 0.83;
  });

  // C4: existence for kappa = (1,1).
  runner.check("C4", "kappa=(1,1): lambda1/pi^2 in [0.88, 0.92] below threshold",
               [&](std::ostream& out) {
    const SpectrumReport rep = solve_incisor(k1p1, num3d);
    if (!rep.lambda1()) {
      out << "no eigenvalue below threshold (lambda_min/pi^2 = "
          << rep.eigenvalues.front() / kPi2 << ")";
      return false;
    }
    const double ratio = *rep.lambda1() / kPi2;
    out << "lambda1/pi^2 = " << ratio << ", lambda_dagger/pi^2 = " << rep.lambda_dagger / kPi2;
    return ratio >= 0.88 && ratio <= 0.92;
  });

  // C5: absence at kappa2 = 0 plus the R-trend toward the threshold.
  // The trend is asserted through shrinking increments and terminal
  // closeness: each discrete lambda1(R) carries its own positive
  // discretization offset, so |lambda_dagger - lambda1(R)| itself is not
  // a stable measure of the truncation gap.
  runner.check("C5", "kappa=(1,0): absent; lambda1(R) climbs toward threshold",
               [&](std::ostream& out) {
    const SpectrumReport rep = solve_incisor(k1z, num3d);
    const bool absent = rep.count_below() == 0;
    std::vector<double> trend;
    for (const double R : {4.0, 6.0, 8.0}) {
      Numerics3D local = num3d;
      local.R1 = local.R2 = R;
      local.n1 = local.n2 = 0;
      local.margin = 0.002 * kPi2; // fixed: only the raw eigenvalue matters here
      trend.push_back(solve_incisor(k1z, local).eigenvalues.front());
    }
    const double dag = rep.lambda_dagger;
    const bool climbing = trend[0] < trend[1] && trend[1] < trend[2];
    const bool flattening = (trend[1] - trend[0]) > (trend[2] - trend[1]);
    const bool lands_at_threshold = std::abs(trend[2] - dag) <= 0.01 * kPi2;
    out << "absent=" << absent << ", lambda1(R)/pi^2 = {" << trend[0] / kPi2 << ", "
        << trend[1] / kPi2 << ", " << trend[2] / kPi2 << "}, lambda_dagger/pi^2 = "
        << dag / kPi2;
    return absent && climbing && flattening && lands_at_threshold;
  });

  // C6: monotonicity of lambda1 in kappa2 on both branches. The mode at
  // kappa2 = -0.25 is weakly bound (a few 1e-3 pi^2 below the
  // threshold), so the negative branch runs at a finer resolution where
  // all four points classify strictly below lambda_dagger - margin.
  runner.check("C6", "lambda1 monotone in kappa2 on both branches", [&](std::ostream& out) {
    const std::vector<double> neg = {-1.0, -0.75, -0.5, -0.25};
    const std::vector<double> pos = {0.7, 0.8, 0.9, 1.0};
    Numerics3D num_neg = num3d;
    num_neg.n3 = 14;
    const SweepResult sweep_neg = sweep_kappa2(1.0, neg, num_neg);
    const SweepResult sweep_pos = sweep_kappa2(1.0, pos, num3d);
    if (save) {
      write_sweep_csv(sweep_neg, artifact("sweep_negative.csv"));
      write_sweep_csv(sweep_pos, artifact("sweep_positive.csv"));
    }
    std::vector<double> lneg, lpos;
    double res_scale = 0.0;
    for (const auto& rep : sweep_neg.reports) {
      lneg.push_back(rep.eigenvalues.front());
      res_scale = std::max(res_scale, rep.residuals.front());
    }
    for (const auto& rep : sweep_pos.reports) {
      lpos.push_back(rep.eigenvalues.front());
      res_scale = std::max(res_scale, rep.residuals.front());
    }
    const double min_step = 10.0 * res_scale;
    const bool increasing = strictly_monotone(lneg, +1, min_step);
    const bool decreasing = strictly_monotone(lpos, -1, min_step);
    bool neg_detected = true;
    for (const auto& rep : sweep_neg.reports) neg_detected = neg_detected && rep.count_below() > 0;
    out << "negative branch increasing=" << increasing << " (detected=" << neg_detected
        << "), positive branch decreasing=" << decreasing << ", 10x residual = " << min_step;
    return increasing && decreasing && neg_detected;
  });

  // C7: transition point h(1) with a classified bracket, stable under
  // one mesh refinement.
  runner.check("C7", "find_h(1) in (0,1), bracket <= 0.05, stable under refinement",
               [&](std::ostream& out) {
    Numerics3D base = num3d;
    base.n3 = 8;
    base.n1 = base.n2 = 0;
    const FindHResult coarse = find_h(1.0, {0.0, 1.0}, 0.05, base);
    Numerics3D refined = num3d;
    refined.n3 = 10;
    refined.n1 = refined.n2 = 0;
    const FindHResult fine = find_h(1.0, {0.0, 1.0}, 0.05, refined);
    const double width = coarse.bracket_hi - coarse.bracket_lo;
    const bool inside = coarse.h > 0.0 && coarse.h < 1.0;
    const bool stable = std::abs(coarse.h - fine.h) <= 0.1;
    out << "h = " << coarse.h << " [" << coarse.bracket_lo << ", " << coarse.bracket_hi
        << "], refined h = " << fine.h << ", solves = " << coarse.solves + fine.solves;
    return inside && width <= 0.05 + 1e-12 && stable;
  });

  // C8: trial-function certificate for kappa = (1,-1).
  runner.check("C8", "trial certificate (1,-1): eps/2 identity, I_Gamma1 < 0, gap < 0",
               [&](std::ostream& out) {
    const ThresholdSample s = lambda_dagger_sample(k1m1, num2d);
    const Eigenfunction2D& v = *s.eigenfunction;
    bool plus_ok = true;
    for (const double eps : {1e-2, 1e-3}) {
      const TrialReport rep = trial_quotient_negative_kappa2(k1m1, eps, v);
      plus_ok = plus_ok && std::abs(rep.plus_part / eps - 0.5) <= 1e-6;
    }
    const double ig = boundary_integral_IGamma1(k1m1, v);
    const double eps_cert = std::min(1e-3, -ig);
    const TrialReport rep = trial_quotient_negative_kappa2(k1m1, eps_cert, v);
    out << "plus_part/eps ok=" << plus_ok << ", I_Gamma1 = " << ig << ", gap(" << eps_cert
        << ") = " << rep.quotient_gap;
    return plus_ok && ig < 0.0 && rep.quotient_gap < 0.0;
  });

  // C9: sign trichotomy of I_Gamma1.
  runner.check("C9", "I_Gamma1(1, kappa2) carries sign(kappa2)", [&](std::ostream& out) {
    const ThresholdSample s = lambda_dagger_sample(k1m1, num2d);
    const Eigenfunction2D& v = *s.eigenfunction;
    bool ok = true;
    out << "I_Gamma1 = {";
    for (const double k2 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      const double ig = boundary_integral_IGamma1(KappaPair(1.0, k2), v);
      out << ig << (k2 < 1.0 ? ", " : "");
      if (k2 < 0.0) ok = ok && ig < 0.0;
      if (k2 == 0.0) ok = ok && ig == 0.0;
      if (k2 > 0.0) ok = ok && ig > 0.0;
    }
    out << "}";
    return ok;
  });

  // C10: tau1' positive and stable across two mesh resolutions. The
  // sharper angles put a near-crack corner at the top end of the edge,
  // so these runs grade toward it (grading_t) with the matching deeper
  // layer along the strip picked up by the automatic sizing.
  runner.check("C10", "tau1'(alpha1) > 0, two resolutions agree to 1e-4", [&](std::ostream& out) {
    bool ok = true;
    out << "tau1' = {";
    for (const double alpha : {0.2, 0.5, 0.8, 1.1, 1.4}) {
      Numerics2D coarse = num2d;
      coarse.ny = 160;
      coarse.grading_t = 2.0;
      Numerics2D fine = coarse;
      fine.ny = 224;
      const ThresholdSample sc = mu1(alpha, coarse);
      const ThresholdSample sf = mu1(alpha, fine);
      const double tc = tau1_prime(alpha, *sc.eigenfunction);
      const double tf = tau1_prime(alpha, *sf.eigenfunction);
      const double rel = std::abs(tc - tf) / std::abs(tf);
      out << tc << (alpha < 1.4 ? ", " : "");
      ok = ok && tc > 0.0 && tf > 0.0 && rel <= 1e-4;
    }
    out << "}";
    return ok;
  });

  // C11: all-Dirichlet absence trend.
  runner.check("C11", "all-Dirichlet runs stay above pi^2 and trend down in R",
               [&](std::ostream& out) {
    bool ok = true;
    for (const auto& [k1, k2] : {std::pair{0.0, 0.0}, std::pair{1.0, -1.0}, std::pair{1.0, 1.0}}) {
      const DirichletAbsenceReport rep =
          dirichlet_absence_check(KappaPair(k1, k2), {4.0, 6.0, 8.0}, num3d);
      out << "(" << k1 << "," << k2 << "): lambda1/pi^2 = {" << rep.lambda1[0] / kPi2 << ", "
          << rep.lambda1[1] / kPi2 << ", " << rep.lambda1[2] / kPi2 << "} ";
      ok = ok && rep.all_above_pi2 && rep.nonincreasing;
    }
    return ok;
  });

  // C12: dense-oracle equivalence plus rectangle convergence orders.
  runner.check("C12", "oracle equivalence 1e-8; rectangle slopes >= 1.9 / 3.8",
               [&](std::ostream& out) {
    double worst = 0.0;
    { // strip meshes, P1 and P2
      StripSpec spec;
      spec.alpha = M_PI / 4.0;
      spec.R = 4.0;
      for (const int order : {1, 2}) {
        auto mesh = std::make_shared<Mesh>(build_strip_mesh(spec, 10, 6));
        const FeSpace space = build_space(mesh, order, spec.artificial_bc);
        worst = std::max(worst, oracle_mismatch(assemble(space), 5));
      }
    }
    { // coarse 3D incisor, P2
      IncisorSpec spec;
      spec.kappa = k1m1;
      spec.R1 = spec.R2 = 3.0;
      auto mesh = std::make_shared<Mesh>(build_incisor_mesh(spec, 4, 4, 3));
      const FeSpace space = build_space(mesh, 2, spec.artificial_bc);
      worst = std::max(worst, oracle_mismatch(assemble(space), 5));
    }

    std::vector<double> h1, e1, h2, e2;
    for (int level = 0; level < 4; ++level) {
      const int f = 1 << level;
      e1.push_back(std::abs(rect_eigenvalue(9 * f, 3 * f, 1) - kPi2));
      h1.push_back(1.0 / (3 * f));
      // P2 starts at two cells across: a single quadratic across the
      // thickness is pre-asymptotic and would distort the fitted slope
      e2.push_back(std::abs(rect_eigenvalue(6 * f, 2 * f, 2) - kPi2));
      h2.push_back(1.0 / (2 * f));
    }
    const double slope1 = fit_slope(h1, e1);
    const double slope2 = fit_slope(h2, e2);
    out << "worst oracle mismatch = " << worst << ", P1 slope = " << slope1
        << ", P2 slope = " << slope2;
    return worst <= 1e-8 && slope1 >= 1.9 && slope2 >= 3.8;
  });

  // C13: multiplicity for kappa = (3,-3) at two resolutions.
  runner.check("C13", "kappa=(3,-3): at least two trapped modes at two resolutions",
               [&](std::ostream& out) {
    const KappaPair k3m3(3.0, -3.0);
    Numerics3D coarse = num3d;
    coarse.n3 = 8;
    Numerics3D fine = num3d;
    fine.n3 = 10;
    const int count_coarse = count_discrete(k3m3, coarse);
    const int count_fine = count_discrete(k3m3, fine);
    out << "counts = {" << count_coarse << ", " << count_fine << "}";
    return count_coarse >= 2 && count_fine >= 2;
  });

  if (save) {
    CurveTable summary;
    summary.columns = {"check", "pass", "seconds"};
    for (std::size_t i = 0; i < runner.outcomes.size(); ++i) {
      summary.add_row({double(i + 1), runner.outcomes[i].pass ? 1.0 : 0.0,
                       runner.outcomes[i].seconds});
    }
    write_csv(summary, artifact("summary.csv"));
  }
  return runner.outcomes;
}

} // namespace incisor

#include "incisor/spectral3d.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace incisor {

namespace {

constexpr double kPi2 = M_PI * M_PI;

/// Cells along x1/x2 sized from (R, kappa1, n3, grading) only, so every
/// point of a kappa2 sweep shares one unit-cube discretization.
int auto_n12(double R, double kappa1, int n3, double grading) {
  const double length = R - kappa1 / 2.0;
  if (grading == 1.0) {
    return std::max(1, static_cast<int>(std::ceil(length * n3)));
  }
  const double n = std::log1p(length * n3 * (grading - 1.0)) / std::log(grading);
  return std::max(1, static_cast<int>(std::ceil(n)));
}

struct ResolvedNumerics {
  Numerics3D num;
  int n1 = 0;
  int n2 = 0;
};

ResolvedNumerics resolve(const KappaPair& kappa, const Numerics3D& num) {
  ResolvedNumerics r{num, num.n1, num.n2};
  if (r.n1 <= 0) r.n1 = auto_n12(num.R1, kappa.kappa1, num.n3, num.grading);
  if (r.n2 <= 0) r.n2 = auto_n12(num.R2, kappa.kappa1, num.n3, num.grading);
  return r;
}

IncisorSpec make_spec(const KappaPair& kappa, const Numerics3D& num, bool dirichlet_everywhere) {
  IncisorSpec spec;
  spec.kappa = kappa;
  spec.R1 = num.R1;
  spec.R2 = num.R2;
  spec.artificial_bc = num.artificial_bc;
  spec.dirichlet_everywhere = dirichlet_everywhere;
  spec.grading = num.grading;
  return spec;
}

/// margin = max(truncation estimate, 0.002 pi^2). The estimate solves a
/// reduced P1 problem twice on one mesh, once per artificial condition:
/// swapping Dirichlet and Neumann on the truncation faces brackets the
/// truncation sensitivity while the shared mesh cancels the
/// discretization bias. Vanishes for well-trapped modes, blows up (and
/// rightly declares the run undecidable) near the threshold.
double auto_margin(const KappaPair& kappa, const Numerics3D& num, double lambda_dag) {
  const double floor_margin = 0.002 * kPi2;
  Numerics3D coarse = num;
  coarse.order = 1;
  coarse.n3 = std::max(4, num.n3 / 2);
  coarse.tol = std::max(num.tol, 1e-7);
  coarse.n1 = coarse.n2 = 0;
  const ResolvedNumerics r = resolve(kappa, coarse);
  auto mesh = std::make_shared<Mesh>(build_incisor_mesh(make_spec(kappa, coarse, false),
                                                        r.n1, r.n2, coarse.n3));
  double lam[2];
  for (const auto& [i, bc] : {std::pair{0, ArtificialBc::Neumann},
                             std::pair{1, ArtificialBc::Dirichlet}}) {
    const FeSpace space = build_space(mesh, coarse.order, bc);
    const AssembledPair pair = assemble(space);
    lam[i] = smallest_eigenpairs(pair, 1, coarse.tol).values[0];
  }
  double estimate = 0.0;
  // Only meaningful when the coarse run actually sees a trapped candidate.
  if (std::min(lam[0], lam[1]) < 0.99 * lambda_dag) {
    estimate = std::abs(lam[0] - lam[1]);
  }
  return std::max(estimate, floor_margin);
}

} // namespace

int SpectrumReport::count_below() const {
  return static_cast<int>(std::count(below.begin(), below.end(), true));
}

std::optional<double> SpectrumReport::lambda1() const {
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (below[i]) return eigenvalues[i];
  }
  return std::nullopt;
}

IncisorSolution solve_incisor_full(const KappaPair& kappa, const Numerics3D& num) {
  const ResolvedNumerics r = resolve(kappa, num);
  const double lambda_dag = lambda_dagger(kappa, num.threshold);
  const double margin = num.margin > 0.0 ? num.margin : auto_margin(kappa, num, lambda_dag);

  IncisorSolution sol;
  sol.mesh = std::make_shared<Mesh>(
      build_incisor_mesh(make_spec(kappa, num, false), r.n1, r.n2, num.n3));
  sol.space = std::make_shared<FeSpace>(build_space(sol.mesh, num.order, num.artificial_bc));
  sol.pair = assemble(*sol.space);
  const int k = std::min<int>(num.k, static_cast<int>(sol.pair.K.rows()) - 1);
  sol.eigen = smallest_eigenpairs(sol.pair, k, num.tol);

  SpectrumReport& rep = sol.report;
  rep.kappa = kappa;
  rep.lambda_dagger = lambda_dag;
  rep.margin = margin;
  rep.eigenvalues = sol.eigen.values;
  rep.residuals = sol.eigen.residuals;
  rep.below.resize(rep.eigenvalues.size());
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    rep.below[i] = rep.eigenvalues[i] < lambda_dag - margin;
  }
  rep.undecided = std::abs(rep.eigenvalues.front() - lambda_dag) <= margin;
  if (rep.undecided) {
    std::ostringstream warn;
    warn << "smallest eigenvalue " << rep.eigenvalues.front() << " lies within +-" << margin
         << " of lambda_dagger=" << lambda_dag << "; undecidable at this resolution";
    rep.warning = warn.str();
  }
  rep.R1 = num.R1;
  rep.R2 = num.R2;
  rep.n1 = r.n1;
  rep.n2 = r.n2;
  rep.n3 = num.n3;
  rep.order = num.order;
  rep.artificial_bc = num.artificial_bc;
  return sol;
}

SpectrumReport solve_incisor(const KappaPair& kappa, const Numerics3D& num) {
  return solve_incisor_full(kappa, num).report;
}

SweepResult sweep_kappa2(double kappa1, const std::vector<double>& kappa2_grid,
                         const Numerics3D& num, int workers) {
  if (kappa2_grid.empty()) throw ValidationError("sweep_kappa2: empty grid");
  for (const double k2 : kappa2_grid) {
    KappaPair probe(kappa1, k2); // validates the range
    (void)probe;
  }

  // Freeze one discretization structure for the whole sweep.
  Numerics3D shared = num;
  const ResolvedNumerics r = resolve(KappaPair(kappa1, 0.0), num);
  shared.n1 = r.n1;
  shared.n2 = r.n2;

  SweepResult result;
  result.kappa1 = kappa1;
  result.kappa2 = kappa2_grid;
  result.reports.resize(kappa2_grid.size());

  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(kappa2_grid.size())));
  if (n_workers == 1) {
    for (std::size_t i = 0; i < kappa2_grid.size(); ++i) {
      result.reports[i] = solve_incisor(KappaPair(kappa1, kappa2_grid[i]), shared);
    }
    return result;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(kappa2_grid.size());
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= kappa2_grid.size()) return;
      try {
        result.reports[i] = solve_incisor(KappaPair(kappa1, kappa2_grid[i]), shared);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return result;
}

FindHResult find_h(double kappa1, std::pair<double, double> bracket, double tol_kappa2,
                   const Numerics3D& num) {
  if (!(kappa1 > 0.0)) throw ValidationError("find_h requires kappa1 > 0");
  if (!(tol_kappa2 > 0.0)) throw ValidationError("find_h: tolerance must be positive");
  double lo = bracket.first, hi = bracket.second;
  if (!(lo < hi)) throw ValidationError("find_h: empty bracket");

  // A fixed margin keeps the bisection predicate consistent across the
  // bracket; the default matches the detection floor.
  Numerics3D local = num;
  if (local.margin <= 0.0) local.margin = 0.002 * kPi2;
  const ResolvedNumerics r = resolve(KappaPair(kappa1, 0.0), local);
  local.n1 = r.n1;
  local.n2 = r.n2;

  FindHResult result;
  result.numerics = local;

  auto classify = [&](double k2, bool& undecided) {
    const SpectrumReport rep = solve_incisor(KappaPair(kappa1, k2), local);
    ++result.solves;
    undecided = rep.undecided;
    return rep.count_below() > 0;
  };

  bool lo_undecided = false, hi_undecided = false;
  const bool lo_flag = classify(lo, lo_undecided);
  const bool hi_flag = classify(hi, hi_undecided);
  if (lo_undecided && hi_undecided) {
    throw SolverError("find_h: both bracket endpoints lie inside the detection margin; "
                      "inconclusive at this resolution");
  }
  if (lo_flag) throw ValidationError("find_h: low endpoint already detects discrete spectrum");
  if (!hi_flag) throw ValidationError("find_h: high endpoint detects no discrete spectrum");

  while (hi - lo > tol_kappa2) {
    const double mid = 0.5 * (lo + hi);
    bool undecided = false;
    if (classify(mid, undecided)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  result.h = 0.5 * (lo + hi);
  result.bracket_lo = lo;
  result.bracket_hi = hi;
  return result;
}

int count_discrete(const KappaPair& kappa, const Numerics3D& num) {
  constexpr int kMaxRequest = 24;
  Numerics3D local = num;
  for (;;) {
    const SpectrumReport rep = solve_incisor(kappa, local);
    const int below = rep.count_below();
    // Stop once some returned eigenvalue clears the threshold, so the
    // count is not capped by the request size.
    if (below < static_cast<int>(rep.eigenvalues.size()) || local.k >= kMaxRequest) {
      return below;
    }
    local.k = std::min(kMaxRequest, local.k + 5);
  }
}

DirichletAbsenceReport dirichlet_absence_check(const KappaPair& kappa,
                                               const std::vector<double>& R_values,
                                               const Numerics3D& num) {
  if (R_values.empty()) throw ValidationError("dirichlet_absence_check: no truncation radii");
  DirichletAbsenceReport report;
  report.kappa = kappa;
  report.R_values = R_values;
  for (const double R : R_values) {
    Numerics3D local = num;
    local.R1 = local.R2 = R;
    local.n1 = local.n2 = 0; // re-derive from R to keep the physical cell size
    const ResolvedNumerics r = resolve(kappa, local);
    auto mesh = std::make_shared<Mesh>(
        build_incisor_mesh(make_spec(kappa, local, true), r.n1, r.n2, local.n3));
    const FeSpace space = build_space(mesh, local.order, ArtificialBc::Dirichlet);
    const AssembledPair pair = assemble(space);
    report.lambda1.push_back(smallest_eigenpairs(pair, 1, local.tol).values[0]);
  }
  report.all_above_pi2 = std::all_of(report.lambda1.begin(), report.lambda1.end(),
                                     [](double l) { return l >= kPi2 * (1.0 - 0.001); });
  report.nonincreasing = true;
  for (std::size_t i = 1; i < report.lambda1.size(); ++i) {
    if (report.lambda1[i] > report.lambda1[i - 1]) report.nonincreasing = false;
  }
  return report;
}

} // namespace incisor

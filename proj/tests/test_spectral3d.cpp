#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "incisor/eigensolve.hpp"
#include "incisor/spectral3d.hpp"

using namespace incisor;

namespace {

constexpr double kPi2 = M_PI * M_PI;

Numerics3D fast_numerics() {
  Numerics3D num;
  num.n3 = 6;
  num.k = 3;
  return num;
}

} // namespace

TEST_CASE("kappa=(1,-1): one trapped mode below the threshold") {
  const SpectrumReport rep = solve_incisor(KappaPair(1.0, -1.0), fast_numerics());
  REQUIRE(rep.count_below() >= 1);
  const double l1 = *rep.lambda1();
  CHECK(l1 > 0.0);
  CHECK(l1 < rep.lambda_dagger - rep.margin);
  CHECK(l1 / kPi2 == doctest::Approx(0.81).epsilon(0.04));
  for (std::size_t i = 1; i < rep.eigenvalues.size(); ++i) {
    CHECK(rep.eigenvalues[i] >= rep.eigenvalues[i - 1]);
  }
  for (const double r : rep.residuals) CHECK(r <= 1e-9);
  CHECK(rep.n1 == rep.n2); // symmetric auto sizing from kappa1
}

TEST_CASE("kappa=(1,0): nothing below the threshold") {
  const SpectrumReport rep = solve_incisor(KappaPair(1.0, 0.0), fast_numerics());
  CHECK(rep.count_below() == 0);
  CHECK(count_discrete(KappaPair(1.0, 0.0), fast_numerics()) == 0);
}

TEST_CASE("mirror symmetry: reflected mesh gives the same lambda1") {
  IncisorSpec spec;
  spec.kappa = KappaPair(1.0, 0.5);
  spec.R1 = spec.R2 = 4.0;
  spec.grading = 1.15;
  auto mesh = std::make_shared<Mesh>(build_incisor_mesh(spec, 8, 8, 5));
  auto reflected = std::make_shared<Mesh>(reflect_mesh(*mesh, 1));
  double values[2];
  int idx = 0;
  for (const auto& m : {mesh, reflected}) {
    const FeSpace space = build_space(m, 2, ArtificialBc::Neumann);
    values[idx++] = smallest_eigenpairs(assemble(space), 1, 1e-10).values[0];
  }
  CHECK(std::abs(values[0] - values[1]) <= 1e-10);
}

TEST_CASE("kappa1=kappa2: eigenfunction symmetric across the bisector") {
  Numerics3D num = fast_numerics();
  num.k = 1;
  const IncisorSolution sol = solve_incisor_full(KappaPair(1.0, 1.0), num);
  REQUIRE(sol.report.n1 == sol.report.n2);
  const Eigen::VectorXd full = expand_free_vector(*sol.space, sol.pair, sol.eigen.vectors.col(0));
  const int np = sol.report.n1 + 1;
  const int np3 = sol.report.n3 + 1;
  auto vid = [np](int i, int j, int k) { return (k * np + j) * np + i; };
  double worst = 0.0;
  for (int k = 0; k < np3; ++k) {
    for (int j = 0; j < np; ++j) {
      for (int i = 0; i < np; ++i) {
        const double a = full[sol.space->vertex_dof[vid(i, j, k)]];
        const double b = full[sol.space->vertex_dof[vid(j, i, k)]];
        worst = std::max(worst, std::abs(a - b));
      }
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("sweep: flags follow the transition structure") {
  Numerics3D num = fast_numerics();
  num.k = 2;
  const SweepResult neg = sweep_kappa2(1.0, {-1.0, -0.5}, num);
  CHECK(neg.reports[0].count_below() > 0);
  CHECK(neg.reports[1].count_below() > 0);
  CHECK(neg.reports[0].eigenvalues[0] < neg.reports[1].eigenvalues[0]);

  const SweepResult pos = sweep_kappa2(1.0, {0.2, 0.95}, num);
  CHECK(pos.reports[0].count_below() == 0);
  CHECK(pos.reports[1].count_below() > 0);

  // shared discretization structure across the sweep
  CHECK(neg.reports[0].n1 == neg.reports[1].n1);
  CHECK(neg.reports[0].n2 == neg.reports[1].n2);

  CHECK_THROWS_AS(sweep_kappa2(1.0, {-2.0, 0.0}, num), ValidationError);
}

TEST_CASE("sweep: worker pool returns identical bits in grid order") {
  Numerics3D num = fast_numerics();
  num.n3 = 4;
  num.k = 1;
  const std::vector<double> grid = {-0.8, -0.4, 0.9};
  const SweepResult serial = sweep_kappa2(1.0, grid, num, 1);
  const SweepResult pooled = sweep_kappa2(1.0, grid, num, 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = serial.reports[i].eigenvalues[0];
    const double b = pooled.reports[i].eigenvalues[0];
    CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
  }
}

TEST_CASE("find_h rejects bad brackets") {
  Numerics3D num = fast_numerics();
  num.n3 = 4;
  num.k = 1;
  // low endpoint already trapped
  CHECK_THROWS_AS(find_h(1.0, {-0.5, 1.0}, 0.2, num), ValidationError);
  // high endpoint not trapped
  CHECK_THROWS_AS(find_h(1.0, {0.0, 0.1}, 0.2, num), ValidationError);
  CHECK_THROWS_AS(find_h(1.0, {0.5, 0.5}, 0.2, num), ValidationError);
  CHECK_THROWS_AS(find_h(0.0, {0.0, 1.0}, 0.2, num), ValidationError);
}

TEST_CASE("find_h brackets the transition at coarse resolution") {
  Numerics3D num = fast_numerics();
  num.k = 2;
  const FindHResult result = find_h(1.0, {0.0, 1.0}, 0.25, num);
  CHECK(result.h > 0.0);
  CHECK(result.h < 1.0);
  CHECK(result.bracket_hi - result.bracket_lo <= 0.25 + 1e-12);
  // re-solve audit at the final bracket edges
  const SpectrumReport lo = solve_incisor(KappaPair(1.0, result.bracket_lo), result.numerics);
  const SpectrumReport hi = solve_incisor(KappaPair(1.0, result.bracket_hi), result.numerics);
  CHECK(lo.count_below() == 0);
  CHECK(hi.count_below() > 0);
}

TEST_CASE("all-Dirichlet check stays above pi^2") {
  Numerics3D num = fast_numerics();
  num.k = 1;
  for (const auto& [k1, k2] : {std::pair{0.0, 0.0}, std::pair{1.0, 1.0}}) {
    const DirichletAbsenceReport rep =
        dirichlet_absence_check(KappaPair(k1, k2), {3.0, 5.0}, num);
    CHECK(rep.all_above_pi2);
    CHECK(rep.nonincreasing);
  }
  // straight edges give a box, where the truncated value is explicit:
  // lambda1 = pi^2 + 2 (pi/R)^2
  const DirichletAbsenceReport box =
      dirichlet_absence_check(KappaPair(0.0, 0.0), {5.0}, num);
  CHECK(box.lambda1[0] == doctest::Approx(kPi2 + 2.0 * std::pow(M_PI / 5.0, 2)).epsilon(0.01));
}

TEST_CASE("report serialization fields") {
  Numerics3D num = fast_numerics();
  num.n3 = 4;
  num.k = 1;
  num.margin = 0.002 * kPi2;
  const SpectrumReport rep = solve_incisor(KappaPair(1.0, -1.0), num);
  CHECK(rep.margin == 0.002 * kPi2);
  CHECK(rep.R1 == 6.0);
  CHECK(rep.n3 == 4);
  CHECK(rep.order == 2);
}

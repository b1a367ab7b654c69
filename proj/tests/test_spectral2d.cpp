#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "incisor/spectral2d.hpp"

using namespace incisor;

namespace {

constexpr double kPi2 = M_PI * M_PI;

Numerics2D fast_numerics() {
  Numerics2D num;
  num.ny = 24;
  return num;
}

} // namespace

TEST_CASE("mu1 at alpha=0: threshold attained, nothing below pi^2") {
  const ThresholdSample s = mu1(0.0, fast_numerics());
  CHECK(s.mu1 > kPi2); // Dirichlet cut keeps the value above the threshold
  CHECK(s.mu1 == doctest::Approx(kPi2).epsilon(0.01));
}

TEST_CASE("mu1 at alpha=pi/4 sits near 0.929 pi^2") {
  const ThresholdSample s = mu1(M_PI / 4.0, fast_numerics());
  CHECK(s.mu1 / kPi2 > 0.92);
  CHECK(s.mu1 / kPi2 < 0.94);
  CHECK(s.residual <= 1e-9);
}

TEST_CASE("mu1 at alpha=9pi/20 lands in the sharp-angle bracket") {
  const ThresholdSample coarse = mu1(9.0 * M_PI / 20.0, fast_numerics());
  Numerics2D fine = fast_numerics();
  fine.ny = 36;
  const ThresholdSample finer = mu1(9.0 * M_PI / 20.0, fine);
  for (const auto& s : {coarse, finer}) {
    CHECK(s.mu1 / kPi2 > 0.25);
    CHECK(s.mu1 / kPi2 < 0.5);
  }
  // convergence bracket: the top corner of the sharp strip is nearly a
  // crack (exponent ~ 0.5), so convergence is first order at best
  CHECK(coarse.mu1 == doctest::Approx(finer.mu1).epsilon(2e-2));
  CHECK(finer.mu1 < coarse.mu1); // conforming values decrease under refinement
}

TEST_CASE("eigenfunction invariants: unit norm, interior positivity") {
  const ThresholdSample s = mu1(0.9, fast_numerics());
  const Eigenfunction2D& v = *s.eigenfunction;
  CHECK(v.coeffs.minCoeff() >= -1e-8);
  // L2 norm via a few cross-sections against 1 is weak; use the value
  // grid: norm checked through the mass matrix inside the solver, spot
  // check a midline value is positive and O(1)
  CHECK(v.value(std::tan(0.9) * 0.5 + 0.3, 0.5) > 0.0);
}

TEST_CASE("threshold curve: strictly decreasing inside the bracket") {
  Numerics2D num = fast_numerics();
  num.ny = 16;
  const std::vector<double> alphas = {0.3, 0.6, 0.9, 1.2};
  const auto samples = threshold_curve(alphas, num);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(samples[i].mu1 > kPi2 / 4.0);
    CHECK(samples[i].mu1 < kPi2);
    if (i > 0) {
      const double drop = samples[i - 1].mu1 - samples[i].mu1;
      CHECK(drop > 10.0 * std::max(samples[i].residual, samples[i - 1].residual));
    }
  }
  CHECK_THROWS_AS(threshold_curve({0.5, 0.5}, num), ValidationError);
  CHECK_THROWS_AS(threshold_curve({0.0, 0.5}, num), ValidationError);
}

TEST_CASE("truncation convergence: the R sensitivity dies off far out") {
  // The eigenfunction decays exponentially, so moving the cut from 12 to
  // 24 must perturb mu1 by an order of magnitude less than moving it
  // from 4 to 8. The far difference bottoms out at the remeshing noise
  // of the R-dependent map, well below the physics scale.
  for (const double alpha : {M_PI / 8.0, M_PI / 4.0}) {
    auto at = [&](double R) {
      Numerics2D num = fast_numerics();
      num.R = R;
      return mu1(alpha, num).mu1;
    };
    const double d_near = std::abs(at(4.0) - at(8.0));
    const double d_far = std::abs(at(12.0) - at(24.0));
    CHECK(d_far < d_near / 10.0);
    CHECK(d_far / at(12.0) < 2e-4);
  }
}

TEST_CASE("lambda_dagger: closed form at zero, cache, ordering") {
  CHECK(lambda_dagger(KappaPair(0.0, 0.0)) == kPi2);

  Numerics2D num = fast_numerics();
  const double first = lambda_dagger(KappaPair(1.0, -1.0), num);
  const double second = lambda_dagger(KappaPair(1.0, 1.0), num); // same alpha1: cache hit
  CHECK(std::memcmp(&first, &second, sizeof(double)) == 0);

  // lambda_dagger <= mu1(arctan |kappa2|) for |kappa2| < kappa1
  const KappaPair k(1.0, 0.5);
  const double dag = lambda_dagger(k, num);
  const double mu_k2 = mu1(std::atan(0.5), num).mu1;
  CHECK(dag <= mu_k2);
}

TEST_CASE("mu1_truncated: Dirichlet cut, symmetry, monotone in R") {
  Numerics2D num = fast_numerics();
  const double alpha2 = std::atan(0.5);

  const double pos = mu1_truncated(alpha2, 8.0, num);
  const double neg = mu1_truncated(-alpha2, 8.0, num);
  CHECK(std::memcmp(&pos, &neg, sizeof(double)) == 0); // reflection symmetry

  std::vector<double> values;
  for (const double R : {2.0, 4.0, 8.0, 12.0}) values.push_back(mu1_truncated(alpha2, R, num));
  for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] <= values[i - 1] + 1e-12);
  // limit bounded below by the R=12 value of the same problem
  const double reference = mu1(alpha2, num).mu1;
  for (const double v : values) CHECK(v >= reference - 1e-9);

  // with |alpha2| < alpha1 every truncated value dominates lambda_dagger
  const double dag = lambda_dagger(KappaPair(1.0, 0.5), num);
  for (const double v : values) CHECK(v > dag);
}

TEST_CASE("reflection invariance of mu1") {
  StripSpec spec;
  spec.alpha = M_PI / 5.0;
  spec.R = 8.0;
  auto mesh = std::make_shared<Mesh>(build_strip_mesh(spec, 20, 10));
  auto reflected = std::make_shared<Mesh>(reflect_mesh(*mesh, 0));
  double values[2];
  int idx = 0;
  for (const auto& m : {mesh, reflected}) {
    const FeSpace space = build_space(m, 2, ArtificialBc::Dirichlet);
    values[idx++] = smallest_eigenpairs(assemble(space), 1, 1e-10).values[0];
  }
  CHECK(std::abs(values[0] - values[1]) <= 1e-10);
}

TEST_CASE("decay rate matches sqrt(pi^2 - mu1)") {
  Numerics2D num = fast_numerics();
  const ThresholdSample mid = mu1(M_PI / 4.0, num);
  const double rate_mid = decay_rate(*mid.eigenfunction, mid.mu1);
  const double expected_mid = std::sqrt(kPi2 - mid.mu1);
  CHECK(rate_mid == doctest::Approx(expected_mid).epsilon(0.10));

  const ThresholdSample sharp = mu1(9.0 * M_PI / 20.0, num);
  const double rate_sharp = decay_rate(*sharp.eigenfunction, sharp.mu1);
  CHECK(rate_sharp == doctest::Approx(std::sqrt(kPi2 - sharp.mu1)).epsilon(0.10));
  CHECK(rate_sharp > rate_mid); // deeper eigenvalue decays faster

  // straight end: mu1 >= pi^2, nothing to fit
  const ThresholdSample straight = mu1(0.0, num);
  CHECK_THROWS_AS(decay_rate(*straight.eigenfunction, straight.mu1), ValidationError);
}

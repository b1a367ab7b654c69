#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "incisor/eigensolve.hpp"
#include "incisor/geometry.hpp"

using namespace incisor;

namespace {

AssembledPair diagonal_pair(const std::vector<double>& diag) {
  AssembledPair pair;
  const int n = static_cast<int>(diag.size());
  pair.K.resize(n, n);
  pair.M.resize(n, n);
  for (int i = 0; i < n; ++i) {
    pair.K.insert(i, i) = diag[i];
    pair.M.insert(i, i) = 1.0;
    pair.free_dofs.push_back(i);
  }
  pair.K.makeCompressed();
  pair.M.makeCompressed();
  return pair;
}

AssembledPair random_spd_pair(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd A(n, n), B(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      A(i, j) = gauss(rng);
      B(i, j) = gauss(rng);
    }
  }
  const Eigen::MatrixXd Kd = A.transpose() * A + Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd Md = 0.1 * B.transpose() * B + Eigen::MatrixXd::Identity(n, n);
  AssembledPair pair;
  pair.K = Kd.sparseView();
  pair.M = Md.sparseView();
  for (int i = 0; i < n; ++i) pair.free_dofs.push_back(i);
  return pair;
}

AssembledPair strip_pair(double alpha, int nx, int ny, int order) {
  StripSpec spec;
  spec.alpha = alpha;
  spec.R = 4.0;
  auto mesh = std::make_shared<Mesh>(build_strip_mesh(spec, nx, ny));
  const FeSpace space = build_space(mesh, order, spec.artificial_bc);
  return assemble(space);
}

} // namespace

TEST_CASE("diagonal pair solves exactly") {
  const AssembledPair two = diagonal_pair({1.0, 2.0});
  const EigenSolveResult dense = dense_oracle(two);
  CHECK(dense.values[0] == 1.0);
  CHECK(dense.values[1] == 2.0);

  const AssembledPair three = diagonal_pair({1.0, 2.0, 5.0});
  const EigenSolveResult lan = smallest_eigenpairs(three, 2, 1e-12);
  CHECK(lan.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lan.values[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("preconditions") {
  const AssembledPair pair = diagonal_pair({1.0, 2.0, 3.0});
  CHECK_THROWS_AS(smallest_eigenpairs(pair, 0, 1e-9), ValidationError);
  CHECK_THROWS_AS(smallest_eigenpairs(pair, 3, 1e-9), ValidationError);

  const AssembledPair big = diagonal_pair(std::vector<double>(4001, 1.0));
  CHECK_THROWS_AS(dense_oracle(big), ValidationError);
}

TEST_CASE("rectangle P2 reproduces pi^2 to 1e-6 relative") {
  StripSpec spec;
  spec.alpha = 0.0;
  spec.R = 3.0;
  spec.artificial_bc = ArtificialBc::Neumann;
  auto mesh = std::make_shared<Mesh>(build_strip_mesh(spec, 72, 24));
  const FeSpace space = build_space(mesh, 2, spec.artificial_bc);
  const EigenSolveResult eig = smallest_eigenpairs(assemble(space), 1, 1e-10);
  CHECK(eig.values[0] == doctest::Approx(M_PI * M_PI).epsilon(1e-6));
}

TEST_CASE("random SPD pair: dense oracle self-consistency") {
  const AssembledPair pair = random_spd_pair(50, 7u);
  const EigenSolveResult dense = dense_oracle(pair);
  REQUIRE(dense.values.size() == 50);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd u = dense.vectors.col(i);
    const double rayleigh = u.dot(pair.K * u) / u.dot(pair.M * u);
    CHECK(rayleigh == doctest::Approx(dense.values[i]).epsilon(1e-12));
    if (i > 0) CHECK(dense.values[i] >= dense.values[i - 1]);
  }
}

TEST_CASE("lanczos matches the dense oracle on a strip mesh") {
  const AssembledPair pair = strip_pair(M_PI / 4.0, 10, 6, 2);
  REQUIRE(pair.K.rows() < 2000);
  const int k = 5;
  const EigenSolveResult lan = smallest_eigenpairs(pair, k, 1e-9);
  const EigenSolveResult dense = dense_oracle(pair);
  for (int i = 0; i < k; ++i) {
    CHECK(lan.values[i] == doctest::Approx(dense.values[i]).epsilon(1e-8));
    CHECK(lan.residuals[i] <= 1e-9);
  }
  CHECK(lan.values.front() > 0.0); // discrete Friedrichs with Dirichlet dofs
}

TEST_CASE("result invariants: M-orthonormal, Rayleigh identity, sign") {
  const AssembledPair pair = strip_pair(0.5, 8, 5, 2);
  const int k = 4;
  const EigenSolveResult eig = smallest_eigenpairs(pair, k, 1e-9);
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd ui = eig.vectors.col(i);
    CHECK(std::abs(ui.dot(pair.M * ui) - 1.0) <= 1e-10);
    for (int j = 0; j < i; ++j) {
      CHECK(std::abs(ui.dot(pair.M * eig.vectors.col(j))) <= 1e-8);
    }
    const double rayleigh = ui.dot(pair.K * ui) / ui.dot(pair.M * ui);
    CHECK(rayleigh == doctest::Approx(eig.values[i]).epsilon(1e-10));
    // entry of largest magnitude is positive
    Eigen::Index imax;
    ui.cwiseAbs().maxCoeff(&imax);
    CHECK(ui[imax] > 0.0);
  }
}

TEST_CASE("determinism: identical runs give identical bits") {
  const AssembledPair pair = strip_pair(0.8, 9, 6, 1);
  const EigenSolveResult a = smallest_eigenpairs(pair, 3, 1e-9);
  const EigenSolveResult b = smallest_eigenpairs(pair, 3, 1e-9);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::memcmp(&a.values[i], &b.values[i], sizeof(double)) == 0);
  }
}

TEST_CASE("unreachable tolerance raises a solver error") {
  const AssembledPair pair = strip_pair(0.4, 4, 3, 1);
  CHECK_THROWS_AS(smallest_eigenpairs(pair, 2, 1e-30), SolverError);
}

#include "incisor/spectral2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "incisor/quadrature.hpp"

namespace incisor {

namespace {

/// Cells along the strip so the cell nearest the slanted edge matches
/// the thickness cells under the grading. With corner grading active
/// (grading_t > 1) the first cell is deepened to the corner scale
/// ny^{-grading_t}, which costs only a logarithmic number of extra
/// cells; without it the corner would stay under-resolved in this
/// direction and pollute the eigenfunction at a reduced rate.
int auto_nx(double alpha, double R, int ny, double grading, double grading_t) {
  const double length = R - std::tan(alpha) / 2.0;
  const double target_cells = std::min(length * std::pow(double(ny), grading_t), 1e7);
  if (grading == 1.0) {
    return std::max(1, static_cast<int>(std::ceil(length * ny)));
  }
  const double n = std::log1p(target_cells * (grading - 1.0)) / std::log(grading);
  return std::max(1, static_cast<int>(std::ceil(n)));
}

struct CacheKey {
  double alpha, R, grading, grading_t, tol;
  int nx, ny, order, bc;

  bool operator<(const CacheKey& o) const {
    return std::memcmp(this, &o, sizeof(CacheKey)) < 0;
  }
};

std::map<CacheKey, ThresholdSample>& sample_cache() {
  static std::map<CacheKey, ThresholdSample> cache;
  return cache;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

} // namespace

double Eigenfunction2D::value(double xi1, double xi2) const {
  int cell;
  std::array<double, 3> bary;
  grid.locate(xi1, xi2, cell, bary);
  return space->eval_in_cell(coeffs, cell, bary);
}

double Eigenfunction2D::section_norm(double xi1, int n_quad) const {
  const SegmentQuadrature q = gauss_legendre(n_quad);
  double sum = 0.0;
  for (int i = 0; i < n_quad; ++i) {
    const double val = value(xi1, q.points[i]);
    sum += q.weights[i] * val * val;
  }
  return std::sqrt(sum);
}

ThresholdSample mu1(double alpha, const Numerics2D& num) {
  StripSpec spec;
  spec.alpha = alpha;
  spec.R = num.R;
  spec.artificial_bc = num.artificial_bc;
  spec.grading = num.grading;
  spec.grading_t = num.grading_t;
  spec.validate();

  const int nx = num.nx > 0 ? num.nx : auto_nx(alpha, num.R, num.ny, num.grading, num.grading_t);
  StripMeshData grid = build_strip(spec, nx, num.ny);

  auto space = std::make_shared<FeSpace>(build_space(grid.mesh, num.order, spec.artificial_bc));
  const AssembledPair pair = assemble(*space);
  const EigenSolveResult eig = smallest_eigenpairs(pair, 1, num.tol);

  auto ef = std::make_shared<Eigenfunction2D>();
  ef->grid = grid;
  ef->space = space;
  ef->coeffs = expand_free_vector(*space, pair, eig.vectors.col(0));
  ef->mu1 = eig.values[0];
  // The solver returns unit M-norm with the largest entry positive; for
  // the first eigenfunction that makes the whole interior positive.
  if (ef->coeffs.sum() < 0.0) ef->coeffs = -ef->coeffs;

  ThresholdSample sample;
  sample.alpha = alpha;
  sample.mu1 = eig.values[0];
  sample.R = num.R;
  sample.nx = nx;
  sample.ny = num.ny;
  sample.order = num.order;
  sample.residual = eig.residuals[0];
  sample.eigenfunction = ef;
  return sample;
}

std::vector<ThresholdSample> threshold_curve(const std::vector<double>& alphas,
                                             const Numerics2D& num) {
  if (alphas.empty()) throw ValidationError("threshold_curve: empty angle list");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] < M_PI / 2.0)) {
      throw ValidationError("threshold_curve: angles must lie in (0, pi/2)");
    }
    if (i > 0 && !(alphas[i] > alphas[i - 1])) {
      throw ValidationError("threshold_curve: angles must be strictly increasing");
    }
  }
  std::vector<ThresholdSample> out;
  out.reserve(alphas.size());
  for (const double a : alphas) out.push_back(mu1(a, num));
  return out;
}

ThresholdSample lambda_dagger_sample(const KappaPair& kappa, const Numerics2D& num) {
  const double alpha1 = kappa.alpha1();
  const int nx = num.nx > 0 ? num.nx : auto_nx(alpha1, num.R, num.ny, num.grading, num.grading_t);
  const CacheKey key{alpha1,    num.R,  num.grading, num.grading_t, num.tol,
                     nx,        num.ny, num.order,   static_cast<int>(num.artificial_bc)};
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = sample_cache().find(key);
    if (it != sample_cache().end()) return it->second;
  }
  ThresholdSample sample = mu1(alpha1, num);
  std::lock_guard<std::mutex> lock(cache_mutex());
  return sample_cache().emplace(key, std::move(sample)).first->second;
}

double lambda_dagger(const KappaPair& kappa, const Numerics2D& num) {
  if (kappa.kappa1 == 0.0) return M_PI * M_PI; // straight edge: threshold in closed form
  return lambda_dagger_sample(kappa, num).mu1;
}

double mu1_truncated(double alpha2, double R, const Numerics2D& num) {
  // The reflection xi2 -> 1 - xi2 maps the strip of angle -alpha onto
  // the strip of angle alpha (up to translation), so mu1(-a) = mu1(a).
  Numerics2D local = num;
  local.R = R;
  local.artificial_bc = ArtificialBc::Dirichlet; // Dirichlet cut by definition
  return mu1(std::abs(alpha2), local).mu1;
}

double decay_rate(const Eigenfunction2D& v, double mu1_value) {
  const double pi2 = M_PI * M_PI;
  if (!(mu1_value < pi2)) {
    throw ValidationError("decay_rate: mu1 >= pi^2, nothing decays");
  }
  const double ta = std::tan(v.grid.spec.alpha);
  const double R = v.grid.spec.R;
  // Far half of the strip, minus a buffer where the artificial Dirichlet
  // cut distorts the profile.
  const double x_lo = ta + 0.5 * (R - ta);
  const double x_hi = R - 1.5;
  const int n_sections = 16;
  if (!(x_hi - x_lo > 0.5)) throw ValidationError("decay_rate: strip too short for a fit");

  std::vector<double> xs, logs;
  for (int i = 0; i < n_sections; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / (n_sections - 1.0);
    const double norm = v.section_norm(x);
    if (norm < 1e-8) continue; // below solver noise floor
    xs.push_back(x);
    logs.push_back(std::log(norm));
  }
  if (xs.size() < 4) throw ValidationError("decay_rate: too few usable cross-sections");

  // Least-squares slope of log ||v(x, .)||.
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += logs[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * logs[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

} // namespace incisor

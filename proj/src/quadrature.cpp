#include "incisor/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace incisor {

namespace {

SimplexQuadrature make_triangle_degree2() {
  // Interior 3-point rule, exact to degree 2.
  SimplexQuadrature q;
  const double a = 1.0 / 6.0;
  const double b = 2.0 / 3.0;
  q.points = {{a, a, 0.0}, {b, a, 0.0}, {a, b, 0.0}};
  q.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return q;
}

SimplexQuadrature make_triangle_degree5() {
  // 7-point symmetric rule (centroid + two 3-orbits), exact to degree 5.
  SimplexQuadrature q;
  const double w0 = 9.0 / 40.0;
  const double a1 = (6.0 - std::sqrt(15.0)) / 21.0;
  const double w1 = (155.0 - std::sqrt(15.0)) / 1200.0;
  const double a2 = (6.0 + std::sqrt(15.0)) / 21.0;
  const double w2 = (155.0 + std::sqrt(15.0)) / 1200.0;
  auto orbit3 = [&q](double a, double w) {
    const double c = 1.0 - 2.0 * a;
    q.points.push_back({a, a, 0.0});
    q.points.push_back({c, a, 0.0});
    q.points.push_back({a, c, 0.0});
    q.weights.insert(q.weights.end(), 3, w);
  };
  q.points.push_back({1.0 / 3.0, 1.0 / 3.0, 0.0});
  q.weights.push_back(w0);
  orbit3(a1, w1);
  orbit3(a2, w2);
  return q;
}

SimplexQuadrature make_tet_degree2() {
  // 4-point rule at the (5 +- 3 sqrt 5)/20 orbit, exact to degree 2.
  SimplexQuadrature q;
  const double a = (5.0 + 3.0 * std::sqrt(5.0)) / 20.0;
  const double b = (5.0 - std::sqrt(5.0)) / 20.0;
  q.points = {{a, b, b}, {b, a, b}, {b, b, a}, {b, b, b}};
  q.weights = {0.25, 0.25, 0.25, 0.25};
  return q;
}

SimplexQuadrature make_tet_degree5() {
  // 14-point positive rule (two 4-orbits plus one 6-orbit), exact to
  // degree 5.
  SimplexQuadrature q;
  auto orbit4 = [&q](double a, double w) {
    const double d = 1.0 - 3.0 * a;
    q.points.push_back({a, a, a});
    q.points.push_back({d, a, a});
    q.points.push_back({a, d, a});
    q.points.push_back({a, a, d});
    q.weights.insert(q.weights.end(), 4, w);
  };
  auto orbit6 = [&q](double a, double w) {
    const double b = 0.5 - a;
    // all placements of (a,a,b,b) barycentric -> reference coords drop
    // the first barycentric coordinate
    q.points.push_back({a, b, b});
    q.points.push_back({b, a, b});
    q.points.push_back({b, b, a});
    q.points.push_back({a, a, b});
    q.points.push_back({a, b, a});
    q.points.push_back({b, a, a});
    q.weights.insert(q.weights.end(), 6, w);
  };
  orbit4(0.3108859192633005, 0.1126879257180162);
  orbit4(0.0927352503108912, 0.0734930431163619);
  orbit6(0.0455037041256497, 0.0425460207770812);
  return q;
}

} // namespace

const SimplexQuadrature& simplex_quadrature(int dim, int degree) {
  static const SimplexQuadrature tri2 = make_triangle_degree2();
  static const SimplexQuadrature tri5 = make_triangle_degree5();
  static const SimplexQuadrature tet2 = make_tet_degree2();
  static const SimplexQuadrature tet5 = make_tet_degree5();
  if (dim == 2) {
    if (degree <= 2) return tri2;
    if (degree <= 5) return tri5;
  } else if (dim == 3) {
    if (degree <= 2) return tet2;
    if (degree <= 5) return tet5;
  }
  throw std::invalid_argument("simplex_quadrature: unsupported dim/degree");
}

SegmentQuadrature gauss_legendre(int n) {
  // Nodes via Newton iteration on P_n, then mapped from [-1,1] to [0,1].
  SegmentQuadrature q;
  q.points.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.points[n - 1 - i] = 0.5 * (1.0 + x);
    q.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

} // namespace incisor

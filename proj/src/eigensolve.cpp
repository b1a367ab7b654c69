#include "incisor/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "incisor/errors.hpp"

namespace incisor {

namespace {

struct Workspace {
  const Eigen::SparseMatrix<double>& K;
  const Eigen::SparseMatrix<double>& M;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;

  explicit Workspace(const AssembledPair& pair) : K(pair.K), M(pair.M) {
    ldlt.compute(K);
    if (ldlt.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "sparse LDLT factorization of K failed (n=" << K.rows()
          << ", nnz=" << K.nonZeros() << ")";
      throw SolverError(msg.str());
    }
  }

  /// x = K^{-1} b with one step of iterative refinement.
  Eigen::VectorXd solveK(const Eigen::VectorXd& b) const {
    Eigen::VectorXd x = ldlt.solve(b);
    x += ldlt.solve(b - K * x);
    return x;
  }

  Eigen::VectorXd apply_op(const Eigen::VectorXd& q) const { return solveK(M * q); }

  double m_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return a.dot(M * b);
  }
};

void fix_sign(Eigen::Ref<Eigen::VectorXd> u) {
  Eigen::Index imax = 0;
  double vmax = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double a = std::abs(u[i]);
    if (a > vmax) {
      vmax = a;
      imax = i;
    }
  }
  if (u[imax] < 0.0) u = -u;
}

double residual_norm(const Workspace& ws, const Eigen::VectorXd& u, double lambda) {
  const Eigen::VectorXd r = ws.K * u - lambda * (ws.M * u);
  const double unorm = std::sqrt(ws.m_dot(u, u));
  return r.norm() / unorm;
}

} // namespace

EigenSolveResult smallest_eigenpairs(const AssembledPair& pair, int k, double tol) {
  const Eigen::Index n = pair.K.rows();
  if (k < 1) throw ValidationError("eigensolve: k must be >= 1");
  if (k >= n) throw ValidationError("eigensolve: k must be below the free dof count");

  Workspace ws(pair);

  const int max_basis = std::min<Eigen::Index>(5 * k + 30, n);
  const int max_restarts = 40;

  Eigen::MatrixXd locked(n, k);
  std::vector<double> locked_vals;
  int n_locked = 0;

  std::mt19937_64 rng(0x1C150DULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vector = [&]() {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
  };

  // Twice-applied classical Gram-Schmidt in the M-inner product against
  // the locked vectors and the current basis.
  auto m_orthogonalize = [&](Eigen::VectorXd& w, const Eigen::MatrixXd& Q, int nq) {
    Eigen::VectorXd Mw = ws.M * w;
    for (int pass = 0; pass < 2; ++pass) {
      if (n_locked > 0) {
        const auto L = locked.leftCols(n_locked);
        w -= L * (L.transpose() * Mw);
      }
      if (nq > 0) {
        const auto Qv = Q.leftCols(nq);
        w -= Qv * (Qv.transpose() * Mw);
      }
      Mw = ws.M * w;
    }
    return std::sqrt(w.dot(Mw));
  };

  EigenSolveResult result;
  Eigen::VectorXd start = random_vector();

  int total_steps = 0;
  for (int restart = 0; restart < max_restarts && n_locked < k; ++restart) {
    const int m = std::min<Eigen::Index>(max_basis, n - n_locked);
    Eigen::MatrixXd Q(n, m);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);

    Eigen::VectorXd q = start;
    double qn = m_orthogonalize(q, Q, 0);
    while (qn < 1e-12) { // degenerate start, try a fresh direction
      q = random_vector();
      qn = m_orthogonalize(q, Q, 0);
    }
    q /= qn;
    Q.col(0) = q;

    int built = 1;
    bool extracted = false;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd w = ws.apply_op(Q.col(j));
      ++total_steps;
      alpha[j] = ws.m_dot(w, Q.col(j));
      const double bn = m_orthogonalize(w, Q, built);
      if (j + 1 < m) {
        if (bn < 1e-12) {
          // Krylov space exhausted: pad with a deflated random vector.
          w = random_vector();
          const double rn = m_orthogonalize(w, Q, built);
          if (rn < 1e-12) break;
          w /= rn;
          beta[j] = 0.0;
        } else {
          w /= bn;
          beta[j] = bn;
        }
        Q.col(j + 1) = w;
        built = j + 2;
      }

      // Periodic convergence probe on the tridiagonal Ritz estimates.
      const bool last = (j + 1 == m);
      if (!last && ((j + 1) % 10 != 0 || j + 1 <= k - n_locked)) continue;

      const int js = j + 1;
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(js, js);
      for (int i = 0; i < js; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < js) T(i, i + 1) = T(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      // Largest theta of K^{-1}M correspond to the smallest lambda.
      const int want = std::min(k - n_locked, js);
      bool estimates_ok = true;
      for (int i = 0; i < want; ++i) {
        const int col = js - 1 - i;
        const double theta = es.eigenvalues()[col];
        if (theta <= 0.0) {
          estimates_ok = false;
          break;
        }
        const double est = std::abs(beta[js - 1] * es.eigenvectors()(js - 1, col)) / theta;
        if (js < m && est > 0.1 * tol) {
          estimates_ok = false;
          break;
        }
      }
      if (!estimates_ok && !last) continue;

      // True-residual extraction; it ends the pass, so converged pairs
      // are locked at most once and restarts run deflated against them.
      Eigen::VectorXd next_start;
      for (int i = 0; i < want; ++i) {
        const int col = js - 1 - i;
        const double theta = es.eigenvalues()[col];
        if (theta <= 0.0) continue;
        Eigen::VectorXd u = Q.leftCols(js) * es.eigenvectors().col(col);
        const double un = std::sqrt(ws.m_dot(u, u));
        if (un < 1e-14) continue;
        u /= un;
        double lambda = u.dot(ws.K * u) / ws.m_dot(u, u);
        double res = residual_norm(ws, u, lambda);
        // Inverse-iteration polish for the bottom candidate.
        if (res > tol && i == 0) {
          for (int polish = 0; polish < 3 && res > tol; ++polish) {
            u = ws.apply_op(u);
            const double pn = m_orthogonalize(u, Q, 0);
            if (pn < 1e-14) break;
            u /= pn;
            lambda = u.dot(ws.K * u) / ws.m_dot(u, u);
            res = residual_norm(ws, u, lambda);
          }
        }
        if (res <= tol) {
          locked.col(n_locked) = u;
          locked_vals.push_back(lambda);
          ++n_locked;
          if (n_locked >= k) break;
        } else if (next_start.size() == 0) {
          next_start = u;
        }
      }
      start = next_start.size() > 0 ? next_start : random_vector();
      extracted = true;
      break;
    }
    if (!extracted && n_locked < k) start = random_vector();
  }

  if (n_locked < k) {
    std::ostringstream msg;
    msg << "Lanczos did not converge: " << n_locked << "/" << k << " pairs after "
        << total_steps << " steps (tol=" << tol << ")";
    throw SolverError(msg.str());
  }

  // Sort locked pairs ascending and apply the sign convention.
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return locked_vals[a] < locked_vals[b]; });

  result.values.resize(k);
  result.residuals.resize(k);
  result.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd u = locked.col(order[i]);
    fix_sign(u);
    const double lambda = locked_vals[order[i]];
    result.values[i] = lambda;
    result.vectors.col(i) = u;
    result.residuals[i] = residual_norm(ws, u, lambda);
  }
  result.iterations = total_steps;
  return result;
}

EigenSolveResult dense_oracle(const AssembledPair& pair) {
  const Eigen::Index n = pair.K.rows();
  if (n > 4000) throw ValidationError("dense_oracle: free dof count exceeds 4000");

  Eigen::MatrixXd Kd(pair.K);
  Eigen::MatrixXd Md(pair.M);
  Eigen::LLT<Eigen::MatrixXd> llt(Md);
  if (llt.info() != Eigen::Success) {
    throw SolverError("dense_oracle: mass matrix is not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(Kd);
  C = L.triangularView<Eigen::Lower>().solve(C.transpose()).transpose();
  C = ((C + C.transpose()) * 0.5).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) {
    throw SolverError("dense_oracle: dense symmetric eigensolve failed");
  }

  EigenSolveResult result;
  result.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  result.vectors = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
  result.residuals.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd u = result.vectors.col(i);
    fix_sign(u);
    result.vectors.col(i) = u;
    const Eigen::VectorXd r = pair.K * u - result.values[i] * (pair.M * u);
    result.residuals[i] = r.norm() / std::sqrt(u.dot(pair.M * u));
  }
  result.iterations = 0;
  return result;
}

} // namespace incisor

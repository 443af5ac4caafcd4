// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "helmix/sparse.hpp"

namespace helmix {

struct SolveConfig {
  int restart = 5;
  double tol = 1e-6;
  int max_applications = 250;
  double alpha = 0.2;  // complex shift used by the preconditioner hierarchy

  void validate() const {
    if (restart < 1) throw std::invalid_argument("SolveConfig: restart must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("SolveConfig: tol must be positive");
    if (max_applications < 1)
      throw std::invalid_argument("SolveConfig: max_applications must be >= 1");
    if (alpha < 0.0) throw std::invalid_argument("SolveConfig: alpha must be nonnegative");
  }
};

struct SolveReport {
  int iterations = 0;  // preconditioner applications
  std::vector<double> residual_history;  // relative residuals, starts at ||b||/||b|| = 1
  bool converged = false;
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
};

using LinOp = std::function<void(const std::vector<cplx>&, std::vector<cplx>&)>;

inline LinOp identity_op() {
  return [](const std::vector<cplx>& x, std::vector<cplx>& y) { y = x; };
}

inline LinOp matrix_op(const ComplexSparseMatrix& a) {
  return [&a](const std::vector<cplx>& x, std::vector<cplx>& y) { spmv(a, x, y); };
}

// Restarted flexible GMRES, right preconditioning, zero initial guess.
// Iterations are counted as preconditioner applications; the residual history
// carries the Arnoldi least-squares estimates with the true residual spliced
// in at every restart boundary.
inline std::vector<cplx> fgmres(const LinOp& apply_a, const std::vector<cplx>& rhs,
                                const LinOp& precond, const SolveConfig& cfg,
                                SolveReport& report) {
  cfg.validate();
  const std::size_t n = rhs.size();
  const int m = cfg.restart;
  std::vector<cplx> x(n, cplx(0.0, 0.0));
  report.iterations = 0;
  report.converged = false;
  report.residual_history.clear();

  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    report.converged = true;
    report.residual_history.push_back(0.0);
    return x;
  }
  report.residual_history.push_back(1.0);

  std::vector<std::vector<cplx>> v(static_cast<std::size_t>(m) + 1);
  std::vector<std::vector<cplx>> z(static_cast<std::size_t>(m));
  std::vector<std::vector<cplx>> hcol(static_cast<std::size_t>(m));  // rotated columns
  std::vector<cplx> gs(static_cast<std::size_t>(m) + 1);
  std::vector<double> cs(static_cast<std::size_t>(m));
  std::vector<cplx> sn(static_cast<std::size_t>(m));
  std::vector<cplx> r = rhs;  // residual of the zero initial guess
  std::vector<cplx> w(n);

  double true_rel = 1.0;
  while (true) {
    const double beta = norm2(r);
    true_rel = beta / bnorm;
    if (true_rel <= cfg.tol) {
      report.converged = true;
      break;
    }
    if (report.iterations >= cfg.max_applications) break;

    v[0] = r;
    for (auto& vi : v[0]) vi /= beta;
    std::fill(gs.begin(), gs.end(), cplx(0.0, 0.0));
    gs[0] = cplx(beta, 0.0);

    int cols = 0;
    bool breakdown = false;
    for (int j = 0; j < m; ++j) {
      z[j].resize(n);
      precond(v[j], z[j]);
      ++report.iterations;
      apply_a(z[j], w);
      if (!all_finite(w) || !all_finite(z[j]))
        throw std::runtime_error("fgmres: non-finite value after " +
                                 std::to_string(report.iterations) +
                                 " preconditioner applications");

      hcol[j].assign(static_cast<std::size_t>(j) + 2, cplx(0.0, 0.0));
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        const cplx hij = dot(v[i], w);
        hcol[j][static_cast<std::size_t>(i)] = hij;
        axpy(-hij, v[i], w);
      }
      const double hlast = norm2(w);
      hcol[j][static_cast<std::size_t>(j) + 1] = cplx(hlast, 0.0);

      for (int i = 0; i < j; ++i) {  // previously accumulated rotations
        const cplx t = cs[i] * hcol[j][i] + sn[i] * hcol[j][i + 1];
        hcol[j][i + 1] = -std::conj(sn[i]) * hcol[j][i] + cs[i] * hcol[j][i + 1];
        hcol[j][i] = t;
      }
      const cplx a = hcol[j][static_cast<std::size_t>(j)];
      const double b = hlast;
      if (std::abs(a) == 0.0) {
        cs[j] = 0.0;
        sn[j] = cplx(1.0, 0.0);
      } else {
        const double denom = std::sqrt(std::norm(a) + b * b);
        cs[j] = std::abs(a) / denom;
        sn[j] = (a / std::abs(a)) * (b / denom);
      }
      hcol[j][static_cast<std::size_t>(j)] = cs[j] * a + sn[j] * b;
      hcol[j][static_cast<std::size_t>(j) + 1] = cplx(0.0, 0.0);
      gs[static_cast<std::size_t>(j) + 1] = -std::conj(sn[j]) * gs[static_cast<std::size_t>(j)];
      gs[static_cast<std::size_t>(j)] = cs[j] * gs[static_cast<std::size_t>(j)];

      const double est = std::abs(gs[static_cast<std::size_t>(j) + 1]);
      report.residual_history.push_back(est / bnorm);
      cols = j + 1;

      if (hlast <= 1e-14 * beta) {  // happy breakdown
        breakdown = true;
        break;
      }
      v[j + 1] = w;
      for (auto& vi : v[j + 1]) vi /= hlast;
      if (est / bnorm <= cfg.tol || report.iterations >= cfg.max_applications) break;
    }

    // Back substitution on the rotated (upper triangular) Hessenberg.
    std::vector<cplx> y(static_cast<std::size_t>(cols));
    for (int i = cols - 1; i >= 0; --i) {
      cplx s = gs[static_cast<std::size_t>(i)];
      for (int k = i + 1; k < cols; ++k) s -= hcol[k][static_cast<std::size_t>(i)] * y[k];
      const cplx d = hcol[i][static_cast<std::size_t>(i)];
      // A zero pivot only occurs on a fully degenerate (lucky-zero) column.
      y[static_cast<std::size_t>(i)] = std::abs(d) == 0.0 ? cplx(0.0, 0.0) : s / d;
    }
    for (int i = 0; i < cols; ++i) axpy(y[static_cast<std::size_t>(i)], z[i], x);

    apply_a(x, w);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - w[i];
    // Splice the true residual over the last estimate so the reported tail is
    // exactly the recomputable value.
    report.residual_history.back() = norm2(r) / bnorm;
    (void)breakdown;
  }
  return x;
}

inline std::vector<cplx> fgmres(const LinOp& apply_a, const std::vector<cplx>& rhs,
                                const SolveConfig& cfg, SolveReport& report) {
  return fgmres(apply_a, rhs, identity_op(), cfg, report);
}

}  // namespace helmix

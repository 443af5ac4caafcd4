// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Dense>
#include <catch_amalgamated.hpp>

#include "helmix/krylov.hpp"
#include "test_util.hpp"

using namespace helmix;

namespace {

// Reference right-preconditioned (non-flexible) GMRES(m) with a fixed linear
// preconditioner, used as a cross-check: with a fixed preconditioner the
// flexible variant must agree to rounding.
std::vector<cplx> reference_gmres(const ComplexSparseMatrix& a, const ComplexSparseMatrix& minv,
                                  const std::vector<cplx>& rhs, int m, double tol, int cap) {
  const std::size_t n = rhs.size();
  std::vector<cplx> x(n, cplx(0.0, 0.0));
  const double bnorm = norm2(rhs);
  int count = 0;
  std::vector<cplx> r = rhs;
  while (count < cap) {
    const double beta = norm2(r);
    if (beta / bnorm <= tol) break;
    std::vector<std::vector<cplx>> v{r};
    for (auto& val : v[0]) val /= beta;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m);
    int cols = 0;
    for (int j = 0; j < m && count < cap; ++j, ++count) {
      auto w = spmv(a, spmv(minv, v[static_cast<std::size_t>(j)]));
      for (int i = 0; i <= j; ++i) {
        h(i, j) = dot(v[static_cast<std::size_t>(i)], w);
        axpy(-h(i, j), v[static_cast<std::size_t>(i)], w);
      }
      h(j + 1, j) = norm2(w);
      cols = j + 1;
      if (std::abs(h(j + 1, j)) < 1e-14 * beta) break;
      for (auto& val : w) val /= h(j + 1, j).real();
      v.push_back(w);
    }
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(cols + 1);
    g(0) = beta;
    const Eigen::MatrixXcd hs = h.topLeftCorner(cols + 1, cols);
    const Eigen::VectorXcd y =
        hs.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(g);
    std::vector<cplx> z(n, cplx(0.0, 0.0));
    for (int i = 0; i < cols; ++i) axpy(y(i), v[static_cast<std::size_t>(i)], z);
    const auto mz = spmv(minv, z);
    for (std::size_t i = 0; i < n; ++i) x[i] += mz[i];
    const auto ax = spmv(a, x);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ax[i];
  }
  return x;
}

}  // namespace

TEST_CASE("identity system with identity preconditioner converges in one application") {
  const std::size_t n = 20;
  const auto rhs = helmix_test::random_complex(n, 3);
  SolveConfig cfg;
  SolveReport rep;
  const auto x = fgmres(
      [](const std::vector<cplx>& in, std::vector<cplx>& out) { out = in; }, rhs,
      identity_op(), cfg, rep);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x[i] - rhs[i]) < 1e-14);
  CHECK(rep.residual_history.back() < 1e-14);
}

TEST_CASE("unpreconditioned FGMRES(5) matches a dense direct solve") {
  const index_t n = 50;
  auto a = helmix_test::random_sparse(n, n, 1.0, 77);  // dense-as-sparse random matrix
  for (index_t i = 0; i < n; ++i) *a.find(i, i) += cplx(10.0, 2.0);
  const auto rhs = helmix_test::random_complex(static_cast<std::size_t>(n), 78);

  SolveConfig cfg;
  cfg.restart = 5;
  cfg.tol = 1e-12;
  cfg.max_applications = 2000;
  SolveReport rep;
  const auto x = fgmres(matrix_op(a), rhs, cfg, rep);
  REQUIRE(rep.converged);

  const Eigen::VectorXcd want =
      helmix_test::to_dense(a).partialPivLu().solve(helmix_test::to_eigen(rhs));
  double num = 0.0, den = 0.0;
  for (index_t i = 0; i < n; ++i) {
    num += std::norm(x[static_cast<std::size_t>(i)] - want(i));
    den += std::norm(want(i));
  }
  CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("diagonal system with its exact inverse converges in one application") {
  const std::size_t n = 30;
  auto d = helmix_test::random_complex(n, 81);
  for (auto& v : d) v += cplx(4.0, 0.0);
  const auto a = ComplexSparseMatrix::diagonal(d);
  std::vector<cplx> inv = d;
  for (auto& v : inv) v = 1.0 / v;
  const auto minv = ComplexSparseMatrix::diagonal(inv);
  const auto rhs = helmix_test::random_complex(n, 82);
  SolveConfig cfg;
  SolveReport rep;
  fgmres(matrix_op(a), rhs, matrix_op(minv), cfg, rep);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
}

TEST_CASE("residual history is monotone and its tail is the true residual") {
  const index_t n = 60;
  auto a = add(helmix_test::random_sparse(n, n, 0.3, 91),
               ComplexSparseMatrix::diagonal(
                   std::vector<cplx>(static_cast<std::size_t>(n), cplx(6.0, 1.0))));
  const auto rhs = helmix_test::random_complex(static_cast<std::size_t>(n), 92);
  SolveConfig cfg;
  cfg.restart = 5;
  cfg.tol = 1e-9;
  cfg.max_applications = 500;
  SolveReport rep;
  const auto x = fgmres(matrix_op(a), rhs, cfg, rep);
  REQUIRE(rep.converged);
  REQUIRE(rep.residual_history.size() == static_cast<std::size_t>(rep.iterations) + 1);

  // nonincreasing within restart cycles and across boundaries (rounding slack)
  for (std::size_t i = 1; i < rep.residual_history.size(); ++i)
    CHECK(rep.residual_history[i] <= rep.residual_history[i - 1] * (1.0 + 1e-9) + 1e-15);

  // the reported tail equals an independently recomputed relative residual
  auto r = spmv(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
  const double true_rel = norm2(r) / norm2(rhs);
  CHECK(std::abs(true_rel - rep.residual_history.back()) <=
        1e-12 * std::max(true_rel, rep.residual_history.back()));
}

TEST_CASE("flexible and standard right-preconditioned GMRES agree for a fixed preconditioner") {
  const index_t n = 40;
  auto a = add(helmix_test::random_sparse(n, n, 0.4, 101),
               ComplexSparseMatrix::diagonal(
                   std::vector<cplx>(static_cast<std::size_t>(n), cplx(5.0, -1.0))));
  // fixed diagonal preconditioner
  std::vector<cplx> inv(static_cast<std::size_t>(n));
  for (index_t i = 0; i < n; ++i) inv[static_cast<std::size_t>(i)] = 1.0 / a.coeff(i, i);
  const auto minv = ComplexSparseMatrix::diagonal(inv);
  const auto rhs = helmix_test::random_complex(static_cast<std::size_t>(n), 102);

  SolveConfig cfg;
  cfg.restart = 6;
  cfg.tol = 1e-11;
  cfg.max_applications = 400;
  SolveReport rep;
  const auto xf = fgmres(matrix_op(a), rhs, matrix_op(minv), cfg, rep);
  REQUIRE(rep.converged);
  const auto xs = reference_gmres(a, minv, rhs, 6, 1e-11, 400);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xf.size(); ++i) {
    num += std::norm(xf[i] - xs[i]);
    den += std::norm(xs[i]);
  }
  CHECK(std::sqrt(num / den) < 1e-8);
}

TEST_CASE("iteration cap reports non-convergence with count equal to the cap") {
  const index_t n = 64;
  auto a = add(helmix_test::random_sparse(n, n, 0.25, 111),
               ComplexSparseMatrix::diagonal(
                   std::vector<cplx>(static_cast<std::size_t>(n), cplx(0.5, 3.0))));
  const auto rhs = helmix_test::random_complex(static_cast<std::size_t>(n), 112);
  SolveConfig cfg;
  cfg.restart = 5;
  cfg.tol = 1e-30;  // unreachable
  cfg.max_applications = 37;
  SolveReport rep;
  fgmres(matrix_op(a), rhs, cfg, rep);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 37);
}

TEST_CASE("non-finite values abort with a diagnostic") {
  const std::size_t n = 8;
  const auto rhs = helmix_test::random_complex(n, 121);
  const LinOp bad = [](const std::vector<cplx>& in, std::vector<cplx>& out) {
    out = in;
    out[0] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
  };
  SolveConfig cfg;
  SolveReport rep;
  CHECK_THROWS_AS(fgmres(bad, rhs, cfg, rep), std::runtime_error);
}

TEST_CASE("zero right-hand side returns the zero solution immediately") {
  const std::vector<cplx> rhs(10, cplx(0.0, 0.0));
  SolveConfig cfg;
  SolveReport rep;
  const auto x = fgmres(identity_op(), rhs, cfg, rep);
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(norm2(x) == 0.0);
}

TEST_CASE("config validation") {
  SolveConfig cfg;
  cfg.restart = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolveConfig{};
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolveConfig{};
  cfg.alpha = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

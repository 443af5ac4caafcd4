// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Dense>
#include <catch_amalgamated.hpp>

#include "helmix/assembly.hpp"
#include "helmix/smoothers.hpp"
#include "test_util.hpp"

using namespace helmix;
using helmix_test::to_dense;

namespace {

MixedSystem smooth_test_system(const Grid& g, double omega, double alpha) {
  auto m = make_constant_model(g, 1.0, 1.0, 2.0);
  for (long c = 0; c < g.cell_count(); ++c) {
    const auto cc = g.cell_coords(c);
    const std::size_t i = static_cast<std::size_t>(c);
    m.rho[i] = 1.0 + 0.2 * std::sin(0.7 * cc[0]) * std::cos(0.4 * cc[1]);
    m.mu[i] = 0.8 + 0.3 * std::cos(0.5 * cc[0] + 0.3 * cc[1]);
    m.lambda[i] = 1.5 + 0.4 * std::sin(0.3 * cc[1]);
  }
  return shifted(assemble_mixed(g, m, omega), alpha);
}

std::vector<cplx> checkerboard_error(const Grid& g) {
  std::vector<cplx> e(static_cast<std::size_t>(g.displacement_count() + g.cell_count()));
  for (int d = 0; d < g.dim(); ++d) {
    const auto fd = g.face_dims(d);
    for (int k = 0; k < fd[2]; ++k)
      for (int j = 0; j < fd[1]; ++j)
        for (int i = 0; i < fd[0]; ++i)
          e[static_cast<std::size_t>(g.face_index(d, {i, j, k}))] =
              cplx(((i + j + k) % 2 == 0) ? 1.0 : -1.0, 0.0);
  }
  for (long c = 0; c < g.cell_count(); ++c) {
    const auto cc = g.cell_coords(c);
    e[static_cast<std::size_t>(g.displacement_count() + c)] =
        cplx(((cc[0] + cc[1] + cc[2]) % 2 == 0) ? 1.0 : -1.0, 0.0);
  }
  return e;
}

}  // namespace

TEST_CASE("vanka_setup on the identity operator yields identity inverses") {
  const Grid g({4, 3}, {0.5, 0.5});
  const long n = g.displacement_count() + g.cell_count();
  const auto blocks =
      vanka_setup(ComplexSparseMatrix::identity(static_cast<index_t>(n)), g,
                  BlockPrecision::Double);
  for (long c = 0; c < g.cell_count(); ++c) {
    const int k = blocks.block_size(c);
    for (int r = 0; r < k; ++r)
      for (int cc = 0; cc < k; ++cc) {
        const cplx v = blocks.inverse_entry(blocks.inv_offsets[c], k, r, cc);
        CHECK(std::abs(v - (r == cc ? cplx(1.0, 0.0) : cplx(0.0, 0.0))) < 1e-15);
      }
  }
}

TEST_CASE("block unknown counts: interior cells carry 2*dim+1, a 2x2 grid carries 3") {
  SECTION("2x2 grid: every block has exactly 3 unknowns") {
    const Grid g({2, 2}, {1.0, 1.0});
    const auto sys = smooth_test_system(g, 1.0, 0.5);
    const auto blocks = vanka_setup(sys.A, g);
    for (long c = 0; c < 4; ++c) CHECK(blocks.block_size(c) == 3);
  }
  SECTION("interior 2D cells carry 5 unknowns, interior 3D cells 7") {
    const Grid g2({4, 4}, {1.0, 1.0});
    const auto b2 = vanka_setup(
        ComplexSparseMatrix::identity(
            static_cast<index_t>(g2.displacement_count() + g2.cell_count())),
        g2);
    CHECK(b2.block_size(g2.cell_index({1, 1, 0})) == 5);
    CHECK(b2.block_size(g2.cell_index({0, 0, 0})) == 3);

    const Grid g3({4, 4, 4}, {1.0, 1.0, 1.0});
    const auto b3 = vanka_setup(
        ComplexSparseMatrix::identity(
            static_cast<index_t>(g3.displacement_count() + g3.cell_count())),
        g3);
    CHECK(b3.block_size(g3.cell_index({1, 2, 1})) == 7);
    CHECK(b3.block_size(g3.cell_index({0, 0, 0})) == 4);
  }
}

TEST_CASE("stored inverses reproduce the identity within the precision tolerance") {
  const Grid g({8, 6}, {1.0, 1.0});
  const auto sys = smooth_test_system(g, 2.0, 0.5);
  const auto dense = to_dense(sys.A);

  const std::pair<BlockPrecision, double> cases[] = {{BlockPrecision::Half, 1e-2},
                                                     {BlockPrecision::Single, 1e-5},
                                                     {BlockPrecision::Double, 1e-12}};
  for (const auto& [prec, tol] : cases) {
    const auto blocks = vanka_setup(sys.A, g, prec);
    double worst = 0.0;
    for (long c = 0; c < g.cell_count(); ++c) {
      const int k = blocks.block_size(c);
      const index_t* idx = &blocks.unknown_indices[blocks.cell_index_offsets[c]];
      Eigen::MatrixXcd local(k, k), inv(k, k);
      for (int r = 0; r < k; ++r)
        for (int cc = 0; cc < k; ++cc) {
          local(r, cc) = dense(idx[r], idx[cc]);
          inv(r, cc) = blocks.inverse_entry(blocks.inv_offsets[c], k, r, cc);
        }
      const Eigen::MatrixXcd res = inv * local - Eigen::MatrixXcd::Identity(k, k);
      worst = std::max(worst, res.cwiseAbs().maxCoeff());
    }
    CHECK(worst < tol);
  }
}

TEST_CASE("vanka_sweep leaves the exact solution unchanged") {
  const Grid g({6, 4}, {1.0, 1.0});
  const auto sys = smooth_test_system(g, 2.0, 0.5);
  const auto blocks = vanka_setup(sys.A, g, BlockPrecision::Double);
  const auto x = helmix_test::random_complex(static_cast<std::size_t>(sys.A.nrows), 21);
  const auto rhs = spmv(sys.A, x);
  auto u = x;
  vanka_sweep(sys.A, blocks, u, rhs, 0.7);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(u[i] - x[i]) < 1e-12);
}

TEST_CASE("single-cell domain with damping 1 is solved in one sweep") {
  const Grid g({1, 1}, {1.0, 1.0});
  auto m = make_constant_model(g, 1.0, 1.0, 2.0);
  const auto sys = assemble_mixed(g, m, 1.0);
  REQUIRE(sys.A.nrows == 1);  // no interior faces, one pressure unknown
  const auto blocks = vanka_setup(sys.A, g);
  std::vector<cplx> u{cplx(0.0, 0.0)};
  const std::vector<cplx> rhs{cplx(2.0, -1.0)};
  vanka_sweep(sys.A, blocks, u, rhs, 1.0);
  CHECK(std::abs(u[0] - rhs[0] / sys.A.values[0]) < 1e-12);
}

TEST_CASE("residual norm decreases over sweeps on a shifted system") {
  const Grid g({16, 8}, {1.0, 1.0});
  const auto m = make_constant_model(g, 1.0, 1.0, 2.0);
  const auto sys = shifted(assemble_mixed(g, m, 2.0), 0.5);
  const auto blocks = vanka_setup(sys.A, g);
  const auto rhs = helmix_test::random_complex(static_cast<std::size_t>(sys.A.nrows), 33);
  std::vector<cplx> u(rhs.size(), cplx(0.0, 0.0));
  auto residual_norm = [&]() {
    auto r = spmv(sys.A, u);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
    return norm2(r);
  };
  double prev = residual_norm();
  for (int s = 0; s < 5; ++s) {
    vanka_sweep(sys.A, blocks, u, rhs, 0.5);
    const double cur = residual_norm();
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("same-color cells share no unknowns") {
  for (const Grid& g : {Grid({5, 4}, {1.0, 1.0}), Grid({4, 3, 3}, {1.0, 1.0, 1.0})}) {
    const long n = g.displacement_count() + g.cell_count();
    const auto blocks =
        vanka_setup(ComplexSparseMatrix::identity(static_cast<index_t>(n)), g);
    for (const auto& cells : {blocks.red_cells, blocks.black_cells}) {
      std::vector<int> seen(static_cast<std::size_t>(n), 0);
      for (const index_t c : cells) {
        const int k = blocks.block_size(c);
        const index_t* idx = &blocks.unknown_indices[blocks.cell_index_offsets[c]];
        for (int i = 0; i < k; ++i) {
          CHECK(seen[static_cast<std::size_t>(idx[i])] == 0);
          seen[static_cast<std::size_t>(idx[i])] = 1;
        }
      }
    }
  }
}

TEST_CASE("a full red-black sweep is a fixed linear operator") {
  const Grid g({8, 6}, {1.0, 1.0});
  const auto sys = smooth_test_system(g, 2.0, 0.5);
  const auto blocks = vanka_setup(sys.A, g, BlockPrecision::Double);
  const std::size_t n = static_cast<std::size_t>(sys.A.nrows);
  const auto u1 = helmix_test::random_complex(n, 41);
  const auto u2 = helmix_test::random_complex(n, 43);
  const std::vector<cplx> zero(n, cplx(0.0, 0.0));

  auto s1 = u1;
  vanka_sweep(sys.A, blocks, s1, zero, 0.5);
  auto s2 = u2;
  vanka_sweep(sys.A, blocks, s2, zero, 0.5);
  std::vector<cplx> sum(n);
  for (std::size_t i = 0; i < n; ++i) sum[i] = u1[i] + u2[i];
  vanka_sweep(sys.A, blocks, sum, zero, 0.5);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err = std::max(err, std::abs(sum[i] - s1[i] - s2[i]));
    scale = std::max(scale, std::abs(sum[i]));
  }
  CHECK(err <= 1e-12 * std::max(scale, 1.0));
}

TEST_CASE("checkerboard error component shrinks by at least half per sweep at damping 0.5") {
  // The error component along the checkerboard mode (the highest-frequency
  // test error) must contract by <= 0.5 per sweep. The raw norm is not a fair
  // metric here because the pressure coupling rescales u-error into p-error.
  for (double omega : {2.0, 6.283185307179586}) {
    const Grid g({16, 8}, {1.0, 1.0});
    const auto m = make_constant_model(g, 1.0, 1.0, 2.0);
    const auto sys = shifted(assemble_mixed(g, m, omega), 0.5);
    const auto blocks = vanka_setup(sys.A, g);
    auto e = checkerboard_error(g);
    const auto e0 = e;
    const std::vector<cplx> zero(e.size(), cplx(0.0, 0.0));
    const double den = std::pow(norm2(e0), 2);
    double prev = 1.0;
    for (int s = 0; s < 3; ++s) {
      vanka_sweep(sys.A, blocks, e, zero, 0.5);
      cplx proj(0.0, 0.0);
      for (std::size_t i = 0; i < e.size(); ++i) proj += std::conj(e0[i]) * e[i];
      const double comp = std::abs(proj) / den;
      CHECK(comp <= 0.5 * prev);
      prev = comp;
    }
  }
}

TEST_CASE("sweep results are independent of the thread count") {
  // large enough that the parallel partition genuinely engages
  const Grid g({64, 48}, {1.0, 1.0});
  const auto sys = smooth_test_system(g, 2.0, 0.3);
  REQUIRE(sys.A.nrows > 4096);
  const auto blocks = vanka_setup(sys.A, g);
  const auto rhs = helmix_test::random_complex(static_cast<std::size_t>(sys.A.nrows), 55);
  std::vector<cplx> u1(rhs.size(), cplx(0.0, 0.0));
  set_thread_count(1);
  for (int s = 0; s < 3; ++s) vanka_sweep(sys.A, blocks, u1, rhs, 0.5);
  for (int threads : {3, 4, 7}) {
    std::vector<cplx> ut(rhs.size(), cplx(0.0, 0.0));
    set_thread_count(threads);
    for (int s = 0; s < 3; ++s) vanka_sweep(sys.A, blocks, ut, rhs, 0.5);
    set_thread_count(1);
    CHECK(u1 == ut);  // bit identical
  }
}

TEST_CASE("jacobi_sweep") {
  SECTION("diagonal operator with weight 1 solves in one sweep") {
    const auto d = helmix_test::random_complex(12, 61);
    std::vector<cplx> dd = d;
    for (auto& v : dd) v += cplx(3.0, 0.0);  // keep away from zero
    const auto a = ComplexSparseMatrix::diagonal(dd);
    const auto rhs = helmix_test::random_complex(12, 62);
    std::vector<cplx> u(12, cplx(0.0, 0.0));
    jacobi_sweep(a, u, rhs, 1.0);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(u[i] - rhs[i] / dd[i]) < 1e-14);
  }
  SECTION("exact input is unchanged") {
    const Grid g({6, 4}, {0.5, 0.5});
    const auto n = static_cast<std::size_t>(g.cell_count());
    const auto sys = shifted(
        assemble_acoustic(g, std::vector<double>(n, 1.0), std::vector<double>(n, 1.0),
                          std::vector<double>(n, 0.0), 2.0),
        0.5);
    const auto x = helmix_test::random_complex(n, 63);
    const auto rhs = spmv(sys.A, x);
    auto u = x;
    jacobi_sweep(sys.A, u, rhs, 0.8);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(u[i] - x[i]) < 1e-12);
  }
  SECTION("matches the dense iteration oracle") {
    const Grid g({6, 4}, {0.5, 0.5});
    const auto n = static_cast<std::size_t>(g.cell_count());
    const auto sys = shifted(
        assemble_acoustic(g, std::vector<double>(n, 1.5), std::vector<double>(n, 2.0),
                          std::vector<double>(n, 0.1), 2.0),
        0.5);
    const auto dense = to_dense(sys.A);
    const auto rhs = helmix_test::random_complex(n, 64);
    Eigen::VectorXcd u_oracle = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    const Eigen::VectorXcd b = helmix_test::to_eigen(rhs);
    std::vector<cplx> u(n, cplx(0.0, 0.0));
    for (int s = 0; s < 4; ++s) {
      jacobi_sweep(sys.A, u, rhs, 0.8);
      const Eigen::VectorXcd r = b - dense * u_oracle;
      for (Eigen::Index i = 0; i < r.size(); ++i)
        u_oracle(i) += 0.8 * r(i) / dense(i, i);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      err = std::max(err, std::abs(u[i] - u_oracle(static_cast<Eigen::Index>(i))));
    CHECK(err < 1e-13);
  }
  SECTION("zero diagonal entries are rejected") {
    std::vector<Triplet> t{{0, 1, {1.0, 0.0}}, {1, 0, {1.0, 0.0}}};
    const auto a = ComplexSparseMatrix::from_triplets(2, 2, t);
    std::vector<cplx> u(2), rhs(2);
    CHECK_THROWS_AS(jacobi_sweep(a, u, rhs, 0.8), std::runtime_error);
  }
}

TEST_CASE("vanka_setup reports singular local blocks") {
  const Grid g({2, 2}, {1.0, 1.0});
  const long n = g.displacement_count() + g.cell_count();
  std::vector<cplx> d(static_cast<std::size_t>(n), cplx(1.0, 0.0));
  d[0] = cplx(0.0, 0.0);  // zero out one face unknown entirely
  const auto a = ComplexSparseMatrix::diagonal(d);
  CHECK_THROWS_AS(vanka_setup(a, g), std::runtime_error);
}

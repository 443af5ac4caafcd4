// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "helmix/grid.hpp"
#include "helmix/smoothers.hpp"
#include "helmix/sparse.hpp"

namespace helmix {

enum class TransferLayout { Cell, FaceStaggered, Mixed };

namespace detail {

struct AxisWeights {
  int count = 0;
  std::array<std::pair<int, double>, 2> w{};
};

// d-linear cell-centered interpolation: (3/4, 1/4) between the two nearest
// coarse cells, clamped to the single neighbor at the boundary so rows keep
// summing to one.
inline AxisWeights cell_axis_weights(int fine_i, int n_coarse) {
  AxisWeights aw;
  const int primary = fine_i >> 1;
  const int neighbor = (fine_i & 1) ? primary + 1 : primary - 1;
  if (neighbor < 0 || neighbor >= n_coarse) {
    aw.w[0] = {primary, 1.0};
    aw.count = 1;
  } else {
    aw.w[0] = {primary, 0.75};
    aw.w[1] = {neighbor, 0.25};
    aw.count = 2;
  }
  return aw;
}

// Normal direction of a face field: fine planes coinciding with a coarse
// plane copy it, in-between planes average the two; eliminated boundary
// planes contribute zero (Dirichlet ghosts).
inline AxisWeights face_axis_weights(int fine_coord, int n_coarse) {
  AxisWeights aw;
  const int p = fine_coord + 1;  // fine plane index
  if ((p & 1) == 0) {
    aw.w[0] = {p / 2 - 1, 1.0};
    aw.count = 1;
  } else {
    const int lo = (p - 1) / 2;
    const int hi = (p + 1) / 2;
    if (lo >= 1) aw.w[aw.count++] = {lo - 1, 0.5};
    if (hi <= n_coarse - 1) aw.w[aw.count++] = {hi - 1, 0.5};
  }
  return aw;
}

inline void append_cell_prolongation(const Grid& coarse, const Grid& fine, long row_off,
                                     long col_off, std::vector<Triplet>& t) {
  const auto fd = fine.dims();
  for (int k = 0; k < fd[2]; ++k)
    for (int j = 0; j < fd[1]; ++j)
      for (int i = 0; i < fd[0]; ++i) {
        const std::array<int, 3> fc{i, j, k};
        std::array<AxisWeights, 3> aw;
        for (int a = 0; a < 3; ++a)
          aw[a] = a < fine.dim() ? cell_axis_weights(fc[a], coarse.cells(a))
                                 : AxisWeights{1, {{{0, 1.0}, {0, 0.0}}}};
        const index_t row = static_cast<index_t>(row_off + fine.cell_index(fc));
        for (int a0 = 0; a0 < aw[0].count; ++a0)
          for (int a1 = 0; a1 < aw[1].count; ++a1)
            for (int a2 = 0; a2 < aw[2].count; ++a2) {
              const std::array<int, 3> cc{aw[0].w[a0].first, aw[1].w[a1].first,
                                          aw[2].w[a2].first};
              const double v = aw[0].w[a0].second * aw[1].w[a1].second * aw[2].w[a2].second;
              t.push_back({row, static_cast<index_t>(col_off + coarse.cell_index(cc)),
                           cplx(v, 0.0)});
            }
      }
}

inline void append_face_prolongation(const Grid& coarse, const Grid& fine, long row_off,
                                     long col_off, std::vector<Triplet>& t) {
  for (int d = 0; d < fine.dim(); ++d) {
    const auto fd = fine.face_dims(d);
    for (int k = 0; k < fd[2]; ++k)
      for (int j = 0; j < fd[1]; ++j)
        for (int i = 0; i < fd[0]; ++i) {
          const std::array<int, 3> fc{i, j, k};
          std::array<AxisWeights, 3> aw;
          for (int a = 0; a < 3; ++a) {
            if (a >= fine.dim())
              aw[a] = AxisWeights{1, {{{0, 1.0}, {0, 0.0}}}};
            else if (a == d)
              aw[a] = face_axis_weights(fc[a], coarse.cells(a));
            else
              aw[a] = cell_axis_weights(fc[a], coarse.cells(a));
          }
          const index_t row = static_cast<index_t>(row_off + fine.face_index(d, fc));
          for (int a0 = 0; a0 < aw[0].count; ++a0)
            for (int a1 = 0; a1 < aw[1].count; ++a1)
              for (int a2 = 0; a2 < aw[2].count; ++a2) {
                const std::array<int, 3> cc{aw[0].w[a0].first, aw[1].w[a1].first,
                                            aw[2].w[a2].first};
                const double v = aw[0].w[a0].second * aw[1].w[a1].second * aw[2].w[a2].second;
                t.push_back({row, static_cast<index_t>(col_off + coarse.face_index(d, cc)),
                             cplx(v, 0.0)});
              }
        }
  }
}

}  // namespace detail

// Prolongation from the coarse grid (dims halved per axis) to the fine grid.
// Restriction is its transpose.
inline ComplexSparseMatrix prolongation(const Grid& coarse, const Grid& fine,
                                        TransferLayout layout) {
  if (coarse.dim() != fine.dim()) throw std::invalid_argument("prolongation: dim mismatch");
  for (int a = 0; a < fine.dim(); ++a)
    if (fine.cells(a) != 2 * coarse.cells(a))
      throw std::invalid_argument("prolongation: fine dims must be exactly twice the coarse dims");

  std::vector<Triplet> t;
  long nrows = 0, ncols = 0;
  switch (layout) {
    case TransferLayout::Cell:
      detail::append_cell_prolongation(coarse, fine, 0, 0, t);
      nrows = fine.cell_count();
      ncols = coarse.cell_count();
      break;
    case TransferLayout::FaceStaggered:
      detail::append_face_prolongation(coarse, fine, 0, 0, t);
      nrows = fine.displacement_count();
      ncols = coarse.displacement_count();
      break;
    case TransferLayout::Mixed:
      detail::append_face_prolongation(coarse, fine, 0, 0, t);
      detail::append_cell_prolongation(coarse, fine, fine.displacement_count(),
                                       coarse.displacement_count(), t);
      nrows = fine.displacement_count() + fine.cell_count();
      ncols = coarse.displacement_count() + coarse.cell_count();
      break;
  }
  return ComplexSparseMatrix::from_triplets(static_cast<index_t>(nrows),
                                            static_cast<index_t>(ncols), std::move(t));
}

// Sparse direct factorization for the coarsest level, with a dense fallback
// for very small systems.
class DirectSolver {
 public:
  static constexpr index_t dense_threshold = 2000;

  void factor(const ComplexSparseMatrix& a) {
    if (a.nrows != a.ncols) throw std::invalid_argument("DirectSolver: matrix must be square");
    n_ = a.nrows;
    if (n_ < dense_threshold) {
      Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n_, n_);
      for (index_t r = 0; r < a.nrows; ++r)
        for (index_t p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p)
          dense(r, a.col_indices[p]) = a.values[p];
      dense_lu_ = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXcd>>(dense);
      const auto& u_diag = dense_lu_->matrixLU().diagonal();
      double max_abs = 0.0, min_abs = std::numeric_limits<double>::infinity();
      for (index_t i = 0; i < n_; ++i) {
        max_abs = std::max(max_abs, std::abs(u_diag(i)));
        min_abs = std::min(min_abs, std::abs(u_diag(i)));
      }
      if (n_ > 0 && !(min_abs > 1e-14 * max_abs))
        throw std::runtime_error("DirectSolver: coarsest matrix is numerically singular");
      return;
    }
    Eigen::SparseMatrix<cplx> s(n_, n_);
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(a.nnz());
    for (index_t r = 0; r < a.nrows; ++r)
      for (index_t p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p)
        trip.emplace_back(r, a.col_indices[p], a.values[p]);
    s.setFromTriplets(trip.begin(), trip.end());
    sparse_lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<cplx>>>();
    sparse_lu_->analyzePattern(s);
    sparse_lu_->factorize(s);
    if (sparse_lu_->info() != Eigen::Success)
      throw std::runtime_error("DirectSolver: sparse factorization failed (singular?)");
  }

  std::vector<cplx> solve(const std::vector<cplx>& b) const {
    if (b.size() != static_cast<std::size_t>(n_))
      throw std::invalid_argument("DirectSolver: rhs length mismatch");
    Eigen::Map<const Eigen::VectorXcd> bm(b.data(), n_);
    Eigen::VectorXcd x;
    if (dense_lu_)
      x = dense_lu_->solve(bm);
    else
      x = sparse_lu_->solve(bm);
    return std::vector<cplx>(x.data(), x.data() + n_);
  }

  bool dense() const { return dense_lu_ != nullptr; }

 private:
  index_t n_ = 0;
  std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXcd>> dense_lu_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<cplx>>> sparse_lu_;
};

struct CycleConfig {
  int levels = 3;
  char cycle = 'W';  // 'V' or 'W'
  int pre_sweeps = 1;
  int post_sweeps = 1;
  std::vector<double> damping;  // per level; empty selects the default schedule
  RelaxScheme smoother = RelaxScheme::VankaRedBlack;
  double jacobi_weight = 0.8;
  BlockPrecision block_precision = BlockPrecision::Single;

  // Default schedule: 0.5 on the first two grids, 0.2 from the third grid on
  // when running a 4-level hierarchy.
  double damping_at(int level) const {
    if (!damping.empty())
      return damping[std::min<std::size_t>(static_cast<std::size_t>(level), damping.size() - 1)];
    if (levels >= 4 && level >= 2) return 0.2;
    return 0.5;
  }

  void validate() const {
    if (levels < 1 || levels > 4) throw std::invalid_argument("CycleConfig: levels must be 1..4");
    if (cycle != 'V' && cycle != 'W') throw std::invalid_argument("CycleConfig: cycle must be V or W");
    if (pre_sweeps + post_sweeps < 1)
      throw std::invalid_argument("CycleConfig: need at least one relaxation per level");
    for (double d : damping)
      if (!(d > 0.0) || d > 1.0) throw std::invalid_argument("CycleConfig: damping must be in (0,1]");
  }
};

// Galerkin hierarchy over a (shifted) operator: per-level operator, transfer
// pair, smoother setup, and a direct factorization of the coarsest operator.
struct MultigridHierarchy {
  struct Level {
    Grid grid{{2, 2}, {1.0, 1.0}};
    ComplexSparseMatrix op;
    ComplexSparseMatrix prolong;   // from level+1 up to this level (absent on coarsest)
    ComplexSparseMatrix restrict_; // cached transpose of prolong
    std::optional<VankaBlocks> vanka;
    std::vector<cplx> jacobi_inv_diag;
    RelaxConfig relax;
  };

  std::vector<Level> levels;
  CycleConfig config;
  TransferLayout layout = TransferLayout::Mixed;
  DirectSolver coarse;

  long unknowns(std::size_t level) const { return levels[level].op.nrows; }
};

inline MultigridHierarchy build_hierarchy(const ComplexSparseMatrix& shifted_op, const Grid& g,
                                          TransferLayout layout, const CycleConfig& cfg) {
  cfg.validate();
  const int divisor = 1 << (cfg.levels - 1);
  for (int a = 0; a < g.dim(); ++a)
    if (g.cells(a) % divisor != 0)
      throw std::invalid_argument("build_hierarchy: dims not divisible by 2^(levels-1)");

  MultigridHierarchy h;
  h.config = cfg;
  h.layout = layout;
  h.levels.resize(static_cast<std::size_t>(cfg.levels));
  h.levels[0].grid = g;
  h.levels[0].op = shifted_op;

  for (int l = 0; l + 1 < cfg.levels; ++l) {
    const Grid& fine = h.levels[static_cast<std::size_t>(l)].grid;
    std::vector<int> cdims(static_cast<std::size_t>(fine.dim()));
    std::vector<double> cspace(static_cast<std::size_t>(fine.dim()));
    for (int a = 0; a < fine.dim(); ++a) {
      cdims[static_cast<std::size_t>(a)] = fine.cells(a) / 2;
      cspace[static_cast<std::size_t>(a)] = fine.spacing(a) * 2.0;
    }
    Grid coarse(cdims, cspace);
    auto& lev = h.levels[static_cast<std::size_t>(l)];
    lev.prolong = prolongation(coarse, fine, layout);
    lev.restrict_ = transpose(lev.prolong);
    h.levels[static_cast<std::size_t>(l) + 1].grid = coarse;
    h.levels[static_cast<std::size_t>(l) + 1].op =
        multiply(lev.restrict_, multiply(lev.op, lev.prolong));
  }

  // Smoothers on every level that relaxes (all but the coarsest).
  for (int l = 0; l + 1 < cfg.levels; ++l) {
    auto& lev = h.levels[static_cast<std::size_t>(l)];
    lev.relax.scheme = cfg.smoother;
    lev.relax.damping = cfg.damping_at(l);
    if (cfg.smoother == RelaxScheme::VankaRedBlack)
      lev.vanka = vanka_setup(lev.op, lev.grid, cfg.block_precision);
    else
      lev.jacobi_inv_diag = jacobi_inverse_diagonal(lev.op);
  }
  h.coarse.factor(h.levels.back().op);
  return h;
}

namespace detail {

inline void relax_level(const MultigridHierarchy::Level& lev, double jacobi_weight,
                        std::vector<cplx>& x, const std::vector<cplx>& b, int sweeps) {
  if (lev.vanka) {
    RelaxConfig cfg = lev.relax;
    cfg.sweeps = sweeps;
    vanka_sweep(lev.op, *lev.vanka, x, b, cfg);
    return;
  }
  for (int s = 0; s < sweeps; ++s) jacobi_sweep(lev.op, lev.jacobi_inv_diag, x, b, jacobi_weight);
}

inline void cycle_level(const MultigridHierarchy& h, std::size_t l, std::vector<cplx>& x,
                        const std::vector<cplx>& b) {
  if (l + 1 == h.levels.size()) {
    x = h.coarse.solve(b);
    return;
  }
  const auto& lev = h.levels[l];
  detail::relax_level(lev, h.config.jacobi_weight, x, b, h.config.pre_sweeps);

  std::vector<cplx> r(b.size());
  spmv(lev.op, x.data(), r.data());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  std::vector<cplx> rc = spmv(lev.restrict_, r);

  std::vector<cplx> ec(rc.size(), cplx(0.0, 0.0));
  cycle_level(h, l + 1, ec, rc);
  // W-cycle: recurse a second time, continuing from the first correction.
  // Skipped when the child is the coarsest level (an exact solve is idempotent).
  if (h.config.cycle == 'W' && l + 2 < h.levels.size()) cycle_level(h, l + 1, ec, rc);

  const std::vector<cplx> corr = spmv(lev.prolong, ec);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += corr[i];

  detail::relax_level(lev, h.config.jacobi_weight, x, b, h.config.post_sweeps);
}

}  // namespace detail

// One V- or W-cycle applied to the hierarchy's own (shifted) operator. The
// map (u0, rhs) -> result is linear affine, so the cycle is a fixed linear
// preconditioner when started from zero.
inline std::vector<cplx> cycle(const MultigridHierarchy& h, const std::vector<cplx>& rhs,
                               const std::vector<cplx>& u0) {
  if (rhs.size() != static_cast<std::size_t>(h.levels[0].op.nrows) || u0.size() != rhs.size())
    throw std::invalid_argument("cycle: length mismatch");
  std::vector<cplx> x = u0;
  detail::cycle_level(h, 0, x, rhs);
  return x;
}

// Asymptotic error-reduction factor of the cycle on its own operator:
// iterate on the homogeneous system from a random error and average the tail
// contraction ratios geometrically.
inline double measure_cycle_reduction(const MultigridHierarchy& h, int iterations = 15,
                                      int tail = 5, std::uint64_t seed = 7) {
  const std::size_t n = static_cast<std::size_t>(h.levels[0].op.nrows);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<cplx> e(n);
  for (auto& v : e) v = cplx(unif(rng), unif(rng));
  const std::vector<cplx> zero(n, cplx(0.0, 0.0));
  double prev = norm2(e);
  double product = 1.0;
  int counted = 0;
  for (int it = 0; it < iterations; ++it) {
    e = cycle(h, zero, e);
    const double cur = norm2(e);
    if (it >= iterations - tail) {
      product *= cur / prev;
      ++counted;
    }
    prev = cur;
    if (cur < 1e-280) break;  // fully converged; avoid denormal ratios
  }
  return counted > 0 ? std::pow(product, 1.0 / counted) : 0.0;
}

}  // namespace helmix

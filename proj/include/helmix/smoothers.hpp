// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "helmix/grid.hpp"
#include "helmix/half.hpp"
#include "helmix/parallel.hpp"
#include "helmix/sparse.hpp"

namespace helmix {

enum class BlockPrecision { Half, Single, Double };

enum class RelaxScheme { VankaRedBlack, Jacobi };

struct RelaxConfig {
  RelaxScheme scheme = RelaxScheme::VankaRedBlack;
  double damping = 0.5;
  int sweeps = 1;
};

// Per-cell blocks of the mixed operator: all interior faces of the cell plus
// its pressure unknown (5 unknowns for an interior 2D cell, 7 in 3D, fewer
// where boundary faces were eliminated). Inverses are precomputed at setup
// and stored at a configurable precision; the sweep only multiplies.
struct VankaBlocks {
  Grid grid{{2, 2}, {1.0, 1.0}};
  long nu = 0;
  BlockPrecision precision = BlockPrecision::Single;
  std::vector<index_t> cell_index_offsets;  // ncells + 1
  std::vector<index_t> unknown_indices;     // concatenated local->global maps
  std::vector<std::int64_t> inv_offsets;    // ncells + 1, offsets into scalar storage
  std::vector<std::uint16_t> inv_half;      // interleaved re, im (one array is active)
  std::vector<float> inv_single;
  std::vector<double> inv_double;
  std::vector<index_t> red_cells;
  std::vector<index_t> black_cells;

  int block_size(long cell) const {
    return static_cast<int>(cell_index_offsets[cell + 1] - cell_index_offsets[cell]);
  }

  cplx inverse_entry(std::int64_t scalar_base, int k, int r, int c) const {
    const std::int64_t at = scalar_base + 2 * (static_cast<std::int64_t>(r) * k + c);
    switch (precision) {
      case BlockPrecision::Half:
        return {static_cast<double>(half_to_float(inv_half[at])),
                static_cast<double>(half_to_float(inv_half[at + 1]))};
      case BlockPrecision::Single:
        return {static_cast<double>(inv_single[at]), static_cast<double>(inv_single[at + 1])};
      default:
        return {inv_double[at], inv_double[at + 1]};
    }
  }
};

inline std::vector<index_t> vanka_cell_unknowns(const Grid& g, long cell) {
  const auto cc = g.cell_coords(cell);
  std::vector<index_t> idx;
  idx.reserve(static_cast<std::size_t>(2 * g.dim() + 1));
  for (int d = 0; d < g.dim(); ++d) {
    if (cc[d] >= 1) {
      std::array<int, 3> f = cc;
      f[d] -= 1;
      idx.push_back(static_cast<index_t>(g.face_index(d, f)));
    }
    if (cc[d] + 1 <= g.cells(d) - 1) idx.push_back(static_cast<index_t>(g.face_index(d, cc)));
  }
  idx.push_back(static_cast<index_t>(g.displacement_count() + cell));
  return idx;
}

inline int cell_color(const Grid& g, long cell) {
  const auto cc = g.cell_coords(cell);
  return (cc[0] + cc[1] + cc[2]) & 1;
}

inline VankaBlocks vanka_setup(const ComplexSparseMatrix& a, const Grid& g,
                               BlockPrecision precision = BlockPrecision::Single) {
  const long nc = g.cell_count();
  const long nu = g.displacement_count();
  if (a.nrows != static_cast<index_t>(nu + nc) || a.ncols != a.nrows)
    throw std::invalid_argument("vanka_setup: operator does not match grid");

  VankaBlocks blocks;
  blocks.grid = g;
  blocks.nu = nu;
  blocks.precision = precision;
  blocks.cell_index_offsets.resize(static_cast<std::size_t>(nc) + 1);
  blocks.inv_offsets.resize(static_cast<std::size_t>(nc) + 1);
  blocks.cell_index_offsets[0] = 0;
  blocks.inv_offsets[0] = 0;
  for (long c = 0; c < nc; ++c) {
    int k = 1;  // pressure
    const auto cc = g.cell_coords(c);
    for (int d = 0; d < g.dim(); ++d) {
      if (cc[d] >= 1) ++k;
      if (cc[d] + 1 <= g.cells(d) - 1) ++k;
    }
    blocks.cell_index_offsets[c + 1] = blocks.cell_index_offsets[c] + k;
    blocks.inv_offsets[c + 1] = blocks.inv_offsets[c] + 2 * static_cast<std::int64_t>(k) * k;
    (cell_color(g, c) == 0 ? blocks.red_cells : blocks.black_cells)
        .push_back(static_cast<index_t>(c));
  }
  blocks.unknown_indices.resize(static_cast<std::size_t>(blocks.cell_index_offsets[nc]));
  const std::int64_t scalars = blocks.inv_offsets[static_cast<std::size_t>(nc)];
  switch (precision) {
    case BlockPrecision::Half: blocks.inv_half.resize(static_cast<std::size_t>(scalars)); break;
    case BlockPrecision::Single: blocks.inv_single.resize(static_cast<std::size_t>(scalars)); break;
    case BlockPrecision::Double: blocks.inv_double.resize(static_cast<std::size_t>(scalars)); break;
  }

  std::atomic<long> first_singular{-1};
  parallel_for(nc, [&](std::ptrdiff_t c) {
    const auto idx = vanka_cell_unknowns(g, c);
    const int k = static_cast<int>(idx.size());
    for (int i = 0; i < k; ++i)
      blocks.unknown_indices[static_cast<std::size_t>(blocks.cell_index_offsets[c]) + i] = idx[i];
    Eigen::MatrixXcd local = Eigen::MatrixXcd::Zero(k, k);
    for (int r = 0; r < k; ++r) {
      const index_t gr = idx[static_cast<std::size_t>(r)];
      for (index_t p = a.row_offsets[gr]; p < a.row_offsets[gr + 1]; ++p) {
        const index_t gc = a.col_indices[p];
        for (int cc2 = 0; cc2 < k; ++cc2)
          if (idx[static_cast<std::size_t>(cc2)] == gc) {
            local(r, cc2) = a.values[p];
            break;
          }
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(local);
    if (!lu.isInvertible()) {
      long expected = -1;
      first_singular.compare_exchange_strong(expected, static_cast<long>(c));
      return;
    }
    const Eigen::MatrixXcd inv = lu.inverse();
    const std::int64_t base = blocks.inv_offsets[c];
    for (int r = 0; r < k; ++r)
      for (int cc2 = 0; cc2 < k; ++cc2) {
        const std::int64_t at = base + 2 * (static_cast<std::int64_t>(r) * k + cc2);
        const cplx v = inv(r, cc2);
        switch (precision) {
          case BlockPrecision::Half:
            blocks.inv_half[at] = float_to_half(static_cast<float>(v.real()));
            blocks.inv_half[at + 1] = float_to_half(static_cast<float>(v.imag()));
            break;
          case BlockPrecision::Single:
            blocks.inv_single[at] = static_cast<float>(v.real());
            blocks.inv_single[at + 1] = static_cast<float>(v.imag());
            break;
          case BlockPrecision::Double:
            blocks.inv_double[at] = v.real();
            blocks.inv_double[at + 1] = v.imag();
            break;
        }
      }
  });
  if (first_singular.load() >= 0)
    throw std::runtime_error("vanka_setup: singular local block at cell " +
                             std::to_string(first_singular.load()));
  return blocks;
}

namespace detail {

inline void vanka_color_pass(const ComplexSparseMatrix& a, const VankaBlocks& blocks,
                             const std::vector<index_t>& cells, std::vector<cplx>& u,
                             const std::vector<cplx>& rhs, double damping,
                             std::vector<cplx>& residual) {
  // Residual frozen at the start of the color; same-color cells touch
  // disjoint unknowns, so the updates commute and parallelize cleanly.
  parallel_for(a.nrows, [&](std::ptrdiff_t r) {
    cplx s(0.0, 0.0);
    for (index_t p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p)
      s += a.values[p] * u[a.col_indices[p]];
    residual[r] = rhs[r] - s;
  });
  parallel_for(static_cast<std::ptrdiff_t>(cells.size()), [&](std::ptrdiff_t ci) {
    const long cell = cells[static_cast<std::size_t>(ci)];
    const int k = blocks.block_size(cell);
    const index_t* idx = &blocks.unknown_indices[blocks.cell_index_offsets[cell]];
    const std::int64_t base = blocks.inv_offsets[cell];
    for (int r = 0; r < k; ++r) {
      cplx delta(0.0, 0.0);
      for (int c = 0; c < k; ++c)
        delta += blocks.inverse_entry(base, k, r, c) * residual[idx[c]];
      u[idx[r]] += damping * delta;
    }
  });
}

}  // namespace detail

// One red-then-black sweep: simultaneous (Jacobi-style) cell solves within a
// color, multiplicative between colors.
inline void vanka_sweep(const ComplexSparseMatrix& a, const VankaBlocks& blocks,
                        std::vector<cplx>& u, const std::vector<cplx>& rhs, double damping) {
  if (u.size() != static_cast<std::size_t>(a.nrows) || rhs.size() != u.size())
    throw std::invalid_argument("vanka_sweep: length mismatch");
  std::vector<cplx> residual(u.size());
  detail::vanka_color_pass(a, blocks, blocks.red_cells, u, rhs, damping, residual);
  detail::vanka_color_pass(a, blocks, blocks.black_cells, u, rhs, damping, residual);
}

inline void vanka_sweep(const ComplexSparseMatrix& a, const VankaBlocks& blocks,
                        std::vector<cplx>& u, const std::vector<cplx>& rhs,
                        const RelaxConfig& cfg) {
  for (int s = 0; s < cfg.sweeps; ++s) vanka_sweep(a, blocks, u, rhs, cfg.damping);
}

inline void jacobi_sweep(const ComplexSparseMatrix& a, const std::vector<cplx>& inv_diag,
                         std::vector<cplx>& u, const std::vector<cplx>& rhs, double weight) {
  if (u.size() != static_cast<std::size_t>(a.nrows) || rhs.size() != u.size())
    throw std::invalid_argument("jacobi_sweep: length mismatch");
  std::vector<cplx> r(u.size());
  parallel_for(a.nrows, [&](std::ptrdiff_t row) {
    cplx s(0.0, 0.0);
    for (index_t p = a.row_offsets[row]; p < a.row_offsets[row + 1]; ++p)
      s += a.values[p] * u[a.col_indices[p]];
    r[row] = rhs[row] - s;
  });
  parallel_for(a.nrows, [&](std::ptrdiff_t row) { u[row] += weight * inv_diag[row] * r[row]; });
}

inline std::vector<cplx> jacobi_inverse_diagonal(const ComplexSparseMatrix& a) {
  std::vector<cplx> inv = a.diagonal_values();
  for (std::size_t i = 0; i < inv.size(); ++i) {
    if (inv[i] == cplx(0.0, 0.0))
      throw std::runtime_error("jacobi: zero diagonal entry at row " + std::to_string(i));
    inv[i] = 1.0 / inv[i];
  }
  return inv;
}

inline void jacobi_sweep(const ComplexSparseMatrix& a, std::vector<cplx>& u,
                         const std::vector<cplx>& rhs, double weight) {
  jacobi_sweep(a, jacobi_inverse_diagonal(a), u, rhs, weight);
}

}  // namespace helmix

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "helmix/grid.hpp"
#include "helmix/sparse.hpp"

namespace helmix {

// Cell-centered gradient: one row per interior face, central difference
// (right cell - left cell) / h across the face. Minus its transpose is the
// discrete divergence.
inline ComplexSparseMatrix cell_gradient(const Grid& g) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(2 * g.displacement_count()));
  for (int d = 0; d < g.dim(); ++d) {
    const auto fd = g.face_dims(d);
    const double inv_h = 1.0 / g.spacing(d);
    for (int k = 0; k < fd[2]; ++k)
      for (int j = 0; j < fd[1]; ++j)
        for (int i = 0; i < fd[0]; ++i) {
          const std::array<int, 3> f{i, j, k};
          std::array<int, 3> left = f;   // cell below the plane f[d]+1
          std::array<int, 3> right = f;  // cell above
          right[d] += 1;
          const index_t row = static_cast<index_t>(g.face_index(d, f));
          t.push_back({row, static_cast<index_t>(g.cell_index(left)), cplx(-inv_h, 0.0)});
          t.push_back({row, static_cast<index_t>(g.cell_index(right)), cplx(inv_h, 0.0)});
        }
  }
  return ComplexSparseMatrix::from_triplets(static_cast<index_t>(g.displacement_count()),
                                            static_cast<index_t>(g.cell_count()), std::move(t));
}

// Row layout of the block gradient: per displacement component d, the
// derivative blocks d/dx_j for j = 0..dim-1 in order. Normal derivatives
// (j == d) live on cell centers, tangential ones on the shared edge/node
// locations of the axis pair {d, j}.
struct GradientBlockLayout {
  long rows = 0;
  std::array<std::array<long, 3>, 3> offset{};  // offset[d][j]

  long block_offset(int d, int j) const { return offset[d][j]; }
};

inline GradientBlockLayout block_gradient_layout(const Grid& g) {
  GradientBlockLayout lay;
  long off = 0;
  for (int d = 0; d < g.dim(); ++d)
    for (int j = 0; j < g.dim(); ++j) {
      lay.offset[d][j] = off;
      off += (d == j) ? g.cell_count() : g.edge_count(d, j);
    }
  lay.rows = off;
  return lay;
}

// Block-diagonal first-derivative operator on face unknowns: emits
// d(u_d)/dx_j by central differences for every component/direction pair.
// Eliminated boundary faces act as zero ghosts.
inline ComplexSparseMatrix block_gradient(const Grid& g) {
  const GradientBlockLayout lay = block_gradient_layout(g);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(2 * lay.rows));
  for (int d = 0; d < g.dim(); ++d) {
    for (int j = 0; j < g.dim(); ++j) {
      const long off = lay.offset[d][j];
      const double inv_h = 1.0 / g.spacing(j);
      if (d == j) {
        // (u_d at plane i_d+1 - u_d at plane i_d) / h_d, row on the cell.
        const long nc = g.cell_count();
        for (long c = 0; c < nc; ++c) {
          const auto cc = g.cell_coords(c);
          const index_t row = static_cast<index_t>(off + c);
          if (cc[d] >= 1) {  // lower plane cc[d] is interior
            std::array<int, 3> f = cc;
            f[d] -= 1;
            t.push_back({row, static_cast<index_t>(g.face_index(d, f)), cplx(-inv_h, 0.0)});
          }
          if (cc[d] + 1 <= g.cells(d) - 1) {  // upper plane cc[d]+1 is interior
            t.push_back({row, static_cast<index_t>(g.face_index(d, cc)), cplx(inv_h, 0.0)});
          }
        }
      } else {
        // Tangential derivative on the {d, j} edge/node set.
        const auto ed = g.edge_dims(d, j);
        for (int ek = 0; ek < ed[2]; ++ek)
          for (int ej = 0; ej < ed[1]; ++ej)
            for (int ei = 0; ei < ed[0]; ++ei) {
              const std::array<int, 3> e{ei, ej, ek};
              const int plane_d = e[d];  // u_d face plane along axis d
              if (plane_d < 1 || plane_d > g.cells(d) - 1) continue;  // no unknowns there
              const index_t row = static_cast<index_t>(off + g.edge_index(d, j, e));
              const int plane_j = e[j];
              // upper neighbor: u_d in cell layer plane_j along axis j
              if (plane_j <= g.cells(j) - 1) {
                std::array<int, 3> f = e;
                f[d] = plane_d - 1;  // face coordinate along own axis
                f[j] = plane_j;
                t.push_back({row, static_cast<index_t>(g.face_index(d, f)), cplx(inv_h, 0.0)});
              }
              if (plane_j - 1 >= 0) {
                std::array<int, 3> f = e;
                f[d] = plane_d - 1;
                f[j] = plane_j - 1;
                t.push_back({row, static_cast<index_t>(g.face_index(d, f)), cplx(-inv_h, 0.0)});
              }
            }
      }
    }
  }
  return ComplexSparseMatrix::from_triplets(static_cast<index_t>(lay.rows),
                                            static_cast<index_t>(g.displacement_count()),
                                            std::move(t));
}

// Physical position of every row of the (d, j) block, used to check that
// matching derivative pairs land at identical locations.
inline std::vector<std::array<double, 3>> derivative_row_positions(const Grid& g, int d, int j) {
  std::vector<std::array<double, 3>> pos;
  if (d == j) {
    pos.reserve(static_cast<std::size_t>(g.cell_count()));
    for (long c = 0; c < g.cell_count(); ++c) {
      const auto cc = g.cell_coords(c);
      std::array<double, 3> x{0.0, 0.0, 0.0};
      for (int a = 0; a < g.dim(); ++a) x[a] = (cc[a] + 0.5) * g.spacing(a);
      pos.push_back(x);
    }
    return pos;
  }
  const auto ed = g.edge_dims(d, j);
  pos.reserve(static_cast<std::size_t>(g.edge_count(d, j)));
  for (int ek = 0; ek < ed[2]; ++ek)
    for (int ej = 0; ej < ed[1]; ++ej)
      for (int ei = 0; ei < ed[0]; ++ei) {
        const std::array<int, 3> e{ei, ej, ek};
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < g.dim(); ++a) {
          const bool staggered = (a == d || a == j);
          x[a] = staggered ? e[a] * g.spacing(a) : (e[a] + 0.5) * g.spacing(a);
        }
        pos.push_back(x);
      }
  return pos;
}

namespace detail {

template <class T>
std::vector<T> face_average_impl(const Grid& g, const std::vector<T>& c) {
  if (c.size() != static_cast<std::size_t>(g.cell_count()))
    throw std::invalid_argument("face averaging: field length != cell count");
  std::vector<T> out(static_cast<std::size_t>(g.displacement_count()));
  for (int d = 0; d < g.dim(); ++d) {
    const auto fd = g.face_dims(d);
    for (int k = 0; k < fd[2]; ++k)
      for (int j = 0; j < fd[1]; ++j)
        for (int i = 0; i < fd[0]; ++i) {
          const std::array<int, 3> f{i, j, k};
          std::array<int, 3> right = f;
          right[d] += 1;
          out[static_cast<std::size_t>(g.face_index(d, f))] =
              (c[static_cast<std::size_t>(g.cell_index(f))] +
               c[static_cast<std::size_t>(g.cell_index(right))]) /
              2.0;
        }
  }
  return out;
}

}  // namespace detail

// Arithmetic mean of the two cells adjacent to each interior face.
inline std::vector<cplx> face_averages(const Grid& g, const std::vector<cplx>& c) {
  return detail::face_average_impl(g, c);
}
inline std::vector<double> face_averages(const Grid& g, const std::vector<double>& c) {
  return detail::face_average_impl(g, c);
}

inline ComplexSparseMatrix average_cells_to_faces(const Grid& g, const std::vector<cplx>& c) {
  return ComplexSparseMatrix::diagonal(face_averages(g, c));
}
inline ComplexSparseMatrix average_cells_to_faces(const Grid& g, const std::vector<double>& c) {
  std::vector<cplx> z(c.begin(), c.end());
  return average_cells_to_faces(g, z);
}

// Diagonal weights over the full block-gradient row space: the exact cell
// value on cell rows, the arithmetic mean of the existing neighbor cells
// (4 in the interior, fewer toward the boundary) on edge/node rows.
inline std::vector<double> edge_averages(const Grid& g, const std::vector<double>& c) {
  if (c.size() != static_cast<std::size_t>(g.cell_count()))
    throw std::invalid_argument("edge averaging: field length != cell count");
  const GradientBlockLayout lay = block_gradient_layout(g);
  std::vector<double> out(static_cast<std::size_t>(lay.rows), 0.0);
  for (int d = 0; d < g.dim(); ++d)
    for (int j = 0; j < g.dim(); ++j) {
      const long off = lay.offset[d][j];
      if (d == j) {
        for (long cell = 0; cell < g.cell_count(); ++cell)
          out[static_cast<std::size_t>(off + cell)] = c[static_cast<std::size_t>(cell)];
        continue;
      }
      const auto ed = g.edge_dims(d, j);
      for (int ek = 0; ek < ed[2]; ++ek)
        for (int ej = 0; ej < ed[1]; ++ej)
          for (int ei = 0; ei < ed[0]; ++ei) {
            const std::array<int, 3> e{ei, ej, ek};
            double sum = 0.0;
            int count = 0;
            for (int sd = -1; sd <= 0; ++sd)
              for (int sj = -1; sj <= 0; ++sj) {
                std::array<int, 3> cc = e;
                cc[d] = e[d] + sd;
                cc[j] = e[j] + sj;
                if (cc[d] < 0 || cc[d] >= g.cells(d) || cc[j] < 0 || cc[j] >= g.cells(j)) continue;
                sum += c[static_cast<std::size_t>(g.cell_index(cc))];
                ++count;
              }
            out[static_cast<std::size_t>(off + g.edge_index(d, j, e))] =
                count > 0 ? sum / count : 0.0;
          }
    }
  return out;
}

inline ComplexSparseMatrix average_cells_to_edges(const Grid& g, const std::vector<double>& c) {
  const auto w = edge_averages(g, c);
  return ComplexSparseMatrix::diagonal(std::vector<cplx>(w.begin(), w.end()));
}

inline ComplexSparseMatrix diag_cells(const std::vector<cplx>& c) {
  return ComplexSparseMatrix::diagonal(c);
}
inline ComplexSparseMatrix diag_cells(const std::vector<double>& c) {
  return ComplexSparseMatrix::diagonal(std::vector<cplx>(c.begin(), c.end()));
}

}  // namespace helmix

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "helmix/grid.hpp"
#include "helmix/model.hpp"
#include "helmix/operators.hpp"
#include "helmix/sparse.hpp"

namespace helmix {

// Diagonal face mass matrix A_f(rho .* (1 - i gamma / omega)).
inline ComplexSparseMatrix mass_matrix(const Grid& g, const MediumModel& m, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("mass_matrix: omega must be positive");
  std::vector<cplx> cells(m.rho.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    cells[i] = m.rho[i] * cplx(1.0, -m.gamma[i] / omega);
  return average_cells_to_faces(g, cells);
}

// Displacement-only operator
//   H = G D_c(lambda+mu) G^T + B^T A_e(mu) B - omega^2 M
// with G the cell gradient and B the block gradient.
struct ElasticSystem {
  Grid grid{{2, 2}, {1.0, 1.0}};
  double omega = 0.0;
  ComplexSparseMatrix H;
  std::vector<double> face_rho;  // A_f(rho) diagonal, used by the complex shift
};

inline ElasticSystem assemble_elastic(const Grid& g, const MediumModel& m, double omega) {
  m.validate(g);
  const ComplexSparseMatrix G = cell_gradient(g);
  const ComplexSparseMatrix B = block_gradient(g);
  std::vector<double> lam_mu(m.lambda.size());
  for (std::size_t i = 0; i < lam_mu.size(); ++i) lam_mu[i] = m.lambda[i] + m.mu[i];

  const ComplexSparseMatrix grad_div = triple_product(transpose(G), diag_cells(lam_mu));
  const ComplexSparseMatrix diffusion = triple_product(B, average_cells_to_edges(g, m.mu));
  ComplexSparseMatrix H = add(grad_div, diffusion);
  if (omega > 0.0) {
    H = add(H, mass_matrix(g, m, omega), cplx(1.0, 0.0), cplx(-omega * omega, 0.0));
  }
  ElasticSystem sys{g, omega, std::move(H), face_averages(g, m.rho)};
  return sys;
}

// 2x2 block operator over (u, p):
//   [ B^T A_e(mu) B - omega^2 M    G                     ]
//   [ G^T                          D_c(-1/(lambda+mu))   ]
// Eliminating p recovers the displacement operator exactly.
struct MixedSystem {
  Grid grid{{2, 2}, {1.0, 1.0}};
  double omega = 0.0;
  long nu = 0;  // displacement unknowns; pressure rows follow
  long np = 0;
  ComplexSparseMatrix A;
  std::vector<double> face_rho;
};

inline MixedSystem assemble_mixed(const Grid& g, const MediumModel& m, double omega) {
  m.validate(g);
  for (std::size_t i = 0; i < m.lambda.size(); ++i)
    if (m.lambda[i] + m.mu[i] == 0.0)
      throw std::invalid_argument("assemble_mixed: lambda + mu vanishes in a cell");

  const long nu = g.displacement_count();
  const long np = g.cell_count();
  const ComplexSparseMatrix G = cell_gradient(g);
  const ComplexSparseMatrix B = block_gradient(g);
  ComplexSparseMatrix upper = triple_product(B, average_cells_to_edges(g, m.mu));
  if (omega > 0.0)
    upper = add(upper, mass_matrix(g, m, omega), cplx(1.0, 0.0), cplx(-omega * omega, 0.0));

  std::vector<Triplet> t;
  t.reserve(upper.nnz() + 3 * G.nnz() + static_cast<std::size_t>(np));
  for (index_t r = 0; r < upper.nrows; ++r)
    for (index_t p = upper.row_offsets[r]; p < upper.row_offsets[r + 1]; ++p)
      t.push_back({r, upper.col_indices[p], upper.values[p]});
  for (index_t r = 0; r < G.nrows; ++r)
    for (index_t p = G.row_offsets[r]; p < G.row_offsets[r + 1]; ++p) {
      t.push_back({r, static_cast<index_t>(nu + G.col_indices[p]), G.values[p]});
      t.push_back({static_cast<index_t>(nu + G.col_indices[p]), r, G.values[p]});
    }
  for (long c = 0; c < np; ++c)
    t.push_back({static_cast<index_t>(nu + c), static_cast<index_t>(nu + c),
                 cplx(-1.0 / (m.lambda[static_cast<std::size_t>(c)] +
                              m.mu[static_cast<std::size_t>(c)]),
                      0.0)});

  MixedSystem sys;
  sys.grid = g;
  sys.omega = omega;
  sys.nu = nu;
  sys.np = np;
  sys.A = ComplexSparseMatrix::from_triplets(static_cast<index_t>(nu + np),
                                             static_cast<index_t>(nu + np), std::move(t));
  sys.face_rho = face_averages(g, m.rho);
  return sys;
}

// Cell-centered acoustic operator
//   A = -D_c(rho) G^T A_f(1/rho) G + omega^2 D_c(kappa^2 .* (1 - i gamma/omega))
// with kappa = 1/velocity.
struct AcousticSystem {
  Grid grid{{2, 2}, {1.0, 1.0}};
  double omega = 0.0;
  ComplexSparseMatrix A;
  std::vector<double> kappa2;  // D_c(kappa^2) diagonal, used by the complex shift
};

inline AcousticSystem assemble_acoustic(const Grid& g, const std::vector<double>& velocity,
                                        const std::vector<double>& rho,
                                        const std::vector<double>& gamma, double omega) {
  const auto n = static_cast<std::size_t>(g.cell_count());
  if (velocity.size() != n || rho.size() != n || gamma.size() != n)
    throw std::invalid_argument("assemble_acoustic: field length != cell count");
  if (!(omega > 0.0)) throw std::invalid_argument("assemble_acoustic: omega must be positive");
  std::vector<double> inv_rho(n);
  std::vector<cplx> rho_scale(n);
  std::vector<cplx> mass(n);
  AcousticSystem sys;
  sys.grid = g;
  sys.omega = omega;
  sys.kappa2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(velocity[i] > 0.0)) throw std::invalid_argument("assemble_acoustic: velocity <= 0");
    if (!(rho[i] > 0.0)) throw std::invalid_argument("assemble_acoustic: rho <= 0");
    inv_rho[i] = 1.0 / rho[i];
    rho_scale[i] = cplx(-rho[i], 0.0);
    sys.kappa2[i] = 1.0 / (velocity[i] * velocity[i]);
    mass[i] = omega * omega * sys.kappa2[i] * cplx(1.0, -gamma[i] / omega);
  }
  const ComplexSparseMatrix G = cell_gradient(g);
  ComplexSparseMatrix L = triple_product(G, average_cells_to_faces(g, inv_rho));
  scale_rows(L, rho_scale);
  sys.A = add(L, ComplexSparseMatrix::diagonal(mass));
  return sys;
}

namespace detail {

inline void shift_diagonal(ComplexSparseMatrix& a, const std::vector<double>& weights,
                           cplx shift, long rows) {
  for (long r = 0; r < rows; ++r) {
    cplx* d = a.find(static_cast<index_t>(r), static_cast<index_t>(r));
    if (d == nullptr) throw std::runtime_error("shifted: missing diagonal entry");
    *d += shift * weights[static_cast<std::size_t>(r)];
  }
}

}  // namespace detail

// Complex shift over the displacement rows, equivalent to replacing gamma by
// gamma + alpha*omega in the mass term: H_s = H + i alpha omega^2 A_f(rho).
// The sign deepens the attenuation already carried by the mass matrix; the
// opposite sign would cancel against the absorbing layer and destroy the
// preconditioner.
inline ElasticSystem shifted(const ElasticSystem& sys, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("shifted: alpha must be nonnegative");
  ElasticSystem out = sys;
  if (alpha > 0.0 && sys.omega > 0.0)
    detail::shift_diagonal(out.H, out.face_rho, cplx(0.0, alpha * sys.omega * sys.omega),
                           out.H.nrows);
  return out;
}

// Zero-padded shift: only the displacement block is attenuated, pressure rows
// are untouched.
inline MixedSystem shifted(const MixedSystem& sys, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("shifted: alpha must be nonnegative");
  MixedSystem out = sys;
  if (alpha > 0.0 && sys.omega > 0.0)
    detail::shift_diagonal(out.A, out.face_rho, cplx(0.0, alpha * sys.omega * sys.omega),
                           sys.nu);
  return out;
}

// The cell-centered operator carries its mass with the opposite overall sign,
// so the same gamma -> gamma + alpha*omega deepening reads
// A_s = A - i alpha omega^2 D_c(kappa^2).
inline AcousticSystem shifted(const AcousticSystem& sys, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("shifted: alpha must be nonnegative");
  AcousticSystem out = sys;
  if (alpha > 0.0 && sys.omega > 0.0)
    detail::shift_diagonal(out.A, out.kappa2, cplx(0.0, -alpha * sys.omega * sys.omega),
                           out.A.nrows);
  return out;
}

// Unit point source scaled by 1/cell volume. The default position is the face
// of the vertical displacement component closest to the top-center of the
// domain ("top" is the low end of the last axis).
inline std::vector<cplx> point_source(const Grid& g, int component = -1,
                                      std::optional<std::array<int, 3>> anchor_cell = {}) {
  const int d = component < 0 ? g.dim() - 1 : component;
  if (d >= g.dim()) throw std::invalid_argument("point_source: no such component");
  std::array<int, 3> cell{0, 0, 0};
  if (anchor_cell) {
    cell = *anchor_cell;
    for (int a = 0; a < g.dim(); ++a)
      if (cell[a] < 0 || cell[a] >= g.cells(a))
        throw std::invalid_argument("point_source: position out of range");
  } else {
    for (int a = 0; a + 1 < g.dim(); ++a) cell[a] = g.cells(a) / 2;
    cell[g.dim() - 1] = 0;
  }
  // Choose the face of component d adjacent to the anchor cell that is
  // closest to the top boundary; fall back to the other side if eliminated.
  std::array<int, 3> f = cell;
  if (cell[d] >= 1)
    f[d] = cell[d] - 1;  // lower plane cell[d]
  else if (cell[d] + 1 <= g.cells(d) - 1)
    f[d] = cell[d];  // upper plane cell[d]+1
  else
    throw std::invalid_argument("point_source: component has no interior face at position");
  std::vector<cplx> q(static_cast<std::size_t>(g.displacement_count()), cplx(0.0, 0.0));
  q[static_cast<std::size_t>(g.face_index(d, f))] = cplx(1.0 / g.cell_volume(), 0.0);
  return q;
}

inline std::vector<cplx> point_source_acoustic(const Grid& g,
                                               std::optional<std::array<int, 3>> anchor_cell = {}) {
  std::array<int, 3> cell{0, 0, 0};
  if (anchor_cell) {
    cell = *anchor_cell;
    for (int a = 0; a < g.dim(); ++a)
      if (cell[a] < 0 || cell[a] >= g.cells(a))
        throw std::invalid_argument("point_source_acoustic: position out of range");
  } else {
    for (int a = 0; a + 1 < g.dim(); ++a) cell[a] = g.cells(a) / 2;
    cell[g.dim() - 1] = 0;
  }
  std::vector<cplx> q(static_cast<std::size_t>(g.cell_count()), cplx(0.0, 0.0));
  q[static_cast<std::size_t>(g.cell_index(cell))] = cplx(1.0 / g.cell_volume(), 0.0);
  return q;
}

// p = D_c(lambda + mu) G^T u.
inline std::vector<cplx> pressure_from_displacement(const Grid& g, const MediumModel& m,
                                                    const std::vector<cplx>& u) {
  if (u.size() != static_cast<std::size_t>(g.displacement_count()))
    throw std::invalid_argument("pressure_from_displacement: length mismatch");
  const ComplexSparseMatrix Gt = transpose(cell_gradient(g));
  std::vector<cplx> p = spmv(Gt, u);
  for (std::size_t c = 0; c < p.size(); ++c) p[c] *= m.lambda[c] + m.mu[c];
  return p;
}

// u = -omega^{-2} M^{-1} (q - G p), the displacement recovery of the top
// block for incompressible (mu = 0) subdomains.
inline std::vector<cplx> displacement_from_pressure(const Grid& g, const MediumModel& m,
                                                    double omega, const std::vector<cplx>& q,
                                                    const std::vector<cplx>& p) {
  if (q.size() != static_cast<std::size_t>(g.displacement_count()) ||
      p.size() != static_cast<std::size_t>(g.cell_count()))
    throw std::invalid_argument("displacement_from_pressure: length mismatch");
  if (!(omega > 0.0)) throw std::invalid_argument("displacement_from_pressure: omega must be > 0");
  const ComplexSparseMatrix M = mass_matrix(g, m, omega);
  std::vector<cplx> gp = spmv(cell_gradient(g), p);
  std::vector<cplx> u(q.size());
  const double s = -1.0 / (omega * omega);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const cplx mi = M.values[i];
    if (mi == cplx(0.0, 0.0))
      throw std::runtime_error("displacement_from_pressure: singular mass entry");
    u[i] = s * (q[i] - gp[i]) / mi;
  }
  return u;
}

}  // namespace helmix

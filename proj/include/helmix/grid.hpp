// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "helmix/sparse.hpp"

namespace helmix {

// Regular cell grid with staggered unknown placement. Displacement component
// d lives on the interior faces normal to axis d (boundary-normal faces are
// eliminated by the homogeneous Dirichlet condition), scalars live on cell
// centers. Unknown ordering: faces by axis then lexicographic (axis 0
// fastest), pressure after all displacement components.
class Grid {
 public:
  Grid(std::vector<int> dims, std::vector<double> spacing) {
    if (dims.size() != spacing.size() || (dims.size() != 2 && dims.size() != 3))
      throw std::invalid_argument("Grid: dims/spacing must both have size 2 or 3");
    dim_ = static_cast<int>(dims.size());
    dims_ = {1, 1, 1};
    spacing_ = {1.0, 1.0, 1.0};
    for (int a = 0; a < dim_; ++a) {
      if (dims[a] < 1) throw std::invalid_argument("Grid: cell counts must be >= 1");
      if (!(spacing[a] > 0.0)) throw std::invalid_argument("Grid: spacing must be positive");
      dims_[a] = dims[a];
      spacing_[a] = spacing[a];
    }
  }

  int dim() const { return dim_; }
  int cells(int axis) const { return dims_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  std::array<int, 3> dims() const { return dims_; }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= spacing_[a];
    return v;
  }

  long cell_count() const {
    return static_cast<long>(dims_[0]) * dims_[1] * dims_[2];
  }

  std::array<int, 3> face_dims(int axis) const {
    std::array<int, 3> d = dims_;
    d[axis] -= 1;
    return d;
  }

  long face_count(int axis) const {
    const auto d = face_dims(axis);
    const long n = static_cast<long>(d[0]) * d[1] * d[2];
    return n < 0 ? 0 : n;
  }

  long displacement_count() const {
    long n = 0;
    for (int a = 0; a < dim_; ++a) n += face_count(a);
    return n;
  }

  long face_offset(int axis) const {
    long off = 0;
    for (int a = 0; a < axis; ++a) off += face_count(a);
    return off;
  }

  long cell_index(std::array<int, 3> c) const {
    return c[0] + static_cast<long>(dims_[0]) * (c[1] + static_cast<long>(dims_[1]) * c[2]);
  }

  std::array<int, 3> cell_coords(long idx) const {
    std::array<int, 3> c;
    c[0] = static_cast<int>(idx % dims_[0]);
    idx /= dims_[0];
    c[1] = static_cast<int>(idx % dims_[1]);
    c[2] = static_cast<int>(idx / dims_[1]);
    return c;
  }

  // Face coordinates: along its own axis a face stores the interior plane
  // index minus one (plane p in 1..n-1 maps to coordinate p-1), other axes
  // store cell indices.
  long face_index(int axis, std::array<int, 3> f) const {
    const auto d = face_dims(axis);
    return face_offset(axis) +
           (f[0] + static_cast<long>(d[0]) * (f[1] + static_cast<long>(d[1]) * f[2]));
  }

  std::array<int, 3> face_coords(int axis, long local) const {
    const auto d = face_dims(axis);
    std::array<int, 3> f;
    f[0] = static_cast<int>(local % d[0]);
    local /= d[0];
    f[1] = static_cast<int>(local % d[1]);
    f[2] = static_cast<int>(local / d[1]);
    return f;
  }

  // Edge-like locations for tangential derivative pairs: staggered along both
  // axes of the (unordered) pair, cell-centered elsewhere. In 2D these are
  // nodes. Identical for (d, j) and (j, d) by construction.
  std::array<int, 3> edge_dims(int d, int j) const {
    std::array<int, 3> e = dims_;
    e[d] += 1;
    e[j] += 1;
    return e;
  }

  long edge_count(int d, int j) const {
    const auto e = edge_dims(d, j);
    return static_cast<long>(e[0]) * e[1] * e[2];
  }

  long edge_index(int d, int j, std::array<int, 3> c) const {
    const auto e = edge_dims(d, j);
    return c[0] + static_cast<long>(e[0]) * (c[1] + static_cast<long>(e[1]) * c[2]);
  }

 private:
  int dim_;
  std::array<int, 3> dims_;
  std::array<double, 3> spacing_;
};

// Rejects grids that are too small to carry a staggered discretization.
inline void require_solver_grid(const Grid& g) {
  for (int a = 0; a < g.dim(); ++a)
    if (g.cells(a) < 2)
      throw std::invalid_argument("grid: need at least 2 cells per axis for a solve");
}

// Displacement values on faces (axis-by-axis, lexicographic) plus pressure
// values on cells.
struct StaggeredField {
  std::vector<cplx> u;
  std::vector<cplx> p;

  static StaggeredField zeros(const Grid& g) {
    StaggeredField f;
    f.u.assign(static_cast<std::size_t>(g.displacement_count()), cplx(0.0, 0.0));
    f.p.assign(static_cast<std::size_t>(g.cell_count()), cplx(0.0, 0.0));
    return f;
  }

  void validate(const Grid& g) const {
    if (u.size() != static_cast<std::size_t>(g.displacement_count()) ||
        p.size() != static_cast<std::size_t>(g.cell_count()))
      throw std::invalid_argument("StaggeredField: lengths do not match grid");
  }
};

}  // namespace helmix

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "helmix/parallel.hpp"

namespace helmix {

using cplx = std::complex<double>;
using index_t = std::int32_t;

struct Triplet {
  index_t row;
  index_t col;
  cplx value;
};

// General complex sparse operator in compressed row form. Matrices are kept
// canonical: row_offsets monotone, column indices strictly increasing within
// each row, duplicates summed at construction. Structural (exact-zero)
// entries are retained so that sparsity patterns survive algebra.
struct ComplexSparseMatrix {
  index_t nrows = 0;
  index_t ncols = 0;
  std::vector<index_t> row_offsets{0};
  std::vector<index_t> col_indices;
  std::vector<cplx> values;

  std::size_t nnz() const { return col_indices.size(); }

  static ComplexSparseMatrix from_triplets(index_t nrows, index_t ncols, std::vector<Triplet> t) {
    for (const Triplet& e : t) {
      if (e.row < 0 || e.row >= nrows || e.col < 0 || e.col >= ncols)
        throw std::invalid_argument("from_triplets: entry out of range");
    }
    std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    ComplexSparseMatrix m;
    m.nrows = nrows;
    m.ncols = ncols;
    m.row_offsets.assign(static_cast<std::size_t>(nrows) + 1, 0);
    m.col_indices.reserve(t.size());
    m.values.reserve(t.size());
    std::size_t k = 0;
    for (index_t r = 0; r < nrows; ++r) {
      while (k < t.size() && t[k].row == r) {
        const index_t c = t[k].col;
        cplx v = t[k].value;
        ++k;
        while (k < t.size() && t[k].row == r && t[k].col == c) {
          v += t[k].value;
          ++k;
        }
        m.col_indices.push_back(c);
        m.values.push_back(v);
      }
      m.row_offsets[static_cast<std::size_t>(r) + 1] = static_cast<index_t>(m.col_indices.size());
    }
    return m;
  }

  static ComplexSparseMatrix diagonal(const std::vector<cplx>& d) {
    ComplexSparseMatrix m;
    m.nrows = m.ncols = static_cast<index_t>(d.size());
    m.row_offsets.resize(d.size() + 1);
    m.col_indices.resize(d.size());
    m.values = d;
    for (std::size_t i = 0; i <= d.size(); ++i) m.row_offsets[i] = static_cast<index_t>(i);
    for (std::size_t i = 0; i < d.size(); ++i) m.col_indices[i] = static_cast<index_t>(i);
    return m;
  }

  static ComplexSparseMatrix identity(index_t n) {
    return diagonal(std::vector<cplx>(static_cast<std::size_t>(n), cplx(1.0, 0.0)));
  }

  bool is_canonical() const {
    if (row_offsets.size() != static_cast<std::size_t>(nrows) + 1) return false;
    if (row_offsets.front() != 0 || row_offsets.back() != static_cast<index_t>(nnz())) return false;
    for (index_t r = 0; r < nrows; ++r) {
      if (row_offsets[r + 1] < row_offsets[r]) return false;
      for (index_t p = row_offsets[r]; p < row_offsets[r + 1]; ++p) {
        if (col_indices[p] < 0 || col_indices[p] >= ncols) return false;
        if (p > row_offsets[r] && col_indices[p] <= col_indices[p - 1]) return false;
      }
    }
    return true;
  }

  cplx coeff(index_t r, index_t c) const {
    const auto* p = find(r, c);
    return p ? *p : cplx(0.0, 0.0);
  }

  const cplx* find(index_t r, index_t c) const {
    const auto begin = col_indices.begin() + row_offsets[r];
    const auto end = col_indices.begin() + row_offsets[r + 1];
    const auto it = std::lower_bound(begin, end, c);
    if (it == end || *it != c) return nullptr;
    return &values[static_cast<std::size_t>(it - col_indices.begin())];
  }

  cplx* find(index_t r, index_t c) {
    return const_cast<cplx*>(static_cast<const ComplexSparseMatrix*>(this)->find(r, c));
  }

  std::vector<cplx> diagonal_values() const {
    const index_t n = std::min(nrows, ncols);
    std::vector<cplx> d(static_cast<std::size_t>(n), cplx(0.0, 0.0));
    for (index_t r = 0; r < n; ++r) d[r] = coeff(r, r);
    return d;
  }

  bool has_symmetric_pattern() const {
    if (nrows != ncols) return false;
    for (index_t r = 0; r < nrows; ++r)
      for (index_t p = row_offsets[r]; p < row_offsets[r + 1]; ++p)
        if (find(col_indices[p], r) == nullptr) return false;
    return true;
  }
};

inline void check_spmv_shapes(const ComplexSparseMatrix& a, std::size_t x, std::size_t y) {
  if (x != static_cast<std::size_t>(a.ncols) || y != static_cast<std::size_t>(a.nrows))
    throw std::invalid_argument("spmv: shape mismatch");
}

inline void spmv(const ComplexSparseMatrix& a, const cplx* x, cplx* y) {
  parallel_for(a.nrows, [&](std::ptrdiff_t r) {
    cplx s(0.0, 0.0);
    for (index_t p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p)
      s += a.values[p] * x[a.col_indices[p]];
    y[r] = s;
  });
}

inline void spmv(const ComplexSparseMatrix& a, const std::vector<cplx>& x, std::vector<cplx>& y) {
  y.resize(static_cast<std::size_t>(a.nrows));
  check_spmv_shapes(a, x.size(), y.size());
  spmv(a, x.data(), y.data());
}

inline std::vector<cplx> spmv(const ComplexSparseMatrix& a, const std::vector<cplx>& x) {
  std::vector<cplx> y;
  spmv(a, x, y);
  return y;
}

inline ComplexSparseMatrix transpose(const ComplexSparseMatrix& a) {
  ComplexSparseMatrix t;
  t.nrows = a.ncols;
  t.ncols = a.nrows;
  t.row_offsets.assign(static_cast<std::size_t>(a.ncols) + 1, 0);
  for (const index_t c : a.col_indices) ++t.row_offsets[static_cast<std::size_t>(c) + 1];
  for (std::size_t i = 1; i < t.row_offsets.size(); ++i) t.row_offsets[i] += t.row_offsets[i - 1];
  t.col_indices.resize(a.nnz());
  t.values.resize(a.nnz());
  std::vector<index_t> next(t.row_offsets.begin(), t.row_offsets.end() - 1);
  for (index_t r = 0; r < a.nrows; ++r) {
    for (index_t p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p) {
      const index_t dst = next[a.col_indices[p]]++;
      t.col_indices[dst] = r;
      t.values[dst] = a.values[p];
    }
  }
  return t;
}

// Row-by-row Gustavson product; output canonical, structural zeros kept.
inline ComplexSparseMatrix multiply(const ComplexSparseMatrix& a, const ComplexSparseMatrix& b) {
  if (a.ncols != b.nrows) throw std::invalid_argument("multiply: shape mismatch");
  ComplexSparseMatrix c;
  c.nrows = a.nrows;
  c.ncols = b.ncols;
  c.row_offsets.assign(static_cast<std::size_t>(a.nrows) + 1, 0);
  std::vector<cplx> acc(static_cast<std::size_t>(b.ncols), cplx(0.0, 0.0));
  std::vector<index_t> marker(static_cast<std::size_t>(b.ncols), -1);
  std::vector<index_t> cols;
  for (index_t r = 0; r < a.nrows; ++r) {
    cols.clear();
    for (index_t p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p) {
      const index_t k = a.col_indices[p];
      const cplx va = a.values[p];
      for (index_t q = b.row_offsets[k]; q < b.row_offsets[k + 1]; ++q) {
        const index_t j = b.col_indices[q];
        if (marker[j] != r) {
          marker[j] = r;
          acc[j] = cplx(0.0, 0.0);
          cols.push_back(j);
        }
        acc[j] += va * b.values[q];
      }
    }
    std::sort(cols.begin(), cols.end());
    for (const index_t j : cols) {
      c.col_indices.push_back(j);
      c.values.push_back(acc[j]);
    }
    c.row_offsets[static_cast<std::size_t>(r) + 1] = static_cast<index_t>(c.col_indices.size());
  }
  return c;
}

inline ComplexSparseMatrix add(const ComplexSparseMatrix& a, const ComplexSparseMatrix& b,
                               cplx alpha = cplx(1.0, 0.0), cplx beta = cplx(1.0, 0.0)) {
  if (a.nrows != b.nrows || a.ncols != b.ncols) throw std::invalid_argument("add: shape mismatch");
  ComplexSparseMatrix c;
  c.nrows = a.nrows;
  c.ncols = a.ncols;
  c.row_offsets.assign(static_cast<std::size_t>(a.nrows) + 1, 0);
  for (index_t r = 0; r < a.nrows; ++r) {
    index_t pa = a.row_offsets[r], pb = b.row_offsets[r];
    const index_t ea = a.row_offsets[r + 1], eb = b.row_offsets[r + 1];
    while (pa < ea || pb < eb) {
      index_t col;
      cplx v(0.0, 0.0);
      if (pb >= eb || (pa < ea && a.col_indices[pa] < b.col_indices[pb])) {
        col = a.col_indices[pa];
        v = alpha * a.values[pa++];
      } else if (pa >= ea || b.col_indices[pb] < a.col_indices[pa]) {
        col = b.col_indices[pb];
        v = beta * b.values[pb++];
      } else {
        col = a.col_indices[pa];
        v = alpha * a.values[pa++] + beta * b.values[pb++];
      }
      c.col_indices.push_back(col);
      c.values.push_back(v);
    }
    c.row_offsets[static_cast<std::size_t>(r) + 1] = static_cast<index_t>(c.col_indices.size());
  }
  return c;
}

// Galerkin triple product P^T H P.
inline ComplexSparseMatrix triple_product(const ComplexSparseMatrix& p, const ComplexSparseMatrix& h) {
  if (h.nrows != h.ncols || h.nrows != p.nrows)
    throw std::invalid_argument("triple_product: shape mismatch");
  return multiply(transpose(p), multiply(h, p));
}

inline void scale_rows(ComplexSparseMatrix& a, const std::vector<cplx>& s) {
  if (s.size() != static_cast<std::size_t>(a.nrows))
    throw std::invalid_argument("scale_rows: length mismatch");
  for (index_t r = 0; r < a.nrows; ++r)
    for (index_t p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p) a.values[p] *= s[r];
}

// --- small dense-free vector helpers used across the solver stack ---

inline double norm2(const std::vector<cplx>& x) {
  double s = 0.0;
  for (const cplx& v : x) s += std::norm(v);
  return std::sqrt(s);
}

inline cplx dot(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline void axpy(cplx alpha, const std::vector<cplx>& x, std::vector<cplx>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline bool all_finite(const std::vector<cplx>& x) {
  for (const cplx& v : x)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace helmix

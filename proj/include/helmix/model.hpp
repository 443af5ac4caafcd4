// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "helmix/grid.hpp"

namespace helmix {

// Cell-centered physical parameter fields. Units follow the usual seismic
// scaling: densities in g/cm^3, Lame parameters in GPa, attenuation in rad/s,
// velocities in km/s.
struct MediumModel {
  std::vector<double> rho;
  std::vector<double> mu;
  std::vector<double> lambda;
  std::vector<double> gamma;

  void validate(const Grid& g) const {
    const auto n = static_cast<std::size_t>(g.cell_count());
    if (rho.size() != n || mu.size() != n || lambda.size() != n || gamma.size() != n)
      throw std::invalid_argument("MediumModel: field length != cell count");
    for (std::size_t i = 0; i < n; ++i) {
      if (!(rho[i] > 0.0)) throw std::invalid_argument("MediumModel: rho must be positive");
      if (mu[i] < 0.0) throw std::invalid_argument("MediumModel: mu must be nonnegative");
      if (!(lambda[i] > 0.0)) throw std::invalid_argument("MediumModel: lambda must be positive");
      if (gamma[i] < 0.0) throw std::invalid_argument("MediumModel: gamma must be nonnegative");
    }
  }
};

// sigma = lambda / (2 (lambda + mu)), in (0, 0.5] for admissible media.
inline std::vector<double> poisson_ratio(const MediumModel& m) {
  std::vector<double> s(m.lambda.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double denom = m.lambda[i] + m.mu[i];
    if (denom == 0.0) throw std::invalid_argument("poisson_ratio: lambda + mu is zero");
    s[i] = m.lambda[i] / (2.0 * denom);
  }
  return s;
}

// V_p = sqrt((lambda + 2 mu) / rho), V_s = sqrt(mu / rho).
inline std::pair<std::vector<double>, std::vector<double>> velocities(const MediumModel& m) {
  std::vector<double> vp(m.rho.size()), vs(m.rho.size());
  for (std::size_t i = 0; i < m.rho.size(); ++i) {
    vp[i] = std::sqrt((m.lambda[i] + 2.0 * m.mu[i]) / m.rho[i]);
    vs[i] = std::sqrt(m.mu[i] / m.rho[i]);
  }
  return {vp, vs};
}

// Quadratic absorbing layer plus a constant bulk attenuation term.
struct AttenuationConfig {
  int abl_cells = 20;
  std::optional<double> abl_amplitude;  // defaults to omega
  double bulk_factor = 0.005;
  std::array<bool, 6> sides{true, true, true, true, true, true};  // -x1,+x1,-x2,+x2,-x3,+x3

  void validate(const Grid& g) const {
    if (abl_cells < 0) throw std::invalid_argument("AttenuationConfig: abl_cells < 0");
    if (bulk_factor < 0.0) throw std::invalid_argument("AttenuationConfig: bulk_factor < 0");
    int smallest = g.cells(0);
    for (int a = 1; a < g.dim(); ++a) smallest = std::min(smallest, g.cells(a));
    if (abl_cells > 0 && 2 * abl_cells >= smallest)
      throw std::invalid_argument("AttenuationConfig: layer wider than half the domain");
  }
};

// gamma(cell) = bulk_factor * omega + amplitude * q(cell), where q ramps
// quadratically from zero at the inner edge of the layer toward the active
// boundaries (maximum over sides, depth measured at cell centers).
inline std::vector<double> build_gamma(const Grid& g, const AttenuationConfig& cfg, double omega) {
  cfg.validate(g);
  const double amp = cfg.abl_amplitude.value_or(omega);
  const double bulk = cfg.bulk_factor * omega;
  std::vector<double> gamma(static_cast<std::size_t>(g.cell_count()), bulk);
  if (cfg.abl_cells == 0 || amp == 0.0) return gamma;
  const double width = static_cast<double>(cfg.abl_cells);
  for (long c = 0; c < g.cell_count(); ++c) {
    const auto cc = g.cell_coords(c);
    double q = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double depth_lo = width - (cc[a] + 0.5);              // into the low-side layer
      const double depth_hi = width - (g.cells(a) - 1 - cc[a] + 0.5);  // into the high side
      if (cfg.sides[2 * a] && depth_lo > 0.0) q = std::max(q, (depth_lo / width) * (depth_lo / width));
      if (cfg.sides[2 * a + 1] && depth_hi > 0.0)
        q = std::max(q, (depth_hi / width) * (depth_hi / width));
    }
    gamma[static_cast<std::size_t>(c)] += amp * q;
  }
  return gamma;
}

inline MediumModel make_constant_model(const Grid& g, double rho, double mu, double lambda) {
  if (!(rho > 0.0) || mu < 0.0 || !(lambda > 0.0))
    throw std::invalid_argument("make_constant_model: inadmissible parameters");
  const auto n = static_cast<std::size_t>(g.cell_count());
  MediumModel m;
  m.rho.assign(n, rho);
  m.mu.assign(n, mu);
  m.lambda.assign(n, lambda);
  m.gamma.assign(n, 0.0);
  return m;
}

struct LinearModelSpec {
  double vs_top = 0.9;
  double vs_bottom = 2.5;
  double rho_top = 2.0;
  double rho_bottom = 3.0;
  double vp_vs_ratio = 2.0;  // must exceed sqrt(2) for a positive lambda
};

// Shear velocity and density vary linearly with depth (last axis); mu and
// lambda are back-computed from mu = rho Vs^2, lambda = rho Vp^2 - 2 mu.
inline MediumModel make_linear_model(const Grid& g, const LinearModelSpec& spec = {}) {
  if (!(spec.vs_top > 0.0) || !(spec.vs_bottom > 0.0))
    throw std::invalid_argument("make_linear_model: velocities must be positive");
  if (!(spec.vp_vs_ratio * spec.vp_vs_ratio > 2.0))
    throw std::invalid_argument("make_linear_model: vp/vs ratio must exceed sqrt(2)");
  const int depth_axis = g.dim() - 1;
  const double lz = g.cells(depth_axis) * g.spacing(depth_axis);
  const auto n = static_cast<std::size_t>(g.cell_count());
  MediumModel m;
  m.rho.resize(n);
  m.mu.resize(n);
  m.lambda.resize(n);
  m.gamma.assign(n, 0.0);
  for (long c = 0; c < g.cell_count(); ++c) {
    const auto cc = g.cell_coords(c);
    const double t = (cc[depth_axis] + 0.5) * g.spacing(depth_axis) / lz;
    const double vs = spec.vs_top + t * (spec.vs_bottom - spec.vs_top);
    const double vp = spec.vp_vs_ratio * vs;
    const double rho = spec.rho_top + t * (spec.rho_bottom - spec.rho_top);
    const std::size_t i = static_cast<std::size_t>(c);
    m.rho[i] = rho;
    m.mu[i] = rho * vs * vs;
    m.lambda[i] = rho * vp * vp - 2.0 * m.mu[i];
  }
  return m;
}

struct LayeredModelSpec {
  double vs_top = 0.7;
  double vs_bottom = 2.4;
  double vp_vs_ratio = 2.0;
  int layer_count = 8;
  double contrast = 0.22;  // relative velocity jump amplitude across interfaces
  std::uint64_t seed = 42;
};

// Deterministic heterogeneous synthetic: a depth ramp overlaid with dipping,
// gently undulating layers of alternating velocity contrast, in the spirit of
// the Marmousi-style sections used for solver stress tests. Density follows
// Gardner's relation rho = 1.74 Vp^0.25.
inline MediumModel make_layered_model(const Grid& g, const LayeredModelSpec& spec = {}) {
  if (!(spec.vs_top > 0.0) || !(spec.vs_bottom > spec.vs_top))
    throw std::invalid_argument("make_layered_model: need 0 < vs_top < vs_bottom");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  struct Layer {
    double depth0, dip, wobble_amp, wobble_freq, wobble_phase, jump;
  };
  std::vector<Layer> layers(static_cast<std::size_t>(spec.layer_count));
  for (int l = 0; l < spec.layer_count; ++l) {
    Layer& L = layers[static_cast<std::size_t>(l)];
    L.depth0 = (l + 0.6 + 0.3 * unif(rng)) / (spec.layer_count + 1.0);
    L.dip = 0.25 * (unif(rng) - 0.5);
    L.wobble_amp = 0.02 + 0.03 * unif(rng);
    L.wobble_freq = 1.0 + 3.0 * unif(rng);
    L.wobble_phase = 6.283185307179586 * unif(rng);
    L.jump = spec.contrast * (unif(rng) - 0.5) * 2.0;
  }
  const int depth_axis = g.dim() - 1;
  const double lz = g.cells(depth_axis) * g.spacing(depth_axis);
  const double lx = g.cells(0) * g.spacing(0);
  const auto n = static_cast<std::size_t>(g.cell_count());
  MediumModel m;
  m.rho.resize(n);
  m.mu.resize(n);
  m.lambda.resize(n);
  m.gamma.assign(n, 0.0);
  const double vs_lo = 0.55 * spec.vs_top;
  const double vs_hi = 1.25 * spec.vs_bottom;
  for (long c = 0; c < g.cell_count(); ++c) {
    const auto cc = g.cell_coords(c);
    const double x = (cc[0] + 0.5) * g.spacing(0) / lx;
    const double z = (cc[depth_axis] + 0.5) * g.spacing(depth_axis) / lz;
    double vs = spec.vs_top + z * (spec.vs_bottom - spec.vs_top);
    for (const Layer& L : layers) {
      const double interface =
          L.depth0 + L.dip * (x - 0.5) +
          L.wobble_amp * std::sin(6.283185307179586 * L.wobble_freq * x + L.wobble_phase);
      if (z > interface) vs *= 1.0 + L.jump * (1.0 - z) * 0.7;
    }
    vs = std::clamp(vs, vs_lo, vs_hi);
    const double vp = spec.vp_vs_ratio * vs;
    const double rho = 1.74 * std::pow(vp, 0.25);
    const std::size_t i = static_cast<std::size_t>(c);
    m.rho[i] = rho;
    m.mu[i] = rho * vs * vs;
    m.lambda[i] = rho * vp * vp - 2.0 * m.mu[i];
  }
  return m;
}

enum class RawValueKind { Float32, Float64 };

// Headerless little-endian grid file, lexicographic cell order.
inline std::vector<double> load_raw_model(const std::string& path, long cell_count,
                                          RawValueKind kind) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("load_raw_model: cannot open " + path);
  const std::streamoff size = in.tellg();
  const std::size_t scalar = kind == RawValueKind::Float32 ? 4 : 8;
  if (static_cast<std::size_t>(size) != scalar * static_cast<std::size_t>(cell_count))
    throw std::runtime_error("load_raw_model: file size does not match grid for " + path);
  in.seekg(0);
  std::vector<double> out(static_cast<std::size_t>(cell_count));
  if (kind == RawValueKind::Float64) {
    in.read(reinterpret_cast<char*>(out.data()), size);
  } else {
    std::vector<float> buf(out.size());
    in.read(reinterpret_cast<char*>(buf.data()), size);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(buf[i]);
  }
  if (!in) throw std::runtime_error("load_raw_model: short read on " + path);
  return out;
}

inline void save_raw_model(const std::string& path, const std::vector<double>& field,
                           RawValueKind kind) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_raw_model: cannot open " + path);
  if (kind == RawValueKind::Float64) {
    out.write(reinterpret_cast<const char*>(field.data()),
              static_cast<std::streamsize>(field.size() * 8));
  } else {
    std::vector<float> buf(field.begin(), field.end());
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * 4));
  }
  if (!out) throw std::runtime_error("save_raw_model: write failed on " + path);
}

inline double min_shear_velocity(const MediumModel& m) {
  double v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.rho.size(); ++i)
    v = std::min(v, std::sqrt(m.mu[i] / m.rho[i]));
  return v;
}

// omega for a target number of grid points per shear wavelength.
inline double omega_for_ppw(const Grid& g, const MediumModel& m, double ppw) {
  double h = 0.0;
  for (int a = 0; a < g.dim(); ++a) h = std::max(h, g.spacing(a));
  const double vs_min = min_shear_velocity(m);
  if (!(vs_min > 0.0)) throw std::invalid_argument("omega_for_ppw: model has zero shear velocity");
  return 2.0 * 3.14159265358979323846 * vs_min / (ppw * h);
}

}  // namespace helmix

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <vector>

#include "helmix/assembly.hpp"
#include "helmix/grid.hpp"
#include "helmix/krylov.hpp"
#include "helmix/model.hpp"
#include "helmix/multigrid.hpp"

namespace helmix {

enum class Formulation { Mixed, Standard };

// W(1,1) cycles with red-black cell-wise relaxation for the reformulated
// system.
inline CycleConfig default_mixed_cycle(int levels = 3) {
  CycleConfig c;
  c.levels = levels;
  c.cycle = 'W';
  c.pre_sweeps = 1;
  c.post_sweeps = 1;
  c.smoother = RelaxScheme::VankaRedBlack;
  return c;
}

// W(2,2) cycles with damped Jacobi for displacement-only and acoustic
// operators.
inline CycleConfig default_pointwise_cycle(int levels = 3, double weight = 0.8) {
  CycleConfig c;
  c.levels = levels;
  c.cycle = 'W';
  c.pre_sweeps = 2;
  c.post_sweeps = 2;
  c.smoother = RelaxScheme::Jacobi;
  c.jacobi_weight = weight;
  return c;
}

// The displacement operator needs a smaller Jacobi weight than the acoustic
// one: rho(D^-1 H) approaches 4 as lambda grows (the grad-div rows are not
// diagonally dominant), so 0.5 keeps the smoother contractive for any lambda.
inline CycleConfig default_standard_cycle(int levels = 3) {
  return default_pointwise_cycle(levels, 0.5);
}

struct ElasticSolveOptions {
  SolveConfig krylov;
  CycleConfig cycle = default_mixed_cycle();
  Formulation formulation = Formulation::Mixed;
  int source_component = -1;  // -1 selects the vertical component
  std::optional<std::vector<cplx>> rhs_override;  // full-length right-hand side
};

struct ElasticSolveResult {
  StaggeredField field;
  SolveReport report;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

// Assembles the requested formulation, builds the multigrid hierarchy on the
// shifted operator, and runs FGMRES on the unshifted system.
inline ElasticSolveResult solve_elastic(const Grid& g, const MediumModel& m, double omega,
                                        const ElasticSolveOptions& opt) {
  require_solver_grid(g);
  opt.krylov.validate();
  ElasticSolveResult out;
  const auto t0 = std::chrono::steady_clock::now();

  if (opt.formulation == Formulation::Mixed) {
    const MixedSystem sys = assemble_mixed(g, m, omega);
    const MixedSystem ssys = shifted(sys, opt.krylov.alpha);
    CycleConfig cyc = opt.cycle;
    cyc.smoother = RelaxScheme::VankaRedBlack;
    const MultigridHierarchy h = build_hierarchy(ssys.A, g, TransferLayout::Mixed, cyc);
    out.report.setup_seconds = detail::seconds_since(t0);

    std::vector<cplx> rhs;
    if (opt.rhs_override) {
      rhs = *opt.rhs_override;
      if (rhs.size() != static_cast<std::size_t>(sys.nu + sys.np))
        throw std::invalid_argument("solve_elastic: rhs length mismatch");
    } else {
      rhs = point_source(g, opt.source_component);
      rhs.resize(static_cast<std::size_t>(sys.nu + sys.np), cplx(0.0, 0.0));
    }

    const auto t1 = std::chrono::steady_clock::now();
    const std::vector<cplx> zero(rhs.size(), cplx(0.0, 0.0));
    LinOp precond = [&h, &zero](const std::vector<cplx>& v, std::vector<cplx>& y) {
      y = cycle(h, v, zero);
    };
    const std::vector<cplx> x = fgmres(matrix_op(sys.A), rhs, precond, opt.krylov, out.report);
    out.report.solve_seconds = detail::seconds_since(t1);

    out.field.u.assign(x.begin(), x.begin() + sys.nu);
    out.field.p.assign(x.begin() + sys.nu, x.end());
    return out;
  }

  const ElasticSystem sys = assemble_elastic(g, m, omega);
  const ElasticSystem ssys = shifted(sys, opt.krylov.alpha);
  CycleConfig cyc = opt.cycle;
  cyc.smoother = RelaxScheme::Jacobi;
  const MultigridHierarchy h = build_hierarchy(ssys.H, g, TransferLayout::FaceStaggered, cyc);
  out.report.setup_seconds = detail::seconds_since(t0);

  std::vector<cplx> rhs;
  if (opt.rhs_override) {
    rhs = *opt.rhs_override;
    if (rhs.size() != static_cast<std::size_t>(g.displacement_count()))
      throw std::invalid_argument("solve_elastic: rhs length mismatch");
  } else {
    rhs = point_source(g, opt.source_component);
  }

  const auto t1 = std::chrono::steady_clock::now();
  const std::vector<cplx> zero(rhs.size(), cplx(0.0, 0.0));
  LinOp precond = [&h, &zero](const std::vector<cplx>& v, std::vector<cplx>& y) {
    y = cycle(h, v, zero);
  };
  const std::vector<cplx> x = fgmres(matrix_op(sys.H), rhs, precond, opt.krylov, out.report);
  out.report.solve_seconds = detail::seconds_since(t1);

  out.field.u = x;
  out.field.p = pressure_from_displacement(g, m, x);
  return out;
}

struct AcousticSolveOptions {
  SolveConfig krylov;
  CycleConfig cycle = default_pointwise_cycle();
};

struct AcousticSolveResult {
  std::vector<cplx> p;
  SolveReport report;
};

inline AcousticSolveResult solve_acoustic(const Grid& g, const std::vector<double>& velocity,
                                          const std::vector<double>& rho,
                                          const std::vector<double>& gamma, double omega,
                                          const AcousticSolveOptions& opt) {
  require_solver_grid(g);
  opt.krylov.validate();
  AcousticSolveResult out;
  const auto t0 = std::chrono::steady_clock::now();

  const AcousticSystem sys = assemble_acoustic(g, velocity, rho, gamma, omega);
  const AcousticSystem ssys = shifted(sys, opt.krylov.alpha);
  CycleConfig cyc = opt.cycle;
  cyc.smoother = RelaxScheme::Jacobi;
  const MultigridHierarchy h = build_hierarchy(ssys.A, g, TransferLayout::Cell, cyc);
  out.report.setup_seconds = detail::seconds_since(t0);

  const std::vector<cplx> rhs = point_source_acoustic(g);
  const auto t1 = std::chrono::steady_clock::now();
  const std::vector<cplx> zero(rhs.size(), cplx(0.0, 0.0));
  LinOp precond = [&h, &zero](const std::vector<cplx>& v, std::vector<cplx>& y) {
    y = cycle(h, v, zero);
  };
  out.p = fgmres(matrix_op(sys.A), rhs, precond, opt.krylov, out.report);
  out.report.solve_seconds = detail::seconds_since(t1);
  return out;
}

}  // namespace helmix

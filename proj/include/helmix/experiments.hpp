// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "helmix/io.hpp"
#include "helmix/model.hpp"
#include "helmix/solver.hpp"

namespace helmix {

// Configuration problems exit with code 1; solver failures with code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Solve, LambdaSweep, AcousticVsElastic, LevelsStudy, Check3d };

inline const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Solve: return "solve";
    case ExperimentKind::LambdaSweep: return "lambda-sweep";
    case ExperimentKind::AcousticVsElastic: return "acoustic-vs-elastic";
    case ExperimentKind::LevelsStudy: return "levels-study";
    default: return "check-3d";
  }
}

inline ExperimentKind experiment_from_name(const std::string& s) {
  if (s == "solve") return ExperimentKind::Solve;
  if (s == "lambda-sweep") return ExperimentKind::LambdaSweep;
  if (s == "acoustic-vs-elastic") return ExperimentKind::AcousticVsElastic;
  if (s == "levels-study") return ExperimentKind::LevelsStudy;
  if (s == "check-3d") return ExperimentKind::Check3d;
  throw ConfigError("unknown experiment kind '" + s + "'");
}

struct ModelConfig {
  std::string kind = "constant";  // constant | linear | layered | raw
  double rho = 1.0, mu = 1.0, lambda = 1.0;
  LinearModelSpec linear;
  LayeredModelSpec layered;
  std::string vp_file, vs_file, rho_file;
  RawValueKind value_kind = RawValueKind::Float32;
};

struct SolverOverrides {
  std::optional<double> alpha;
  std::optional<int> levels;
  std::optional<char> cycle;
  std::optional<int> pre_sweeps, post_sweeps;
  std::optional<std::vector<double>> damping;
  std::optional<int> restart;
  std::optional<double> tol;
  std::optional<int> max_applications;
  std::optional<double> jacobi_weight;
  std::optional<BlockPrecision> block_precision;

  void apply(SolveConfig& k, CycleConfig& c) const {
    if (alpha) k.alpha = *alpha;
    if (restart) k.restart = *restart;
    if (tol) k.tol = *tol;
    if (max_applications) k.max_applications = *max_applications;
    if (levels) c.levels = *levels;
    if (cycle) c.cycle = *cycle;
    if (pre_sweeps) c.pre_sweeps = *pre_sweeps;
    if (post_sweeps) c.post_sweeps = *post_sweeps;
    if (damping) c.damping = *damping;
    if (jacobi_weight) c.jacobi_weight = *jacobi_weight;
    if (block_precision) c.block_precision = *block_precision;
  }
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Solve;
  bool kind_explicit = false;
  std::vector<int> dims;
  std::vector<double> spacing;
  ModelConfig model;
  AttenuationConfig attenuation;
  std::vector<double> omegas;  // explicit angular frequencies
  std::vector<double> ppw;     // or points per shear wavelength
  std::vector<double> lambdas{1.0, 2.0, 4.0, 8.0, 16.0};
  std::vector<std::pair<int, double>> level_variants{{3, 0.2}, {3, 0.4}, {4, 0.4}};
  SolverOverrides solver;
  std::string formulation = "mixed";
  int source_component = -1;
  bool dump_wavefields = false;
  bool refine = false;
  std::string out_dir = "results";

  Grid grid() const { return Grid(dims, spacing); }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const char* ctx,
                                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(ctx) + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + ctx);
  }
}

inline BlockPrecision precision_from_name(const std::string& s) {
  if (s == "half") return BlockPrecision::Half;
  if (s == "single") return BlockPrecision::Single;
  if (s == "double") return BlockPrecision::Double;
  throw ConfigError("block_precision must be half, single, or double");
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  using nlohmann::json;
  ExperimentConfig cfg;
  try {
    detail::reject_unknown_keys(j, "config",
                                {"experiment", "grid", "model", "attenuation", "omega", "ppw",
                                 "lambdas", "levels_variants", "solver", "formulation",
                                 "source_component", "dump_wavefield", "refine", "out"});
    if (j.contains("experiment")) {
      cfg.kind = experiment_from_name(j.at("experiment"));
      cfg.kind_explicit = true;
    }

    const json& jg = j.at("grid");
    detail::reject_unknown_keys(jg, "grid", {"dims", "spacing"});
    cfg.dims = jg.at("dims").get<std::vector<int>>();
    cfg.spacing = jg.at("spacing").get<std::vector<double>>();

    if (j.contains("model")) {
      const json& jm = j.at("model");
      detail::reject_unknown_keys(jm, "model",
                                  {"kind", "rho", "mu", "lambda", "vs_top", "vs_bottom",
                                   "rho_top", "rho_bottom", "vp_vs_ratio", "layers", "contrast",
                                   "seed", "vp_file", "vs_file", "rho_file", "value_kind"});
      cfg.model.kind = jm.value("kind", std::string("constant"));
      cfg.model.rho = jm.value("rho", 1.0);
      cfg.model.mu = jm.value("mu", 1.0);
      cfg.model.lambda = jm.value("lambda", 1.0);
      cfg.model.linear.vs_top = jm.value("vs_top", cfg.model.linear.vs_top);
      cfg.model.linear.vs_bottom = jm.value("vs_bottom", cfg.model.linear.vs_bottom);
      cfg.model.linear.rho_top = jm.value("rho_top", cfg.model.linear.rho_top);
      cfg.model.linear.rho_bottom = jm.value("rho_bottom", cfg.model.linear.rho_bottom);
      cfg.model.linear.vp_vs_ratio = jm.value("vp_vs_ratio", cfg.model.linear.vp_vs_ratio);
      cfg.model.layered.vs_top = jm.value("vs_top", cfg.model.layered.vs_top);
      cfg.model.layered.vs_bottom = jm.value("vs_bottom", cfg.model.layered.vs_bottom);
      cfg.model.layered.vp_vs_ratio = jm.value("vp_vs_ratio", cfg.model.layered.vp_vs_ratio);
      cfg.model.layered.layer_count = jm.value("layers", cfg.model.layered.layer_count);
      cfg.model.layered.contrast = jm.value("contrast", cfg.model.layered.contrast);
      cfg.model.layered.seed = jm.value("seed", cfg.model.layered.seed);
      cfg.model.vp_file = jm.value("vp_file", std::string());
      cfg.model.vs_file = jm.value("vs_file", std::string());
      cfg.model.rho_file = jm.value("rho_file", std::string());
      const std::string vk = jm.value("value_kind", std::string("float32"));
      if (vk == "float32")
        cfg.model.value_kind = RawValueKind::Float32;
      else if (vk == "float64")
        cfg.model.value_kind = RawValueKind::Float64;
      else
        throw ConfigError("model.value_kind must be float32 or float64");
    }

    if (j.contains("attenuation")) {
      const json& ja = j.at("attenuation");
      detail::reject_unknown_keys(ja, "attenuation",
                                  {"abl_cells", "abl_amplitude", "bulk_factor", "sides"});
      cfg.attenuation.abl_cells = ja.value("abl_cells", cfg.attenuation.abl_cells);
      if (ja.contains("abl_amplitude") && !ja.at("abl_amplitude").is_null())
        cfg.attenuation.abl_amplitude = ja.at("abl_amplitude").get<double>();
      cfg.attenuation.bulk_factor = ja.value("bulk_factor", cfg.attenuation.bulk_factor);
      if (ja.contains("sides")) {
        const auto sides = ja.at("sides").get<std::vector<bool>>();
        if (sides.size() != 2 * cfg.dims.size())
          throw ConfigError("attenuation.sides must list 2*dim flags");
        for (std::size_t i = 0; i < sides.size(); ++i) cfg.attenuation.sides[i] = sides[i];
      }
    }

    if (j.contains("omega")) cfg.omegas = j.at("omega").get<std::vector<double>>();
    if (j.contains("ppw")) cfg.ppw = j.at("ppw").get<std::vector<double>>();
    if (j.contains("lambdas")) cfg.lambdas = j.at("lambdas").get<std::vector<double>>();
    if (j.contains("levels_variants")) {
      cfg.level_variants.clear();
      for (const auto& v : j.at("levels_variants")) {
        if (!v.is_array() || v.size() != 2)
          throw ConfigError("levels_variants entries must be [levels, alpha] pairs");
        cfg.level_variants.emplace_back(v[0].get<int>(), v[1].get<double>());
      }
    }

    if (j.contains("solver")) {
      const json& js = j.at("solver");
      detail::reject_unknown_keys(
          js, "solver",
          {"alpha", "levels", "cycle", "pre_sweeps", "post_sweeps", "damping", "restart", "tol",
           "max_applications", "jacobi_weight", "block_precision"});
      if (js.contains("alpha")) cfg.solver.alpha = js.at("alpha").get<double>();
      if (js.contains("levels")) cfg.solver.levels = js.at("levels").get<int>();
      if (js.contains("cycle")) {
        const std::string c = js.at("cycle").get<std::string>();
        if (c != "V" && c != "W") throw ConfigError("solver.cycle must be \"V\" or \"W\"");
        cfg.solver.cycle = c[0];
      }
      if (js.contains("pre_sweeps")) cfg.solver.pre_sweeps = js.at("pre_sweeps").get<int>();
      if (js.contains("post_sweeps")) cfg.solver.post_sweeps = js.at("post_sweeps").get<int>();
      if (js.contains("damping"))
        cfg.solver.damping = js.at("damping").get<std::vector<double>>();
      if (js.contains("restart")) cfg.solver.restart = js.at("restart").get<int>();
      if (js.contains("tol")) cfg.solver.tol = js.at("tol").get<double>();
      if (js.contains("max_applications"))
        cfg.solver.max_applications = js.at("max_applications").get<int>();
      if (js.contains("jacobi_weight"))
        cfg.solver.jacobi_weight = js.at("jacobi_weight").get<double>();
      if (js.contains("block_precision"))
        cfg.solver.block_precision =
            detail::precision_from_name(js.at("block_precision").get<std::string>());
    }

    cfg.formulation = j.value("formulation", cfg.formulation);
    if (cfg.formulation != "mixed" && cfg.formulation != "standard")
      throw ConfigError("formulation must be mixed or standard");
    cfg.source_component = j.value("source_component", cfg.source_component);
    cfg.dump_wavefields = j.value("dump_wavefield", cfg.dump_wavefields);
    cfg.refine = j.value("refine", cfg.refine);
    cfg.out_dir = j.value("out", cfg.out_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (cfg.dims.size() != cfg.spacing.size() || (cfg.dims.size() != 2 && cfg.dims.size() != 3))
    throw ConfigError("grid.dims and grid.spacing must both have 2 or 3 entries");
  for (int d : cfg.dims)
    if (d < 2) throw ConfigError("grid.dims entries must be >= 2");
  for (double s : cfg.spacing)
    if (!(s > 0.0)) throw ConfigError("grid.spacing entries must be positive");
  if (cfg.omegas.empty() && cfg.ppw.empty())
    throw ConfigError("config needs either omega or ppw");
  if (!cfg.omegas.empty() && !cfg.ppw.empty())
    throw ConfigError("config must give omega or ppw, not both");
  return cfg;
}

// Kind-specific validation, run once the experiment kind is final (the CLI
// subcommand may supply it when the config omits "experiment").
inline void validate_experiment(const ExperimentConfig& cfg) {
  if (cfg.kind == ExperimentKind::LambdaSweep && cfg.model.kind != "constant")
    throw ConfigError("lambda-sweep requires a constant model");
  if (cfg.kind == ExperimentKind::LambdaSweep && cfg.lambdas.empty())
    throw ConfigError("lambda-sweep requires a nonempty lambdas list");
  if (cfg.kind == ExperimentKind::Check3d && cfg.dims.size() != 3)
    throw ConfigError("check-3d requires a 3D grid");
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }
  return parse_experiment_config(j);
}

inline MediumModel build_model(const ExperimentConfig& cfg, const Grid& g,
                               std::optional<std::uint64_t> seed_override = {}) {
  if (cfg.model.kind == "constant")
    return make_constant_model(g, cfg.model.rho, cfg.model.mu, cfg.model.lambda);
  if (cfg.model.kind == "linear") return make_linear_model(g, cfg.model.linear);
  if (cfg.model.kind == "layered") {
    LayeredModelSpec spec = cfg.model.layered;
    if (seed_override) spec.seed = *seed_override;
    return make_layered_model(g, spec);
  }
  if (cfg.model.kind == "raw") {
    if (cfg.model.vp_file.empty() || cfg.model.vs_file.empty() || cfg.model.rho_file.empty())
      throw ConfigError("raw model needs vp_file, vs_file, and rho_file");
    const long nc = g.cell_count();
    const auto vp = load_raw_model(cfg.model.vp_file, nc, cfg.model.value_kind);
    const auto vs = load_raw_model(cfg.model.vs_file, nc, cfg.model.value_kind);
    const auto rho = load_raw_model(cfg.model.rho_file, nc, cfg.model.value_kind);
    MediumModel m;
    m.rho = rho;
    m.mu.resize(vp.size());
    m.lambda.resize(vp.size());
    m.gamma.assign(vp.size(), 0.0);
    for (std::size_t i = 0; i < vp.size(); ++i) {
      m.mu[i] = rho[i] * vs[i] * vs[i];
      m.lambda[i] = rho[i] * vp[i] * vp[i] - 2.0 * m.mu[i];
    }
    return m;
  }
  throw ConfigError("unknown model kind '" + cfg.model.kind + "'");
}

inline std::vector<double> resolve_omegas(const ExperimentConfig& cfg, const Grid& g,
                                          const MediumModel& m) {
  if (!cfg.omegas.empty()) return cfg.omegas;
  std::vector<double> out;
  out.reserve(cfg.ppw.size());
  for (double p : cfg.ppw) out.push_back(omega_for_ppw(g, m, p));
  return out;
}

inline std::string grid_label(const Grid& g) {
  std::string s = std::to_string(g.cells(0));
  for (int a = 1; a < g.dim(); ++a) s += "x" + std::to_string(g.cells(a));
  return s;
}

namespace detail {

inline ResultRow make_row(const Grid& g, double omega, std::optional<double> lambda,
                          std::string variant, const SolveReport& rep) {
  ResultRow r;
  r.grid = grid_label(g);
  r.omega = omega;
  r.lambda = lambda;
  r.variant = std::move(variant);
  r.iters = rep.iterations;
  r.converged = rep.converged;
  r.setup_s = rep.setup_seconds;
  r.solve_s = rep.solve_seconds;
  return r;
}

}  // namespace detail

// Constant-coefficient sweep over lambda and omega, pairing the standard
// displacement formulation (W(2,2), damped Jacobi) against the mixed
// formulation (W(1,1), red-black cell relaxation).
inline std::vector<ResultRow> run_lambda_sweep(const ExperimentConfig& cfg,
                                               std::string* sigma_comment = nullptr) {
  const Grid g = cfg.grid();
  std::vector<ResultRow> rows;
  if (sigma_comment) {
    std::string s = "sigma:";
    for (double lam : cfg.lambdas) {
      const double sigma = lam / (2.0 * (lam + cfg.model.mu));
      s += " lambda=" + format_double(lam, "%g") + " sigma=" + format_double(sigma, "%.4g");
    }
    *sigma_comment = s;
  }
  MediumModel probe = make_constant_model(g, cfg.model.rho, cfg.model.mu, cfg.lambdas.front());
  const std::vector<double> omegas = resolve_omegas(cfg, g, probe);
  for (double omega : omegas) {
    const std::vector<double> gamma = build_gamma(g, cfg.attenuation, omega);
    for (double lam : cfg.lambdas) {
      MediumModel m = make_constant_model(g, cfg.model.rho, cfg.model.mu, lam);
      m.gamma = gamma;

      ElasticSolveOptions std_opt;
      std_opt.formulation = Formulation::Standard;
      std_opt.cycle = default_standard_cycle();
      std_opt.source_component = cfg.source_component;
      cfg.solver.apply(std_opt.krylov, std_opt.cycle);
      const auto std_res = solve_elastic(g, m, omega, std_opt);
      rows.push_back(detail::make_row(g, omega, lam, "standard", std_res.report));

      ElasticSolveOptions mix_opt;
      mix_opt.formulation = Formulation::Mixed;
      mix_opt.cycle = default_mixed_cycle();
      mix_opt.source_component = cfg.source_component;
      cfg.solver.apply(mix_opt.krylov, mix_opt.cycle);
      const auto mix_res = solve_elastic(g, m, omega, mix_opt);
      rows.push_back(detail::make_row(g, omega, lam, "mixed", mix_res.report));
    }
  }
  return rows;
}

// Acoustic solves on the shear velocity versus mixed-formulation elastic
// solves at matched omega.
inline std::vector<ResultRow> run_acoustic_vs_elastic(const ExperimentConfig& cfg,
                                                      std::optional<std::uint64_t> seed = {}) {
  const Grid g = cfg.grid();
  MediumModel m = build_model(cfg, g, seed);
  const auto [vp, vs] = velocities(m);
  (void)vp;
  std::vector<ResultRow> rows;
  for (double omega : resolve_omegas(cfg, g, m)) {
    const std::vector<double> gamma = build_gamma(g, cfg.attenuation, omega);

    AcousticSolveOptions ac_opt;
    ac_opt.cycle = default_pointwise_cycle();
    cfg.solver.apply(ac_opt.krylov, ac_opt.cycle);
    const auto ac = solve_acoustic(g, vs, m.rho, gamma, omega, ac_opt);
    rows.push_back(detail::make_row(g, omega, {}, "acoustic", ac.report));

    MediumModel em = m;
    em.gamma = gamma;
    ElasticSolveOptions el_opt;
    el_opt.formulation = Formulation::Mixed;
    el_opt.cycle = default_mixed_cycle();
    el_opt.source_component = cfg.source_component;
    cfg.solver.apply(el_opt.krylov, el_opt.cycle);
    const auto el = solve_elastic(g, em, omega, el_opt);
    rows.push_back(detail::make_row(g, omega, {}, "elastic", el.report));
  }
  return rows;
}

// Mixed-formulation solves across (levels, shift) variants on a
// heterogeneous model.
inline std::vector<ResultRow> run_levels_study(const ExperimentConfig& cfg,
                                               std::optional<std::uint64_t> seed = {}) {
  const Grid g = cfg.grid();
  MediumModel m = build_model(cfg, g, seed);
  std::vector<ResultRow> rows;
  for (double omega : resolve_omegas(cfg, g, m)) {
    MediumModel em = m;
    em.gamma = build_gamma(g, cfg.attenuation, omega);
    for (const auto& [levels, alpha] : cfg.level_variants) {
      ElasticSolveOptions opt;
      opt.formulation = Formulation::Mixed;
      opt.cycle = default_mixed_cycle(levels);
      opt.source_component = cfg.source_component;
      cfg.solver.apply(opt.krylov, opt.cycle);
      opt.cycle.levels = levels;
      opt.krylov.alpha = alpha;
      const auto res = solve_elastic(g, em, omega, opt);
      rows.push_back(detail::make_row(
          g, omega, {},
          "levels=" + std::to_string(levels) + " alpha=" + format_double(alpha, "%g"),
          res.report));
    }
  }
  return rows;
}

inline std::vector<ResultRow> run_solve(const ExperimentConfig& cfg,
                                        std::optional<std::uint64_t> seed = {}) {
  const Grid g = cfg.grid();
  MediumModel m = build_model(cfg, g, seed);
  std::vector<ResultRow> rows;
  int index = 0;
  for (double omega : resolve_omegas(cfg, g, m)) {
    MediumModel em = m;
    em.gamma = build_gamma(g, cfg.attenuation, omega);
    ElasticSolveOptions opt;
    opt.formulation = cfg.formulation == "mixed" ? Formulation::Mixed : Formulation::Standard;
    opt.cycle = opt.formulation == Formulation::Mixed ? default_mixed_cycle()
                                                      : default_standard_cycle();
    opt.source_component = cfg.source_component;
    cfg.solver.apply(opt.krylov, opt.cycle);
    const auto res = solve_elastic(g, em, omega, opt);
    rows.push_back(detail::make_row(g, omega, {}, cfg.formulation, res.report));
    if (cfg.dump_wavefields) {
      dump_wavefield(g, em, res.field, omega,
                     cfg.out_dir + "/wavefield_" + std::to_string(index));
    }
    ++index;
  }
  return rows;
}

// Small 3D trend check: solve at the configured size, then optionally once
// more on a doubled grid with omega scaled to keep points-per-wavelength
// fixed.
inline std::vector<ResultRow> run_check3d(const ExperimentConfig& cfg,
                                          std::optional<std::uint64_t> seed = {}) {
  std::vector<ResultRow> rows;
  auto solve_one = [&](const Grid& g, double omega, const AttenuationConfig& att) {
    MediumModel m = build_model(cfg, g, seed);
    m.gamma = build_gamma(g, att, omega);
    bool divisible = true;
    for (int a = 0; a < g.dim(); ++a) divisible = divisible && g.cells(a) % 8 == 0;
    const int levels = cfg.solver.levels.value_or(divisible ? 4 : 3);
    ElasticSolveOptions opt;
    opt.formulation = Formulation::Mixed;
    opt.cycle = default_mixed_cycle(levels);
    opt.source_component = cfg.source_component;
    opt.krylov.alpha = 0.4;
    cfg.solver.apply(opt.krylov, opt.cycle);
    opt.cycle.levels = levels;
    const auto res = solve_elastic(g, m, omega, opt);
    rows.push_back(detail::make_row(
        g, omega, {},
        "mixed levels=" + std::to_string(levels) + " alpha=" +
            format_double(opt.krylov.alpha, "%g"),
        res.report));
  };

  const Grid g = cfg.grid();
  const MediumModel probe = build_model(cfg, g, seed);
  solve_one(g, resolve_omegas(cfg, g, probe).front(), cfg.attenuation);
  if (cfg.refine) {
    // one refinement at fixed points per wavelength, keeping the physical
    // absorbing-layer thickness
    std::vector<int> dims2;
    std::vector<double> spacing2;
    for (std::size_t a = 0; a < cfg.dims.size(); ++a) {
      dims2.push_back(cfg.dims[a] * 2);
      spacing2.push_back(cfg.spacing[a] / 2.0);
    }
    const Grid g2(dims2, spacing2);
    AttenuationConfig att2 = cfg.attenuation;
    att2.abl_cells *= 2;
    const MediumModel probe2 = build_model(cfg, g2, seed);
    const double omega2 = cfg.ppw.empty() ? resolve_omegas(cfg, g, probe).front() * 2.0
                                          : resolve_omegas(cfg, g2, probe2).front();
    solve_one(g2, omega2, att2);
  }
  return rows;
}

// Dispatches one experiment, writes results.csv under the output directory,
// and mirrors the rows on stdout.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg,
                                             std::optional<std::uint64_t> seed = {}) {
  validate_experiment(cfg);
  std::vector<ResultRow> rows;
  std::optional<std::string> comment;
  switch (cfg.kind) {
    case ExperimentKind::LambdaSweep: {
      std::string sigma;
      rows = run_lambda_sweep(cfg, &sigma);
      comment = sigma;
      break;
    }
    case ExperimentKind::AcousticVsElastic:
      rows = run_acoustic_vs_elastic(cfg, seed);
      break;
    case ExperimentKind::LevelsStudy:
      rows = run_levels_study(cfg, seed);
      break;
    case ExperimentKind::Check3d:
      rows = run_check3d(cfg, seed);
      break;
    default:
      rows = run_solve(cfg, seed);
      break;
  }
  std::filesystem::create_directories(cfg.out_dir);
  write_result_csv(cfg.out_dir + "/results.csv", rows, comment);
  std::cout << kCsvHeader << "\n";
  for (const ResultRow& r : rows)
    std::cout << r.grid << "," << format_double(r.omega) << ","
              << (r.lambda ? format_double(*r.lambda) : std::string()) << "," << r.variant << ","
              << r.iters << "," << (r.converged ? 1 : 0) << "," << format_double(r.setup_s, "%.3f")
              << "," << format_double(r.solve_s, "%.3f") << "\n";
  return rows;
}

}  // namespace helmix

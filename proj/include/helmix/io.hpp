// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "helmix/assembly.hpp"
#include "helmix/grid.hpp"
#include "helmix/model.hpp"

namespace helmix {

namespace detail {

inline void write_complex_grid(const std::string& path, const std::vector<cplx>& field) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("dump_wavefield: cannot open " + path);
  std::vector<double> buf(field.size() * 2);
  for (std::size_t i = 0; i < field.size(); ++i) {
    buf[2 * i] = field[i].real();
    buf[2 * i + 1] = field[i].imag();
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!out) throw std::runtime_error("dump_wavefield: write failed on " + path);
}

}  // namespace detail

// Per-component raw dumps (little-endian float64, interleaved re/im, each on
// its own staggered grid) plus a JSON sidecar describing the layout. The
// pressure is recomputed from the displacement field.
inline void dump_wavefield(const Grid& g, const MediumModel& m, const StaggeredField& field,
                           double omega, const std::string& dir) {
  field.validate(g);
  std::filesystem::create_directories(dir);
  nlohmann::json sidecar;
  sidecar["omega"] = omega;
  for (int a = 0; a < g.dim(); ++a) {
    sidecar["dims"].push_back(g.cells(a));
    sidecar["spacing"].push_back(g.spacing(a));
  }
  sidecar["components"] = nlohmann::json::array();

  for (int d = 0; d < g.dim(); ++d) {
    const std::string name = "u" + std::to_string(d + 1);
    const std::string file = name + ".bin";
    const auto off = static_cast<std::size_t>(g.face_offset(d));
    const auto cnt = static_cast<std::size_t>(g.face_count(d));
    const std::vector<cplx> comp(field.u.begin() + off, field.u.begin() + off + cnt);
    detail::write_complex_grid(dir + "/" + file, comp);
    nlohmann::json jc;
    jc["name"] = name;
    jc["file"] = file;
    const auto fd = g.face_dims(d);
    for (int a = 0; a < g.dim(); ++a) jc["dims"].push_back(fd[a]);
    sidecar["components"].push_back(jc);
  }

  const std::vector<cplx> p = pressure_from_displacement(g, m, field.u);
  detail::write_complex_grid(dir + "/p.bin", p);
  nlohmann::json jp;
  jp["name"] = "p";
  jp["file"] = "p.bin";
  for (int a = 0; a < g.dim(); ++a) jp["dims"].push_back(g.cells(a));
  sidecar["components"].push_back(jp);

  std::ofstream meta(dir + "/wavefield.json", std::ios::trunc);
  if (!meta) throw std::runtime_error("dump_wavefield: cannot open sidecar in " + dir);
  meta << sidecar.dump(2) << "\n";
}

struct ResultRow {
  std::string grid;
  double omega = 0.0;
  std::optional<double> lambda;
  std::string variant;
  int iters = 0;
  bool converged = false;
  double setup_s = 0.0;
  double solve_s = 0.0;
};

inline constexpr const char* kCsvHeader = "grid,omega,lambda,variant,iters,converged,setup_s,solve_s";

inline std::string format_double(double v, const char* fmt = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

inline void write_result_csv(const std::string& path, const std::vector<ResultRow>& rows,
                             const std::optional<std::string>& comment = {}) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_result_csv: cannot open " + path);
  if (comment) out << "# " << *comment << "\n";
  out << kCsvHeader << "\n";
  for (const ResultRow& r : rows) {
    out << r.grid << "," << format_double(r.omega) << ","
        << (r.lambda ? format_double(*r.lambda) : std::string()) << "," << r.variant << ","
        << r.iters << "," << (r.converged ? 1 : 0) << "," << format_double(r.setup_s, "%.3f")
        << "," << format_double(r.solve_s, "%.3f") << "\n";
  }
  if (!out) throw std::runtime_error("write_result_csv: write failed on " + path);
}

}  // namespace helmix

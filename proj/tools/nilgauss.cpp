// nilgauss: minimal surfaces in Nil3 from harmonic Gauss maps.
//
//   nilgauss list-examples
//   nilgauss generate --example hemisphere --radius 0.8 --n 64 --out hemi.obj --report hemi.json
//   nilgauss verify --map "z/2" --tol-all 1e-9
//   nilgauss export --example semitrough --format ply --out trough.ply
//
// Exit status: 0 pass, 1 verification failure, 2 precondition or input error, 3 I/O error.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "nilgauss/errors.hpp"
#include "nilgauss/expression.hpp"
#include "nilgauss/gallery.hpp"
#include "nilgauss/pipeline.hpp"

using namespace nilgauss;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitIo = 3;

Complex parse_complex(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing characters");
      return {re, 0.0};
    }
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument("trailing characters");
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument("trailing characters");
    return {re, im};
  } catch (const std::exception&) {
    throw std::invalid_argument(fmt::format("{} expects RE,IM (got '{}')", flag, text));
  }
}

struct Options {
  SurfaceSpec spec;
  std::string z0, F0;
  std::string out;
  std::string format;
  std::string report;
  Tolerances tol;
  std::optional<double> tol_all;
  bool quiet = false;
};

void add_surface_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--example", o.spec.example, "Gallery surface (see list-examples)");
  cmd->add_option("--map", o.spec.map, "User Gauss map g(z), e.g. \"z/2 + 0.1*conj(z)\"");
  cmd->add_option("--theta", o.spec.params.theta, "translation-invariant: theta");
  cmd->add_option("--a", o.spec.params.a, "helicoid: a (nonzero)");
  cmd->add_option("--radius", o.spec.params.radius, "hemisphere: disk radius in (0, 1)");
  cmd->add_option("--umin", o.spec.umin);
  cmd->add_option("--umax", o.spec.umax);
  cmd->add_option("--vmin", o.spec.vmin);
  cmd->add_option("--vmax", o.spec.vmax);
  cmd->add_option("--n", o.spec.n, "Grid nodes per axis")->check(CLI::Range(2, 4096));
  cmd->add_option("--z0", o.z0, "Base point RE,IM");
  cmd->add_option("--F0", o.F0, "F at the base point RE,IM");
  cmd->add_option("--h0", o.spec.h0, "h at the base point");
  cmd->add_option("--subdivisions", o.spec.subdivisions, "Quadrature panels per unit length (>= 16)");
  cmd->add_option("--threads", o.spec.threads, "Worker threads for the grid sweep")->check(CLI::Range(1, 256));
  cmd->add_flag("--quiet", o.quiet, "Only print failures");
}

void add_tolerance_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol-conformality", o.tol.conformality);
  cmd->add_option("--tol-minimality", o.tol.minimality);
  cmd->add_option("--tol-harmonic", o.tol.harmonic);
  cmd->add_option("--tol-integrability", o.tol.integrability);
  cmd->add_option("--tol-metric", o.tol.metric);
  cmd->add_option("--tol-round-trip", o.tol.round_trip);
  cmd->add_option("--tol-abresch-rosenberg", o.tol.abresch_rosenberg);
  cmd->add_option("--tol-hopf", o.tol.hopf);
  cmd->add_option("--tol-path", o.tol.path);
  cmd->add_option("--tol-closed-form", o.tol.closed_form);
  cmd->add_option("--tol-graph", o.tol.graph);
  cmd->add_option("--tol-h-integrability", o.tol.h_integrability);
  cmd->add_option("--tol-all", o.tol_all, "Override every tolerance");
}

ResolvedSurface resolve_options(Options& o) {
  if (!o.z0.empty()) o.spec.z0 = parse_complex(o.z0, "--z0");
  if (!o.F0.empty()) o.spec.F0 = parse_complex(o.F0, "--F0");
  if (o.tol_all) o.tol.set_all(*o.tol_all);
  return resolve(o.spec);
}

void print_checks(const PipelineResult& r, bool quiet) {
  for (const auto& c : r.checks) {
    if (quiet && c.pass) continue;
    std::cout << fmt::format("{:<4} {:<24} {:>12.3e}  (tol {:.1e})", c.pass ? "ok" : "FAIL", c.name, c.value,
                             c.tolerance);
    if (c.worst) std::cout << fmt::format("  at ({:.6g}, {:.6g})", c.worst->u, c.worst->v);
    std::cout << "\n";
  }
  std::cout << (r.pass ? "PASS" : "FAIL") << "\n";
}

int run_generate(Options& o, bool with_report) {
  const ResolvedSurface surface = resolve_options(o);
  if (o.out.empty() && !with_report) throw std::invalid_argument("--out is required");
  MeshFormat format = MeshFormat::Obj;
  if (!o.format.empty()) {
    format = parse_mesh_format(o.format);
  } else if (o.out.size() > 4 && o.out.substr(o.out.size() - 4) == ".ply") {
    format = MeshFormat::Ply;
  }
  const PipelineResult r = run_pipeline(surface, o.tol, with_report);
  if (r.precondition_failed) {
    const auto& c = r.checks.front();
    std::cerr << fmt::format("precondition '{}' failed: {} (value {:.3e} at ({:.6g}, {:.6g}))\n", c.name,
                             c.identity, c.value, c.worst->u, c.worst->v);
    if (!o.report.empty()) write_text_file(o.report, r.report.dump(2) + "\n");
    return kExitInput;
  }
  const SurfaceMesh mesh = build_mesh(*r.grid);
  if (!o.out.empty()) export_mesh(mesh, format, o.out);
  if (!o.report.empty()) write_text_file(o.report, r.report.dump(2) + "\n");
  if (!o.quiet) {
    std::cout << fmt::format("{} vertices, {} faces, {} excluded nodes\n", mesh.vertices.size(), mesh.faces.size(),
                             r.grid->excluded().size());
  }
  if (!with_report) return kExitPass;
  print_checks(r, o.quiet);
  return r.pass ? kExitPass : kExitFail;
}

int run_verify(Options& o) {
  const ResolvedSurface surface = resolve_options(o);
  const PipelineResult r = run_pipeline(surface, o.tol, true);
  if (!o.report.empty()) write_text_file(o.report, r.report.dump(2) + "\n");
  print_checks(r, o.quiet);
  return r.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal surfaces in Nil3 from harmonic maps into the hyperbolic disk"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Options o;
  auto* list = app.add_subcommand("list-examples", "List the gallery surfaces");
  auto* gen = app.add_subcommand("generate", "Integrate a surface, write the mesh and the report");
  auto* ver = app.add_subcommand("verify", "Integrate a surface and check every identity");
  auto* exp = app.add_subcommand("export", "Integrate a surface and write the mesh only");
  for (auto* cmd : {gen, ver, exp}) {
    add_surface_options(cmd, o);
    cmd->add_option("--report", o.report, "Report path (JSON)");
  }
  for (auto* cmd : {gen, exp}) {
    cmd->add_option("--out", o.out, "Mesh path");
    cmd->add_option("--format", o.format, "obj or ply (default from --out extension, else obj)");
  }
  for (auto* cmd : {gen, ver}) add_tolerance_options(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*list) {
      for (const auto& e : gallery_catalog()) std::cout << fmt::format("{:<22} {}\n", e.name, e.summary);
      return kExitPass;
    }
    if (*gen) return run_generate(o, true);
    if (*ver) return run_verify(o);
    if (*exp) return run_generate(o, false);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << ": " << e.path() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "error: --map: " << e.what() << "\n";
    return kExitInput;
  } catch (const PreconditionError& e) {
    std::cerr << fmt::format("precondition '{}' failed: {}\n", e.check(), e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

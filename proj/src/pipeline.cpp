#include "nilgauss/pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "nilgauss/errors.hpp"
#include "nilgauss/expression.hpp"

namespace nilgauss {

using nlohmann::ordered_json;

void Tolerances::set_all(double tol) {
  conformality = minimality = harmonic = integrability = metric = round_trip = tol;
  abresch_rosenberg = hopf = path = closed_form = graph = h_integrability = tol;
}

namespace {

ordered_json complex_json(Complex c) { return ordered_json::array({c.real(), c.imag()}); }

ordered_json point_json(DomainPoint p) { return ordered_json::array({p.u, p.v}); }

const char* path_name(PathStrategy p) {
  switch (p) {
    case PathStrategy::UThenV: return "u-then-v";
    case PathStrategy::VThenU: return "v-then-u";
    case PathStrategy::Custom: return "custom";
  }
  return "?";
}

struct ResidualCheckSpec {
  const char* name;
  const char* identity;
  double Tolerances::*tol;
};

const ResidualCheckSpec kResidualChecks[] = {
    {residual::kConformality, "F_z conj(F_zbar) + eta^2/4 = 0", &Tolerances::conformality},
    {residual::kMinimalityHorizontal, "F_zzbar = (i/4)(conj(eta) F_z + eta F_zbar)", &Tolerances::minimality},
    {residual::kMinimalityVertical, "eta_zbar + conj(eta)_z = 0", &Tolerances::minimality},
    {residual::kHarmonic, "(1 - |g|^2) g_zzbar + 2 conj(g) g_z g_zbar = 0", &Tolerances::harmonic},
    {residual::kIntegrability, "A_zbar = B_z = -8i g g_z conj(g_z) / (1 - |g|^2)^3", &Tolerances::integrability},
    {residual::kMetricFactor, "|F_z|^2 + |F_zbar|^2 + |eta|^2/2 = 16 (1 + |g|^2)^2 |g_z|^2 / (1 - |g|^2)^4",
     &Tolerances::metric},
    {residual::kRoundTrip, "stereographic image of the unit normal = g", &Tolerances::round_trip},
    {residual::kAbreschRosenberg, "<N, D_u X_u - D_v X_v - 2i D_u X_v> - i eta^2 = 4iQ",
     &Tolerances::abresch_rosenberg},
    {residual::kHIntegrability, "Im d/dzbar (h_z) = 0", &Tolerances::h_integrability},
    {residual::kHopfHolomorphy, "dQ/dzbar = 0", &Tolerances::hopf},
};

// Deterministic uniform double in [0, 1) from a 64-bit engine.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<std::pair<int, int>> sample_active_nodes(const ImmersionGrid& ig, int count, std::uint64_t seed) {
  std::vector<std::pair<int, int>> active;
  const auto& grid = ig.grid();
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      if (ig.sample(i, j)) active.emplace_back(i, j);
    }
  }
  std::vector<std::pair<int, int>> picked;
  if (active.empty()) return picked;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(active.size()));
    picked.push_back(active[std::min(idx, active.size() - 1)]);
  }
  return picked;
}

CheckResult make_check(std::string name, std::string identity, double value, double tol,
                       std::optional<DomainPoint> worst, bool at_least = false) {
  const bool pass = at_least ? value >= tol : value <= tol;
  return {std::move(name), std::move(identity), value, tol, pass, worst};
}

ordered_json check_json(const CheckResult& c) {
  ordered_json j;
  j["name"] = c.name;
  j["identity"] = c.identity;
  j["value"] = c.value;
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  if (c.worst) j["worst"] = point_json(*c.worst);
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------

ResolvedSurface resolve(const SurfaceSpec& spec) {
  if (spec.example.empty() == spec.map.empty()) {
    throw std::invalid_argument("exactly one of --example and --map is required");
  }
  std::optional<GallerySurface> gallery;
  std::optional<GaussMapFn> map;
  if (!spec.map.empty()) map = user_map(spec.map);
  GridSpec grid{-0.5, 0.5, -0.5, 0.5, 33, 33};
  IntegrationConfig cfg;
  cfg.z0 = {0.0, 0.0};
  cfg.F0 = 0.0;
  cfg.h0 = 0.0;
  ordered_json identity;

  if (!spec.example.empty()) {
    gallery = gallery_by_name(spec.example, spec.params);
    map = gallery->map;
    grid = gallery->default_grid;
    cfg = gallery->default_config();
    identity["kind"] = "example";
    identity["name"] = gallery->name;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : gallery->parameters) params[k] = v;
    identity["parameters"] = params;
    identity["hopf_constant"] = complex_json(gallery->hopf_constant);
  } else {
    identity["kind"] = "user";
    identity["expression"] = spec.map;
  }

  if (spec.umin) grid.umin = *spec.umin;
  if (spec.umax) grid.umax = *spec.umax;
  if (spec.vmin) grid.vmin = *spec.vmin;
  if (spec.vmax) grid.vmax = *spec.vmax;
  if (spec.n) grid.nu = grid.nv = *spec.n;
  grid.validate();

  if (spec.z0) {
    cfg.z0 = DomainPoint::from(*spec.z0);
    if (gallery && map->domain().contains(cfg.z0)) {
      cfg.F0 = gallery->F(cfg.z0);
      cfg.h0 = gallery->h(cfg.z0);
    }
  }
  if (spec.F0) cfg.F0 = *spec.F0;
  if (spec.h0) cfg.h0 = *spec.h0;
  if (spec.subdivisions) cfg.subdivisions_per_unit = *spec.subdivisions;
  cfg.threads = spec.threads;
  cfg.validate();
  return {*map, gallery, grid, cfg, identity};
}

// ---------------------------------------------------------------------------

SurfaceMesh build_mesh(const ImmersionGrid& ig) {
  const GridSpec& grid = ig.grid();
  SurfaceMesh mesh;
  std::vector<long> vertex_of(grid.size(), -1);
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      const ImmersionSample* s = ig.sample(i, j);
      if (!s) continue;
      const WirtingerJet2 jet = ig.map().jet(s->z);
      MeshVertex v;
      v.x = s->point();
      try {
        v.normal = ambient_from_frame(v.x, unit_normal(*s));
      } catch (const DegenerateImmersionError&) {
        v.normal = {0.0, 0.0, 0.0};
      }
      v.g_abs = std::abs(jet.val);
      v.lambda = induced_metric_factor(jet);
      const auto mr = minimality_residual(*s);
      v.residual = std::max({conformality_residual(*s), mr.horizontal, mr.vertical});
      vertex_of[grid.index(i, j)] = static_cast<long>(mesh.vertices.size());
      mesh.vertices.push_back(v);
    }
  }
  for (int j = 0; j + 1 < grid.nv; ++j) {
    for (int i = 0; i + 1 < grid.nu; ++i) {
      const long a = vertex_of[grid.index(i, j)];
      const long b = vertex_of[grid.index(i + 1, j)];
      const long c = vertex_of[grid.index(i + 1, j + 1)];
      const long d = vertex_of[grid.index(i, j + 1)];
      if (a < 0 || b < 0 || c < 0 || d < 0) continue;
      using I = std::size_t;
      mesh.faces.push_back({I(a), I(b), I(c)});
      mesh.faces.push_back({I(a), I(c), I(d)});
    }
  }
  return mesh;
}

MeshFormat parse_mesh_format(const std::string& name) {
  if (name == "obj") return MeshFormat::Obj;
  if (name == "ply") return MeshFormat::Ply;
  throw std::invalid_argument("unknown mesh format '" + name + "' (expected obj or ply)");
}

std::string mesh_to_string(const SurfaceMesh& mesh, MeshFormat format) {
  std::string out;
  if (format == MeshFormat::Obj) {
    out += "# nilgauss " + std::string(kToolVersion) + "\n";
    out += "# model coordinates of Nil3; the metric is not the Euclidean one of the viewer\n";
    out += fmt::format("# vertices {} faces {}\n", mesh.vertices.size(), mesh.faces.size());
    for (const auto& v : mesh.vertices) out += fmt::format("v {} {} {}\n", v.x.x1, v.x.x2, v.x.x3);
    for (const auto& v : mesh.vertices) out += fmt::format("vn {} {} {}\n", v.normal.b1, v.normal.b2, v.normal.b3);
    for (const auto& f : mesh.faces) {
      out += fmt::format("f {0}//{0} {1}//{1} {2}//{2}\n", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    return out;
  }
  out += "ply\nformat ascii 1.0\n";
  out += "comment nilgauss " + std::string(kToolVersion) + "\n";
  out += "comment model coordinates of Nil3; the metric is not the Euclidean one of the viewer\n";
  out += fmt::format("element vertex {}\n", mesh.vertices.size());
  for (const char* p : {"x", "y", "z", "nx", "ny", "nz", "g_abs", "lambda", "residual"}) {
    out += fmt::format("property double {}\n", p);
  }
  out += fmt::format("element face {}\n", mesh.faces.size());
  out += "property list uchar int vertex_indices\nend_header\n";
  for (const auto& v : mesh.vertices) {
    out += fmt::format("{} {} {} {} {} {} {} {} {}\n", v.x.x1, v.x.x2, v.x.x3, v.normal.b1, v.normal.b2, v.normal.b3,
                       v.g_abs, v.lambda, v.residual);
  }
  for (const auto& f : mesh.faces) out += fmt::format("3 {} {} {}\n", f[0], f[1], f[2]);
  return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing", path);
  os << contents;
  os.flush();
  if (!os) throw IoError("write failed", path);
}

void export_mesh(const SurfaceMesh& mesh, MeshFormat format, const std::string& path) {
  write_text_file(path, mesh_to_string(mesh, format));
}

// ---------------------------------------------------------------------------

PipelineResult run_pipeline(const ResolvedSurface& surface, const Tolerances& tol, bool with_checks) {
  PipelineResult result;
  const GridSpec& grid = surface.grid;
  const IntegrationConfig& cfg = surface.cfg;

  ordered_json report;
  report["tool"] = {{"name", "nilgauss"}, {"version", kToolVersion}};
  report["coordinates"] =
      "mesh vertices are raw model coordinates (x1, x2, x3) of Nil3; a Euclidean viewer does not show the Nil3 metric";
  report["surface"] = surface.identity;
  report["grid"] = {{"umin", grid.umin}, {"umax", grid.umax}, {"vmin", grid.vmin},
                    {"vmax", grid.vmax}, {"nu", grid.nu},     {"nv", grid.nv}};
  report["integration"] = {{"z0", point_json(cfg.z0)},
                           {"F0", complex_json(cfg.F0)},
                           {"h0", cfg.h0},
                           {"path", path_name(cfg.path)},
                           {"subdivisions_per_unit", cfg.subdivisions_per_unit}};

  try {
    result.grid.emplace(integrate_immersion(surface.map, grid, cfg));
  } catch (const PreconditionError& e) {
    result.precondition_failed = true;
    result.checks.push_back(make_check(e.check(), e.what(), e.value(),
                                       e.check() == "antiholomorphy" ? cfg.antiholomorphy_threshold
                                       : e.check() == "harmonicity"  ? cfg.harmonic_tolerance
                                                                     : 0.0,
                                       DomainPoint{e.u(), e.v()}));
    result.checks.back().pass = false;
    report["checks"] = ordered_json::array({check_json(result.checks.back())});
    report["pass"] = false;
    result.report = std::move(report);
    return result;
  }
  const ImmersionGrid& ig = *result.grid;

  // excluded nodes
  std::map<std::string, long> by_status;
  ordered_json excluded = ordered_json::array();
  for (const auto& e : ig.excluded()) {
    ++by_status[to_string(e.status)];
    if (excluded.size() < 200) {
      excluded.push_back({{"node", {e.i, e.j}}, {"z", point_json(e.z)}, {"status", to_string(e.status)}});
    }
  }
  report["grid"]["active"] = ig.active_count();
  report["grid"]["excluded_counts"] = by_status;
  report["grid"]["excluded"] = excluded;

  // Hopf coefficient estimate
  Complex q_sum = 0.0;
  long q_count = 0;
  std::vector<Complex> qs;
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      if (!ig.sample(i, j)) continue;
      qs.push_back(hopf_coefficient(surface.map.jet(grid.node(i, j))).q);
      q_sum += qs.back();
      ++q_count;
    }
  }
  const Complex q_mean = q_count ? q_sum / static_cast<double>(q_count) : Complex(0.0);
  double q_dev = 0.0;
  for (Complex q : qs) q_dev = std::max(q_dev, std::abs(q - q_mean));
  report["hopf"] = {{"mean", complex_json(q_mean)}, {"max_deviation", q_dev}};

  if (with_checks) {
    const ResidualReport& rr = ig.residuals();
    for (const auto& spec : kResidualChecks) {
      if (!rr.has(spec.name)) continue;
      const auto& e = rr.entry(spec.name);
      result.checks.push_back(make_check(spec.name, spec.identity, e.sup, tol.*(spec.tol), e.worst));
    }
    result.checks.push_back(make_check("antiholomorphy_margin", "min |g_z| >= threshold", ig.antiholomorphy().value,
                                       cfg.antiholomorphy_threshold, ig.antiholomorphy().at, true));

    if (surface.gallery) {
      const GallerySurface& s = *surface.gallery;
      double worst = 0.0;
      for (Complex q : qs) worst = std::max(worst, std::abs(q - s.hopf_constant));
      result.checks.push_back(make_check("hopf_constant", "Q equals the documented constant", worst, tol.hopf, {}));

      double cf = 0.0;
      DomainPoint cf_at{};
      for (int j = 0; j < grid.nv; ++j) {
        for (int i = 0; i < grid.nu; ++i) {
          const ImmersionSample* p = ig.sample(i, j);
          if (!p) continue;
          const double d = std::max(std::abs(p->F - s.F(p->z)), std::abs(p->h - s.h(p->z)));
          if (d > cf || std::isnan(d)) {
            cf = d;
            cf_at = p->z;
          }
        }
      }
      result.checks.push_back(
          make_check("closed_form", "integrated (F, h) = closed-form (F, h)", cf, tol.closed_form, cf_at));

      if (s.name == "translation-invariant") {
        const double theta = s.parameters.front().second;
        double gr = 0.0;
        DomainPoint gr_at{};
        for (int j = 0; j < grid.nv; ++j) {
          for (int i = 0; i < grid.nu; ++i) {
            const ImmersionSample* p = ig.sample(i, j);
            if (!p) continue;
            const Nil3Point x = p->point();
            const double rhs =
                0.5 * std::sinh(2 * theta) * (std::asinh(x.x2) + x.x2 * std::sqrt(1.0 + x.x2 * x.x2));
            const double d = std::abs(x.x3 - 0.5 * x.x1 * x.x2 - rhs);
            if (d > gr) {
              gr = d;
              gr_at = p->z;
            }
          }
        }
        result.checks.push_back(make_check("graph_relation",
                                           "x3 - x1 x2/2 = sinh(2 theta)(asinh x2 + x2 sqrt(1 + x2^2))/2", gr,
                                           tol.graph, gr_at));
      }
    }

    double pi = 0.0;
    DomainPoint pi_at{};
    for (auto [i, j] : sample_active_nodes(ig, 8, 0x6e696c33ULL)) {
      const DomainPoint target = grid.node(i, j);
      try {
        const double d = path_independence_check(surface.map, target, cfg);
        if (d > pi || std::isnan(d)) {
          pi = d;
          pi_at = target;
        }
      } catch (const std::exception&) {
        // one of the two L-paths leaves the good region; skip this target
      }
    }
    result.checks.push_back(
        make_check("path_independence", "u-then-v and v-then-u reconstructions agree", pi, tol.path, pi_at));
  }

  ordered_json checks = ordered_json::array();
  bool pass = true;
  for (const auto& c : result.checks) {
    checks.push_back(check_json(c));
    pass = pass && c.pass;
  }
  report["checks"] = checks;
  report["pass"] = pass;
  result.pass = pass;
  result.report = std::move(report);
  return result;
}

}  // namespace nilgauss

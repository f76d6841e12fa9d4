#pragma once

// End-to-end pipeline behind the command line: resolve a surface source
// (gallery example or user expression), integrate it, check every identity
// against its tolerance, and produce a triangle mesh plus a JSON report.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nilgauss/gallery.hpp"
#include "nilgauss/weierstrass.hpp"

namespace nilgauss {

inline constexpr const char* kToolVersion = "0.3.0";

struct Tolerances {
  double conformality = 1e-7;
  double minimality = 1e-6;
  double harmonic = 1e-8;
  double integrability = 1e-6;
  double metric = 1e-6;
  double round_trip = 1e-7;
  double abresch_rosenberg = 1e-6;
  double hopf = 1e-6;
  double path = 1e-8;
  double closed_form = 1e-6;
  double graph = 1e-8;
  double h_integrability = 1e-6;

  void set_all(double tol);
};

struct SurfaceSpec {
  std::string example;  ///< gallery name; empty when `map` is set
  std::string map;      ///< user expression
  GalleryParameters params;
  std::optional<double> umin, umax, vmin, vmax;
  std::optional<int> n;  ///< nodes per axis
  std::optional<Complex> z0;
  std::optional<Complex> F0;
  std::optional<double> h0;
  std::optional<int> subdivisions;
  int threads = 1;
};

/// A fully specified run: map, grid and integration settings.
struct ResolvedSurface {
  GaussMapFn map;
  std::optional<GallerySurface> gallery;
  GridSpec grid;
  IntegrationConfig cfg;
  nlohmann::ordered_json identity;
};

/// Throws std::invalid_argument / ParseError on bad input.
ResolvedSurface resolve(const SurfaceSpec& spec);

struct MeshVertex {
  Nil3Point x;
  AmbientVector normal;
  double g_abs = 0.0;
  double lambda = 0.0;
  double residual = 0.0;  ///< largest pointwise residual at the node
};

struct SurfaceMesh {
  std::vector<MeshVertex> vertices;
  std::vector<std::array<std::size_t, 3>> faces;  ///< 0-based
};

/// Two triangles per grid cell whose four corners are active, wound
/// counter-clockwise in (u, v) so face normals follow the upward branch.
SurfaceMesh build_mesh(const ImmersionGrid& grid);

enum class MeshFormat { Obj, Ply };

MeshFormat parse_mesh_format(const std::string& name);
std::string mesh_to_string(const SurfaceMesh& mesh, MeshFormat format);
/// Throws IoError.
void write_text_file(const std::string& path, const std::string& contents);
void export_mesh(const SurfaceMesh& mesh, MeshFormat format, const std::string& path);

struct CheckResult {
  std::string name;
  std::string identity;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::optional<DomainPoint> worst;
};

struct PipelineResult {
  std::optional<ImmersionGrid> grid;
  std::vector<CheckResult> checks;
  nlohmann::ordered_json report;
  bool pass = false;
  bool precondition_failed = false;
};

/// Integrates and verifies. Precondition failures are caught and turned into
/// a failing check instead of propagating.
PipelineResult run_pipeline(const ResolvedSurface& surface, const Tolerances& tol, bool with_checks = true);

}  // namespace nilgauss

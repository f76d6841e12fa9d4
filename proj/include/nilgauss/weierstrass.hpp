#pragma once

// Reconstruction of the conformal minimal immersion X = (F, h) into Nil3
// from a harmonic, nowhere antiholomorphic map g into the disk:
//   F_z    = -4i g_z / (1 - |g|^2)^2
//   F_zbar = -4i g^2 conj(g_z) / (1 - |g|^2)^2
//   h_z    = eta/2 - (i/4)(conj(F) F_z - F conj(F)_z),  eta = 8i conj(g) g_z / (1 - |g|^2)^2
// F and h are integrated together along axis-aligned paths from a base point.

#include <string>
#include <vector>

#include "nilgauss/harmonic.hpp"
#include "nilgauss/nil3.hpp"
#include "nilgauss/numerics.hpp"

namespace nilgauss {

/// A = F_z and B = F_zbar prescribed by the Gauss map.
struct FIntegrands {
  Complex a;
  Complex b;
};

FIntegrands f_integrands(const WirtingerJet2& j);

/// -8i g g_z conj(g_z) / (1 - |g|^2)^3, the common value of A_zbar and B_z for harmonic g.
Complex integrability_closed_form(const WirtingerJet2& j);

struct IntegrabilityResidual {
  double cross = 0.0;       ///< |A_zbar - B_z|, both differenced
  double a_closed = 0.0;    ///< |A_zbar - closed form|
  double b_closed = 0.0;    ///< |B_z - closed form|
  double max() const;
};

/// Differenced integrability of the F system at z. Throws std::domain_error
/// when the stencil leaves the map's domain.
IntegrabilityResidual integrability_residual(const GaussMapFn& g, DomainPoint z, double step);

/// eta/2 - (i/4)(conj(F) F_z - F conj(F_zbar))
Complex h_integrand(const WirtingerJet2& j, Complex F, Complex F_dz, Complex F_dzbar);

/// Sample of the immersion at z with F, h given and every derivative taken
/// from the Gauss map's jet.
ImmersionSample immersion_sample(const WirtingerJet2& g, DomainPoint z, Complex F, double h);

enum class PathStrategy {
  UThenV,  ///< along u from the base point, then along v
  VThenU,
  Custom,  ///< base point, waypoints, target
};

struct IntegrationConfig {
  DomainPoint z0;
  Complex F0;
  double h0 = 0.0;
  PathStrategy path = PathStrategy::UThenV;
  std::vector<DomainPoint> waypoints;
  /// Quadrature panels per unit length of path (at least 16).
  int subdivisions_per_unit = 256;
  /// Worker threads for the per-column sweeps; output does not depend on it.
  int threads = 1;
  /// Nodes with |g| > 1 - disk_margin are excluded.
  double disk_margin = 1e-6;
  double harmonic_tolerance = 1e-6;
  double antiholomorphy_threshold = 1e-8;
  /// Stencil half-step for the differenced checks.
  double stencil_step = 2.5e-4;

  void validate() const;
};

struct ImmersionState {
  Complex F;
  double h = 0.0;
};

/// Integrates (F, h) along the polyline, starting from `start` at its first vertex.
/// Throws EvaluationError / OutOfDiskError if the path leaves the map's good region.
ImmersionState integrate_along(const GaussMapFn& g, const std::vector<DomainPoint>& path, ImmersionState start,
                               int subdivisions_per_unit);

/// (F, h) at `target` along the configured path strategy from (z0, F0, h0).
ImmersionState integrate_to(const GaussMapFn& g, DomainPoint target, const IntegrationConfig& cfg);

enum class NodeStatus {
  Active,
  OutsideDomain,
  NearUnitCircle,  ///< |g| > 1 - disk_margin
  EvaluationFailed,
  Unreachable,  ///< the integration path was cut before this node
};

const char* to_string(NodeStatus s);

struct ExcludedNode {
  int i = 0;
  int j = 0;
  DomainPoint z;
  NodeStatus status = NodeStatus::Active;
};

/// Residual names recorded by integrate_immersion.
namespace residual {
inline constexpr const char* kConformality = "conformality";
inline constexpr const char* kMinimalityHorizontal = "minimality_horizontal";
inline constexpr const char* kMinimalityVertical = "minimality_vertical";
inline constexpr const char* kHarmonic = "harmonic";
inline constexpr const char* kMetricFactor = "metric_factor_relative";
inline constexpr const char* kRoundTrip = "gauss_map_round_trip";
inline constexpr const char* kAbreschRosenberg = "abresch_rosenberg";
inline constexpr const char* kHIntegrability = "h_integrability";
inline constexpr const char* kIntegrability = "integrability";
inline constexpr const char* kHopfHolomorphy = "hopf_holomorphy";
}  // namespace residual

class ImmersionGrid {
 public:
  ImmersionGrid(GridSpec grid, GaussMapFn map, IntegrationConfig cfg);

  const GridSpec& grid() const { return grid_; }
  const GaussMapFn& map() const { return map_; }
  const IntegrationConfig& config() const { return cfg_; }

  /// nullptr for excluded nodes.
  const ImmersionSample* sample(int i, int j) const;
  NodeStatus status(int i, int j) const { return status_[grid_.index(i, j)]; }
  std::vector<ExcludedNode> excluded() const;
  std::size_t active_count() const;

  const ResidualReport& residuals() const { return report_; }
  const GridExtremum& antiholomorphy() const { return margin_; }

 private:
  friend ImmersionGrid integrate_immersion(const GaussMapFn&, const GridSpec&, const IntegrationConfig&);

  GridSpec grid_;
  GaussMapFn map_;
  IntegrationConfig cfg_;
  std::vector<NodeStatus> status_;
  std::vector<ImmersionSample> samples_;
  ResidualReport report_;
  GridExtremum margin_;
};

/// Integrates the immersion on every reachable grid node and records all
/// pointwise residuals. Throws PreconditionError if g fails the harmonicity,
/// antiholomorphy or base-point checks.
ImmersionGrid integrate_immersion(const GaussMapFn& g, const GridSpec& grid, const IntegrationConfig& cfg);

/// max(|F1 - F2|, |h1 - h2|) between the u-then-v and v-then-u paths to target.
double path_independence_check(const GaussMapFn& g, DomainPoint target, const IntegrationConfig& cfg);

}  // namespace nilgauss

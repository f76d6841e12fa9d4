#pragma once

// Disk-valued maps g into the Poincare disk and the quantities built from
// their 2-jets: harmonicity, the Hopf differential, eta, metric factors,
// and the action of disk isometries.

#include <limits>
#include <memory>
#include <string>
#include <variant>

#include "nilgauss/numerics.hpp"

namespace nilgauss {

/// Open or closed rectangle in the parameter plane; infinite bounds allowed.
struct RectDomain {
  double umin = -std::numeric_limits<double>::infinity();
  double umax = std::numeric_limits<double>::infinity();
  double vmin = -std::numeric_limits<double>::infinity();
  double vmax = std::numeric_limits<double>::infinity();
  /// Open rectangles exclude their boundary (e.g. Re z > 0).
  bool open = true;
};

struct DiskDomain {
  Complex center{0.0, 0.0};
  double radius = 1.0;
};

class MapDomain {
 public:
  MapDomain() = default;
  MapDomain(RectDomain r) : shape_(r) {}
  MapDomain(DiskDomain d) : shape_(d) {}

  bool contains(DomainPoint p) const;
  std::string describe() const;
  const std::variant<RectDomain, DiskDomain>& shape() const { return shape_; }

 private:
  std::variant<RectDomain, DiskDomain> shape_{RectDomain{}};
};

/// A map g: domain -> disk with a jet evaluator. Immutable and cheap to copy.
class GaussMapFn {
 public:
  using JetFn = std::function<WirtingerJet2(DomainPoint)>;

  GaussMapFn(std::string provenance, MapDomain domain, JetFn jets, bool analytic_jets = true);

  /// A map given only by values; jets come from finite differences.
  static GaussMapFn from_values(std::string provenance, MapDomain domain, ComplexField values);

  WirtingerJet2 jet(DomainPoint z) const { return jets_(z); }
  Complex value(DomainPoint z) const { return jets_(z).val; }
  const MapDomain& domain() const { return domain_; }
  const std::string& provenance() const { return provenance_; }
  bool analytic_jets() const { return analytic_; }

  /// False once an orientation-reversing isometry has been applied.
  bool antiholomorphy_guaranteed() const { return antiholomorphy_guaranteed_; }
  GaussMapFn with_antiholomorphy_flag(bool guaranteed) const;

  /// Same map with jets recomputed by finite differences of the values
  /// (cross-validation of the differencing machinery).
  GaussMapFn with_finite_differences(double step = 0.0) const;

 private:
  std::string provenance_;
  MapDomain domain_;
  JetFn jets_;
  bool analytic_ = true;
  bool antiholomorphy_guaranteed_ = true;
};

/// Isometry of the disk. Positive: w -> (alpha w + beta)/(conj(beta) w + conj(alpha));
/// negative: the same applied to conj(w). Requires |alpha|^2 - |beta|^2 = 1.
class MobiusIsometry {
 public:
  MobiusIsometry(Complex alpha, Complex beta, bool positive = true);

  static MobiusIsometry identity() { return {1.0, 0.0, true}; }
  /// w -> e^{i angle} w
  static MobiusIsometry rotation(double angle);
  /// Positive isometry sending 0 to p (|p| < 1).
  static MobiusIsometry translation_to(Complex p);
  static MobiusIsometry conjugation() { return {1.0, 0.0, false}; }

  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }
  bool positive() const { return positive_; }

  Complex operator()(Complex w) const;
  /// this after `inner`
  MobiusIsometry compose(const MobiusIsometry& inner) const;

 private:
  Complex holomorphic_part(Complex w) const;

  Complex alpha_;
  Complex beta_;
  bool positive_;
};

struct HopfCoefficient {
  Complex q;
};

/// |(1 - |g|^2) g_zzbar + 2 conj(g) g_z g_zbar|
double harmonic_residual(const WirtingerJet2& j);

/// Extreme value of a scalar field over the grid nodes inside a map's domain.
struct GridExtremum {
  double value = 0.0;
  DomainPoint at;
  long nodes = 0;
};

/// min |g_z| over the grid nodes in the map's domain.
GridExtremum antiholomorphy_margin(const GaussMapFn& g, const GridSpec& grid);

/// Q = 4 g_z conj(g_zbar) / (1 - |g|^2)^2; throws OutOfDiskError for |g| >= 1.
HopfCoefficient hopf_coefficient(const WirtingerJet2& j);

/// |dQ/dzbar| by differencing hopf_coefficient. Throws std::domain_error
/// when the stencil leaves the map's domain.
double hopf_holomorphy_residual(const GaussMapFn& g, DomainPoint z, double step);

/// eta = 8i conj(g) g_z / (1 - |g|^2)^2
Complex eta_from_g(const WirtingerJet2& j);

/// T o g with jets by the chain rule. Negative T clears the antiholomorphy guarantee.
GaussMapFn mobius_apply(const MobiusIsometry& t, const GaussMapFn& g);
WirtingerJet2 mobius_apply(const MobiusIsometry& t, const WirtingerJet2& j);

struct MinkowskiFactor {
  double hat = 0.0;    ///< 16 |g_z|^2 / (1 - |g|^2)^2
  double ratio = 0.0;  ///< ((1 + |g|^2) / (1 - |g|^2))^2
  double product() const { return hat * ratio; }
};

MinkowskiFactor minkowski_factor(const WirtingerJet2& j);

/// Throws OutOfDiskError unless |g| < 1.
void require_in_disk(const WirtingerJet2& j, const char* who);

/// Checks that a 5-point stencil of half-width 2*step around z stays inside the domain.
bool stencil_inside(const MapDomain& domain, DomainPoint z, double step);

}  // namespace nilgauss

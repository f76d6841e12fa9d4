#pragma once

// Explicit minimal surfaces in Nil3 with their Gauss maps (analytic jets)
// and closed-form (F, h), used as oracles for the integration engine.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nilgauss/harmonic.hpp"
#include "nilgauss/weierstrass.hpp"

namespace nilgauss {

/// Profile phi(v) of the helicoid Gauss map g(u + iv) = e^{iu} phi(v), solving
///   phi'' = phi - 2a phi (1 - phi^2),   (phi')^2 - phi^2 = a (1 - phi^2)^2.
/// a > 0: phi(0) = 0, phi'(0) = sqrt(a). a < 0: phi'(0) = 0 and phi(0) = p in (0, 1)
/// with p^2 + a (1 - p^2)^2 = 0. The profile is integrated by RK4 in both
/// directions until |phi| reaches 1 - 1e-6, which fixes the half-width v0.
class HelicoidProfile {
 public:
  explicit HelicoidProfile(double a, double step = 1e-3);

  struct Value {
    double phi = 0.0;
    double dphi = 0.0;
    double ddphi = 0.0;
  };

  double a() const { return a_; }
  double step() const { return step_; }
  /// Half-width of the open interval (-v0, v0) on which |phi| < 1.
  double v0() const { return v0_; }
  double initial_value() const { return phi0_; }
  double initial_slope() const { return dphi0_; }

  /// phi, phi', phi'' at v. Throws std::domain_error for |v| >= v0.
  Value at(double v) const;
  /// (phi')^2 - phi^2 - a (1 - phi^2)^2
  double first_integral_residual(double v) const;
  /// Largest first-integral residual over the stored RK4 samples.
  double max_first_integral_residual() const;

  const Trajectory& forward() const { return forward_; }
  const Trajectory& backward() const { return backward_; }

  /// The p in (0, 1) with p^2 + a (1 - p^2)^2 = 0 for a < 0, by bisection.
  static double negative_base_value(double a);

 private:
  double a_;
  double step_;
  double phi0_ = 0.0;
  double dphi0_ = 0.0;
  double v0_ = 0.0;
  Trajectory forward_;
  Trajectory backward_;
};

struct GallerySurface {
  std::string name;
  GaussMapFn map;
  std::function<Complex(DomainPoint)> F;
  std::function<double(DomainPoint)> h;
  GridSpec default_grid;
  DomainPoint base_point;
  Complex hopf_constant;
  int subdivisions_per_unit = 256;
  std::vector<std::pair<std::string, double>> parameters;
  std::shared_ptr<const HelicoidProfile> profile;

  Nil3Point closed_form(DomainPoint z) const {
    const Complex f = F(z);
    return {f.real(), f.imag(), h(z)};
  }
  /// Base point and initial values matched to the closed form.
  IntegrationConfig default_config() const;
};

/// g = iz on |z| <= radius; F = 4z/(1 - |z|^2), h = 0; Q = 0.
GallerySurface hemisphere(double radius = 0.9);
/// Entire graph invariant by x1-translations; Q = -1/4.
GallerySurface translation_invariant(double theta);
/// Half helicoid (right-handed for a > 0, left-handed for a < 0); h_z = a, so h = 2au; Q = -a.
GallerySurface helicoid(double a, double profile_step = 1e-3);
/// Entire graph on Re z > 0; Q = -1.
GallerySurface semitrough();
/// Gauss map conjugate to the semitrough's; a graph over a half-plane; Q = -1.
GallerySurface conjugate_semitrough();

struct GalleryEntry {
  std::string name;
  std::string summary;
};
const std::vector<GalleryEntry>& gallery_catalog();

struct GalleryParameters {
  double theta = 0.0;
  double a = 0.5;
  double radius = 0.9;
};
/// Throws std::invalid_argument for unknown names.
GallerySurface gallery_by_name(const std::string& name, const GalleryParameters& params = {});

}  // namespace nilgauss

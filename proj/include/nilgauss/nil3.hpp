#pragma once

// The Heisenberg group Nil3 modelled on R^3 with the metric
//   dx1^2 + dx2^2 + (x2 dx1 / 2 - x1 dx2 / 2 + dx3)^2,
// its left-invariant orthonormal frame
//   E1 = d1 - (x2/2) d3,  E2 = d2 + (x1/2) d3,  E3 = d3,
// and the per-sample geometry of a conformal immersion X = (F, h).

#include <array>
#include <map>
#include <optional>
#include <string>

#include "nilgauss/numerics.hpp"

namespace nilgauss {

struct Nil3Point {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
};

/// Components in the frame (E1, E2, E3). The frame is orthonormal, so the
/// metric inner product is the Euclidean one on these components.
struct FrameVector {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  double dot(const FrameVector& o) const { return a1 * o.a1 + a2 * o.a2 + a3 * o.a3; }
  double norm() const;
  FrameVector cross(const FrameVector& o) const {
    return {a2 * o.a3 - a3 * o.a2, a3 * o.a1 - a1 * o.a3, a1 * o.a2 - a2 * o.a1};
  }
  friend FrameVector operator+(FrameVector a, const FrameVector& b) { return {a.a1 + b.a1, a.a2 + b.a2, a.a3 + b.a3}; }
  friend FrameVector operator-(FrameVector a, const FrameVector& b) { return {a.a1 - b.a1, a.a2 - b.a2, a.a3 - b.a3}; }
  friend FrameVector operator*(double s, const FrameVector& a) { return {s * a.a1, s * a.a2, s * a.a3}; }
};

/// Components in the coordinate basis (d/dx1, d/dx2, d/dx3).
struct AmbientVector {
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
};

/// Complexified frame vector, used for combinations like X_z or
/// grad_{Xu}Xu - grad_{Xv}Xv - 2i grad_{Xu}Xv.
struct ComplexFrameVector {
  Complex c1;
  Complex c2;
  Complex c3;

  Complex dot(const FrameVector& n) const { return c1 * n.a1 + c2 * n.a2 + c3 * n.a3; }
};

FrameVector frame_coordinates(const Nil3Point& x, const AmbientVector& w);
AmbientVector ambient_from_frame(const Nil3Point& x, const FrameVector& a);

/// grad_{E_i} E_j for i, j in {1, 2, 3}; throws std::out_of_range otherwise.
FrameVector connection_coeffs(int i, int j);

/// Levi-Civita derivative of the left-invariant extension of b along a:
/// sum_ij a_i b_j grad_{E_i} E_j.
FrameVector connection_term(const FrameVector& a, const FrameVector& b);

/// Left multiplication p * q in the group law of the model.
Nil3Point left_translate(const Nil3Point& p, const Nil3Point& q);
Nil3Point group_inverse(const Nil3Point& p);
/// Rotation by `angle` about the x3-axis (an isometry fixing the fibre through 0).
Nil3Point rotate_about_fiber(const Nil3Point& p, double angle);

/// Values and Wirtinger derivatives of an immersion X = (F, h) at one point.
/// eta = 2 <E3, X_z>. The second derivatives of F and first derivatives of
/// eta feed the covariant accelerations.
struct ImmersionSample {
  DomainPoint z;
  Complex F;
  double h = 0.0;
  Complex F_dz;
  Complex F_dzbar;
  Complex h_dz;
  Complex eta;
  Complex F_dzz;
  Complex F_dzzbar;
  Complex F_dzbarzbar;
  Complex eta_dz;
  Complex eta_dzbar;

  Nil3Point point() const { return {F.real(), F.imag(), h}; }
};

/// X_u and X_v in frame coordinates.
FrameVector tangent_u(const ImmersionSample& s);
FrameVector tangent_v(const ImmersionSample& s);
/// X_z = (X_u - i X_v)/2 in frame coordinates.
ComplexFrameVector tangent_z(const ImmersionSample& s);

struct CovariantAccelerations {
  FrameVector uu;  ///< grad_{X_u} X_u
  FrameVector vv;  ///< grad_{X_v} X_v
  FrameVector uv;  ///< grad_{X_u} X_v, symmetrised with grad_{X_v} X_u

  FrameVector laplacian() const { return uu + vv; }
  ComplexFrameVector hopf_combination() const;  ///< uu - vv - 2i uv
};

CovariantAccelerations covariant_accelerations(const ImmersionSample& s);

/// Cross product threshold below which a sample is not an immersion point.
inline constexpr double kDegenerateNormThreshold = 1e-14;

/// (X_u x X_v)/|X_u x X_v|; throws DegenerateImmersionError below the threshold.
FrameVector unit_normal(const ImmersionSample& s);

/// Inverse stereographic projection from the south pole; nullopt encodes g = infinity.
/// Throws std::invalid_argument unless |n| = 1 within 1e-9.
std::optional<Complex> gauss_from_normal(const FrameVector& n);

/// |F_z conj(F_zbar) + eta^2/4|.
double conformality_residual(const ImmersionSample& s);

struct MinimalityResidual {
  double horizontal = 0.0;  ///< |F_zzbar - (i/4)(conj(eta) F_z + eta F_zbar)|
  double vertical = 0.0;    ///< |eta_zbar + conj(eta)_z|
};
MinimalityResidual minimality_residual(const ImmersionSample& s);

/// 2<X_z, X_zbar> = |F_z|^2 + |F_zbar|^2 + |eta|^2/2, the conformal factor of the sample.
double sample_metric_factor(const ImmersionSample& s);

/// Conformal factor predicted by the Gauss map: 16 (1+|g|^2)^2 |g_z|^2 / (1-|g|^2)^4.
/// Throws OutOfDiskError for |g| >= 1.
double induced_metric_factor(const WirtingerJet2& g);

/// <N, grad_{Xu}Xu - grad_{Xv}Xv - 2i grad_{Xu}Xv> - i eta^2.
Complex abresch_rosenberg(const ImmersionSample& s, const FrameVector& n);

/// Named sup-norm residuals over a set of sample points.
struct ResidualEntry {
  double sup = 0.0;
  DomainPoint worst;
  long count = 0;
};

class ResidualReport {
 public:
  explicit ResidualReport(std::string grid = {}) : grid_(std::move(grid)) {}

  /// Folds |value| into the named sup-norm.
  void observe(const std::string& name, double value, DomainPoint at);
  /// Deterministic max-merge.
  void merge(const ResidualReport& other);

  bool has(const std::string& name) const { return entries_.count(name) != 0; }
  double sup(const std::string& name) const;
  const ResidualEntry& entry(const std::string& name) const;
  const std::map<std::string, ResidualEntry>& entries() const { return entries_; }
  const std::string& grid() const { return grid_; }

 private:
  std::string grid_;
  std::map<std::string, ResidualEntry> entries_;
};

}  // namespace nilgauss

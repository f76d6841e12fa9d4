#pragma once

// Numerical substrate: Wirtinger jets, complex line integrals over polylines,
// and a fixed-step RK4 integrator.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nilgauss {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// A point z = u + iv of a conformal coordinate domain.
struct DomainPoint {
  double u = 0.0;
  double v = 0.0;

  Complex z() const { return {u, v}; }
  static DomainPoint from(Complex z) { return {z.real(), z.imag()}; }
  bool finite() const;

  friend bool operator==(const DomainPoint&, const DomainPoint&) = default;
};

/// Value and Wirtinger derivatives up to order two,
/// with d/dz = (d/du - i d/dv)/2 and d/dzbar = (d/du + i d/dv)/2.
struct WirtingerJet2 {
  Complex val;
  Complex dz;
  Complex dzbar;
  Complex dzz;
  Complex dzzbar;
  Complex dzbarzbar;
};

/// Builds a jet from real partial derivatives (complex-valued).
WirtingerJet2 jet_from_partials(Complex f, Complex fu, Complex fv, Complex fuu, Complex fuv, Complex fvv);

/// Jet of conj(f) from the jet of f.
WirtingerJet2 conjugate(const WirtingerJet2& j);

using ComplexField = std::function<Complex(DomainPoint)>;

/// Step used when none is given: 1e-4 scaled by max(1, |z|).
double default_jet_step(DomainPoint z);

/// Finite-difference jet. First derivatives use the 5-point central stencil
/// per axis (O(step^4)); second derivatives are second order.
/// Throws EvaluationError if f is non-finite anywhere on the stencil.
WirtingerJet2 wirtinger_jet(const ComplexField& f, DomainPoint z, double step);
WirtingerJet2 wirtinger_jet(const ComplexField& f, DomainPoint z);

/// Integration path in the parameter plane. Each segment is split into
/// `subdivisions` panels (rounded up to an even count for Simpson).
class Polyline {
 public:
  Polyline(std::vector<DomainPoint> vertices, int subdivisions);

  const std::vector<DomainPoint>& vertices() const { return vertices_; }
  int subdivisions() const { return subdivisions_; }

 private:
  std::vector<DomainPoint> vertices_;
  int subdivisions_;
};

/// init + integral over the path of (p dz + q dzbar), composite Simpson per segment.
Complex path_integrate(const ComplexField& p_dz, const ComplexField& q_dzbar, const Polyline& path, Complex init);

struct Trajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> y;
  /// Set when a component exceeded the bound or the stop predicate fired.
  bool truncated = false;
  /// Last t whose state was accepted.
  double last_valid_t = 0.0;
};

using OdeRhs = std::function<std::vector<double>(double, const std::vector<double>&)>;
using OdeStop = std::function<bool(double, const std::vector<double>&)>;

struct Rk4Options {
  /// Any |y_i| above this truncates the trajectory.
  double blowup_bound = 1e12;
  /// Optional predicate evaluated on each new state; true truncates before accepting it.
  OdeStop stop;
};

/// Classical RK4 from t_begin to t_end (either direction) with |step| spacing;
/// the last step is shortened to land on t_end.
Trajectory rk4_solve(const OdeRhs& rhs, std::vector<double> y0, double t_begin, double t_end, double step,
                     const Rk4Options& options = {});

/// Tensor grid of nu x nv nodes on [umin, umax] x [vmin, vmax].
struct GridSpec {
  double umin = 0.0;
  double umax = 1.0;
  double vmin = 0.0;
  double vmax = 1.0;
  int nu = 2;
  int nv = 2;

  /// Throws std::invalid_argument on empty ranges, fewer than 2 nodes per axis or non-finite bounds.
  void validate() const;
  double u(int i) const;
  double v(int j) const;
  DomainPoint node(int i, int j) const { return {u(i), v(j)}; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nu + i; }
  std::size_t size() const { return static_cast<std::size_t>(nu) * nv; }
  bool contains(DomainPoint p) const { return p.u >= umin && p.u <= umax && p.v >= vmin && p.v <= vmax; }
  std::string describe() const;
};

/// A single RK4 step of signed size dt.
std::vector<double> rk4_step(const OdeRhs& rhs, double t, const std::vector<double>& y, double dt);

}  // namespace nilgauss

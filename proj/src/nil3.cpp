#include "nilgauss/nil3.hpp"

#include <cmath>
#include <stdexcept>

#include "nilgauss/errors.hpp"

namespace nilgauss {

double FrameVector::norm() const { return std::sqrt(dot(*this)); }

FrameVector frame_coordinates(const Nil3Point& x, const AmbientVector& w) {
  return {w.b1, w.b2, w.b3 + 0.5 * (x.x2 * w.b1 - x.x1 * w.b2)};
}

AmbientVector ambient_from_frame(const Nil3Point& x, const FrameVector& a) {
  return {a.a1, a.a2, a.a3 - 0.5 * (x.x2 * a.a1 - x.x1 * a.a2)};
}

FrameVector connection_coeffs(int i, int j) {
  if (i < 1 || i > 3 || j < 1 || j > 3) {
    throw std::out_of_range("connection_coeffs: frame index must be 1, 2 or 3");
  }
  // row i: derivative direction E_i, column j: differentiated field E_j
  static const FrameVector table[3][3] = {
      {{0, 0, 0}, {0, 0, 0.5}, {0, -0.5, 0}},
      {{0, 0, -0.5}, {0, 0, 0}, {0.5, 0, 0}},
      {{0, -0.5, 0}, {0.5, 0, 0}, {0, 0, 0}},
  };
  return table[i - 1][j - 1];
}

FrameVector connection_term(const FrameVector& a, const FrameVector& b) {
  const double ac[3] = {a.a1, a.a2, a.a3};
  const double bc[3] = {b.a1, b.a2, b.a3};
  FrameVector out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double w = ac[i] * bc[j];
      if (w != 0.0) {
        out = out + w * connection_coeffs(i + 1, j + 1);
      }
    }
  }
  return out;
}

Nil3Point left_translate(const Nil3Point& p, const Nil3Point& q) {
  return {p.x1 + q.x1, p.x2 + q.x2, p.x3 + q.x3 + 0.5 * (p.x1 * q.x2 - p.x2 * q.x1)};
}

Nil3Point group_inverse(const Nil3Point& p) { return {-p.x1, -p.x2, -p.x3}; }

Nil3Point rotate_about_fiber(const Nil3Point& p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x1 - s * p.x2, s * p.x1 + c * p.x2, p.x3};
}

FrameVector tangent_u(const ImmersionSample& s) {
  const Complex Fu = s.F_dz + s.F_dzbar;
  return {Fu.real(), Fu.imag(), s.eta.real()};
}

FrameVector tangent_v(const ImmersionSample& s) {
  const Complex Fv = kI * (s.F_dz - s.F_dzbar);
  return {Fv.real(), Fv.imag(), -s.eta.imag()};
}

ComplexFrameVector tangent_z(const ImmersionSample& s) {
  const Complex Fbar_z = std::conj(s.F_dzbar);
  return {0.5 * (s.F_dz + Fbar_z), 0.5 * kI * (Fbar_z - s.F_dz), 0.5 * s.eta};
}

ComplexFrameVector CovariantAccelerations::hopf_combination() const {
  return {Complex(uu.a1 - vv.a1, -2.0 * uv.a1), Complex(uu.a2 - vv.a2, -2.0 * uv.a2),
          Complex(uu.a3 - vv.a3, -2.0 * uv.a3)};
}

CovariantAccelerations covariant_accelerations(const ImmersionSample& s) {
  const Complex Fuu = s.F_dzz + 2.0 * s.F_dzzbar + s.F_dzbarzbar;
  const Complex Fvv = -s.F_dzz + 2.0 * s.F_dzzbar - s.F_dzbarzbar;
  const Complex Fuv = kI * (s.F_dzz - s.F_dzbarzbar);
  const Complex eta_u = s.eta_dz + s.eta_dzbar;
  const Complex eta_v = kI * (s.eta_dz - s.eta_dzbar);

  const FrameVector xu = tangent_u(s);
  const FrameVector xv = tangent_v(s);

  // derivative of the frame components plus the connection correction
  CovariantAccelerations acc;
  acc.uu = FrameVector{Fuu.real(), Fuu.imag(), eta_u.real()} + connection_term(xu, xu);
  acc.vv = FrameVector{Fvv.real(), Fvv.imag(), -eta_v.imag()} + connection_term(xv, xv);
  const FrameVector u_of_v = FrameVector{Fuv.real(), Fuv.imag(), -eta_u.imag()} + connection_term(xu, xv);
  const FrameVector v_of_u = FrameVector{Fuv.real(), Fuv.imag(), eta_v.real()} + connection_term(xv, xu);
  acc.uv = 0.5 * (u_of_v + v_of_u);
  return acc;
}

FrameVector unit_normal(const ImmersionSample& s) {
  const FrameVector n = tangent_u(s).cross(tangent_v(s));
  const double len = n.norm();
  if (!(len >= kDegenerateNormThreshold)) {
    throw DegenerateImmersionError("unit_normal: |X_u x X_v| below immersion threshold");
  }
  return (1.0 / len) * n;
}

std::optional<Complex> gauss_from_normal(const FrameVector& n) {
  if (std::abs(n.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("gauss_from_normal: normal is not a unit vector");
  }
  const double denom = 1.0 + n.a3;
  if (denom <= 0.0) {
    return std::nullopt;
  }
  return Complex(n.a1, n.a2) / denom;
}

double conformality_residual(const ImmersionSample& s) {
  return std::abs(s.F_dz * std::conj(s.F_dzbar) + 0.25 * s.eta * s.eta);
}

MinimalityResidual minimality_residual(const ImmersionSample& s) {
  MinimalityResidual r;
  r.horizontal = std::abs(s.F_dzzbar - 0.25 * kI * (std::conj(s.eta) * s.F_dz + s.eta * s.F_dzbar));
  r.vertical = std::abs(2.0 * s.eta_dzbar.real());
  return r;
}

double sample_metric_factor(const ImmersionSample& s) {
  return std::norm(s.F_dz) + std::norm(s.F_dzbar) + 0.5 * std::norm(s.eta);
}

double induced_metric_factor(const WirtingerJet2& g) {
  const double m = std::norm(g.val);
  if (!(m < 1.0)) {
    throw OutOfDiskError("induced_metric_factor: |g| >= 1");
  }
  const double w = 1.0 - m;
  return 16.0 * (1.0 + m) * (1.0 + m) * std::norm(g.dz) / (w * w * w * w);
}

Complex abresch_rosenberg(const ImmersionSample& s, const FrameVector& n) {
  return covariant_accelerations(s).hopf_combination().dot(n) - kI * s.eta * s.eta;
}

void ResidualReport::observe(const std::string& name, double value, DomainPoint at) {
  auto& e = entries_[name];
  const double v = std::abs(value);
  // NaN must surface as a failure, never be swallowed by the max
  if (e.count == 0 || v > e.sup || std::isnan(v)) {
    if (!std::isnan(e.sup)) {
      e.sup = v;
      e.worst = at;
    }
  }
  ++e.count;
}

void ResidualReport::merge(const ResidualReport& other) {
  for (const auto& [name, e] : other.entries_) {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
      entries_[name] = e;
      continue;
    }
    auto& mine = it->second;
    if (e.count > 0 && (mine.count == 0 || e.sup > mine.sup || (std::isnan(e.sup) && !std::isnan(mine.sup)))) {
      mine.sup = e.sup;
      mine.worst = e.worst;
    }
    mine.count += e.count;
  }
}

double ResidualReport::sup(const std::string& name) const { return entry(name).sup; }

const ResidualEntry& ResidualReport::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw std::out_of_range("ResidualReport: no entry named " + name);
  }
  return it->second;
}

}  // namespace nilgauss

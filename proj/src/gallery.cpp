#include "nilgauss/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nilgauss {

namespace {

constexpr double kProfileEdge = 1e-6;
constexpr double kProfileHorizon = 100.0;

// Partials of n/d from partials of n and d (d may be complex).
struct Partials {
  Complex f, fu, fv, fuu, fuv, fvv;
};

WirtingerJet2 quotient_jet(const Partials& n, const Partials& d) {
  const Complex g = n.f / d.f;
  const Complex gu = (n.fu - g * d.fu) / d.f;
  const Complex gv = (n.fv - g * d.fv) / d.f;
  const Complex guu = (n.fuu - 2.0 * gu * d.fu - g * d.fuu) / d.f;
  const Complex guv = (n.fuv - gu * d.fv - gv * d.fu - g * d.fuv) / d.f;
  const Complex gvv = (n.fvv - 2.0 * gv * d.fv - g * d.fvv) / d.f;
  return jet_from_partials(g, gu, gv, guu, guv, gvv);
}

WirtingerJet2 semitrough_jet(DomainPoint z) {
  const double c2u = std::cosh(2 * z.u), s2u = std::sinh(2 * z.u);
  const double c2v = std::cosh(2 * z.v), s2v = std::sinh(2 * z.v);
  const Partials n{Complex(-1.0, c2u * s2v), Complex(0, 2 * s2u * s2v), Complex(0, 2 * c2u * c2v),
                   Complex(0, 4 * c2u * s2v), Complex(0, 4 * s2u * c2v), Complex(0, 4 * c2u * s2v)};
  const Partials d{s2u + c2u * c2v, 2 * c2u + 2 * s2u * c2v, 2 * c2u * s2v,
                   4 * s2u + 4 * c2u * c2v, 4 * s2u * s2v, 4 * c2u * c2v};
  return quotient_jet(n, d);
}

double coth(double x) { return std::cosh(x) / std::sinh(x); }

}  // namespace

// ---------------------------------------------------------------------------

double HelicoidProfile::negative_base_value(double a) {
  if (!(a < 0.0)) {
    throw std::invalid_argument("negative_base_value: requires a < 0");
  }
  // f(0) = a < 0, f(1) = 1 > 0, f increasing on (0, 1)
  auto f = [a](double p) { return p * p + a * (1.0 - p * p) * (1.0 - p * p); };
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

HelicoidProfile::HelicoidProfile(double a, double step) : a_(a), step_(step) {
  if (a == 0.0 || !std::isfinite(a)) {
    throw std::invalid_argument("helicoid profile: a must be a nonzero finite number");
  }
  if (!(step > 0.0)) {
    throw std::invalid_argument("helicoid profile: step must be positive");
  }
  if (a > 0.0) {
    phi0_ = 0.0;
    dphi0_ = std::sqrt(a);
  } else {
    phi0_ = negative_base_value(a);
    dphi0_ = 0.0;
  }
  const OdeRhs rhs = [a](double, const std::vector<double>& y) {
    return std::vector<double>{y[1], y[0] - 2.0 * a * y[0] * (1.0 - y[0] * y[0])};
  };
  Rk4Options opts;
  opts.stop = [](double, const std::vector<double>& y) { return std::abs(y[0]) >= 1.0 - kProfileEdge; };
  forward_ = rk4_solve(rhs, {phi0_, dphi0_}, 0.0, kProfileHorizon, step, opts);
  backward_ = rk4_solve(rhs, {phi0_, dphi0_}, 0.0, -kProfileHorizon, step, opts);
  v0_ = std::min(forward_.last_valid_t, -backward_.last_valid_t);
  if (!(v0_ > 0.0)) {
    throw std::runtime_error("helicoid profile: |phi| reaches 1 immediately");
  }
}

HelicoidProfile::Value HelicoidProfile::at(double v) const {
  if (!(std::abs(v) < v0_)) {
    throw std::domain_error("helicoid profile evaluated outside (-v0, v0)");
  }
  const Trajectory& tr = v >= 0.0 ? forward_ : backward_;
  const auto last = static_cast<long>(tr.t.size()) - 1;
  const long k = std::clamp(static_cast<long>(std::lround(std::abs(v) / step_)), 0L, last);
  const double a = a_;
  const OdeRhs rhs = [a](double, const std::vector<double>& y) {
    return std::vector<double>{y[1], y[0] - 2.0 * a * y[0] * (1.0 - y[0] * y[0])};
  };
  // one short RK4 step from the nearest stored sample
  const double dt = v - tr.t[k];
  const std::vector<double> y = dt == 0.0 ? tr.y[k] : rk4_step(rhs, tr.t[k], tr.y[k], dt);
  return {y[0], y[1], y[0] - 2.0 * a * y[0] * (1.0 - y[0] * y[0])};
}

double HelicoidProfile::first_integral_residual(double v) const {
  const Value p = at(v);
  const double s = 1.0 - p.phi * p.phi;
  return p.dphi * p.dphi - p.phi * p.phi - a_ * s * s;
}

double HelicoidProfile::max_first_integral_residual() const {
  double worst = 0.0;
  for (const Trajectory* tr : {&forward_, &backward_}) {
    for (const auto& y : tr->y) {
      const double s = 1.0 - y[0] * y[0];
      worst = std::max(worst, std::abs(y[1] * y[1] - y[0] * y[0] - a_ * s * s));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------

IntegrationConfig GallerySurface::default_config() const {
  IntegrationConfig cfg;
  cfg.z0 = base_point;
  cfg.F0 = F(base_point);
  cfg.h0 = h(base_point);
  cfg.subdivisions_per_unit = subdivisions_per_unit;
  return cfg;
}

GallerySurface hemisphere(double radius) {
  if (!(radius > 0.0 && radius < 1.0)) {
    throw std::invalid_argument("hemisphere: radius must lie in (0, 1)");
  }
  GallerySurface s{
      .name = "hemisphere",
      .map = GaussMapFn("hemisphere", DiskDomain{{0.0, 0.0}, radius},
                        [](DomainPoint z) {
                          return WirtingerJet2{kI * z.z(), kI, 0.0, 0.0, 0.0, 0.0};
                        }),
      .F = [](DomainPoint z) { return 4.0 * z.z() / (1.0 - std::norm(z.z())); },
      .h = [](DomainPoint) { return 0.0; },
      .default_grid = {-radius, radius, -radius, radius, 64, 64},
      .base_point = {0.0, 0.0},
      .hopf_constant = 0.0,
      .subdivisions_per_unit = 1024,
      .parameters = {{"radius", radius}},
      .profile = nullptr,
  };
  return s;
}

GallerySurface translation_invariant(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("translation_invariant: theta must be finite");
  }
  // g = (a(1 - cosh v) + conj(c) sinh v) / (c(1 - cosh v) + conj(a) sinh v) with a = cosh theta,
  // c = i sinh theta; the common factor 2 sinh(v/2) is divided out so v = 0 is regular.
  const Complex a = std::cosh(theta);
  const Complex c = kI * std::sinh(theta);
  auto jets = [a, c](DomainPoint z) {
    const double ch = std::cosh(0.5 * z.v), sh = std::sinh(0.5 * z.v);
    const Complex n = std::conj(c) * ch - a * sh;
    const Complex d = std::conj(a) * ch - c * sh;
    const Complex nv = 0.5 * (std::conj(c) * sh - a * ch);
    const Complex dv = 0.5 * (std::conj(a) * sh - c * ch);
    return quotient_jet({n, 0.0, nv, 0.0, 0.0, 0.25 * n}, {d, 0.0, dv, 0.0, 0.0, 0.25 * d});
  };
  const double c2 = std::cosh(2 * theta), s2 = std::sinh(2 * theta);
  GallerySurface s{
      .name = "translation-invariant",
      .map = GaussMapFn("translation-invariant", RectDomain{}, jets),
      .F = [c2, s2](DomainPoint z) { return Complex(c2 * z.u - s2 * std::cosh(z.v), std::sinh(z.v)); },
      .h = [c2, s2](DomainPoint z) { return 0.5 * c2 * z.u * std::sinh(z.v) + 0.5 * s2 * z.v; },
      .default_grid = {-2.0, 2.0, -2.0, 2.0, 41, 41},
      .base_point = {0.0, 0.0},
      .hopf_constant = -0.25,
      .subdivisions_per_unit = 256,
      .parameters = {{"theta", theta}},
      .profile = nullptr,
  };
  return s;
}

GallerySurface helicoid(double a, double profile_step) {
  auto profile = std::make_shared<const HelicoidProfile>(a, profile_step);
  const double v0 = profile->v0();
  auto jets = [profile](DomainPoint z) {
    const auto p = profile->at(z.v);
    const Complex e = std::polar(1.0, z.u);
    const Complex g = e * p.phi;
    return jet_from_partials(g, kI * g, e * p.dphi, -g, kI * e * p.dphi, e * p.ddphi);
  };
  const double half = std::min(1.0, 0.75 * v0);
  GallerySurface s{
      .name = "helicoid",
      .map = GaussMapFn("helicoid", RectDomain{-std::numeric_limits<double>::infinity(),
                                               std::numeric_limits<double>::infinity(), -v0, v0, true},
                        jets),
      .F =
          [profile](DomainPoint z) {
            const auto p = profile->at(z.v);
            return -2.0 * kI * std::polar(1.0, z.u) * (p.phi - p.dphi) / (1.0 - p.phi * p.phi);
          },
      .h = [a](DomainPoint z) { return 2.0 * a * z.u; },
      .default_grid = {0.0, std::numbers::pi, -half, half, 41, 41},
      .base_point = {0.0, 0.0},
      .hopf_constant = -a,
      .subdivisions_per_unit = 1024,
      .parameters = {{"a", a}, {"v0", v0}},
      .profile = profile,
  };
  return s;
}

GallerySurface semitrough() {
  GallerySurface s{
      .name = "semitrough",
      .map = GaussMapFn("semitrough", RectDomain{0.0, std::numeric_limits<double>::infinity(),
                                                 -std::numeric_limits<double>::infinity(),
                                                 std::numeric_limits<double>::infinity(), true},
                        semitrough_jet),
      .F =
          [](DomainPoint z) {
            return Complex(2.0 * std::sinh(z.v) * std::cosh(z.v) * coth(z.u), coth(z.u) - 2.0 * z.u);
          },
      .h = [](DomainPoint z) { return std::sinh(z.v) * std::cosh(z.v) * (2.0 * z.u * coth(z.u) - 1.0); },
      .default_grid = {0.2, 2.5, -1.2, 1.2, 41, 41},
      .base_point = {1.0, 0.0},
      .hopf_constant = -1.0,
      .subdivisions_per_unit = 512,
      .parameters = {},
      .profile = nullptr,
  };
  return s;
}

GallerySurface conjugate_semitrough() {
  GallerySurface s{
      .name = "conjugate-semitrough",
      .map = GaussMapFn("conjugate-semitrough",
                        RectDomain{0.0, std::numeric_limits<double>::infinity(),
                                   -std::numeric_limits<double>::infinity(),
                                   std::numeric_limits<double>::infinity(), true},
                        [](DomainPoint z) { return conjugate(semitrough_jet(z)); }),
      .F =
          [](DomainPoint z) {
            return Complex(-2.0 * std::sinh(z.v) * std::cosh(z.v) * std::tanh(z.u), 2.0 * z.u - std::tanh(z.u));
          },
      .h = [](DomainPoint z) { return std::sinh(z.v) * std::cosh(z.v) * (2.0 * z.u * std::tanh(z.u) - 1.0); },
      .default_grid = {0.2, 2.5, -1.2, 1.2, 41, 41},
      .base_point = {1.0, 0.0},
      .hopf_constant = -1.0,
      .subdivisions_per_unit = 512,
      .parameters = {},
      .profile = nullptr,
  };
  return s;
}

const std::vector<GalleryEntry>& gallery_catalog() {
  static const std::vector<GalleryEntry> entries = {
      {"hemisphere", "g = iz on a disk; the plane x3 = 0 (params: --radius)"},
      {"translation-invariant", "entire graph invariant by x1-translations (params: --theta)"},
      {"helicoid", "half helicoid, g = e^{iu} phi(v) (params: --a, nonzero)"},
      {"semitrough", "entire graph over R^2 on Re z > 0"},
      {"conjugate-semitrough", "conjugate Gauss map of the semitrough; graph over a half-plane"},
  };
  return entries;
}

GallerySurface gallery_by_name(const std::string& name, const GalleryParameters& params) {
  if (name == "hemisphere") return hemisphere(params.radius);
  if (name == "translation-invariant") return translation_invariant(params.theta);
  if (name == "helicoid") return helicoid(params.a);
  if (name == "semitrough") return semitrough();
  if (name == "conjugate-semitrough") return conjugate_semitrough();
  throw std::invalid_argument("unknown example: " + name);
}

}  // namespace nilgauss

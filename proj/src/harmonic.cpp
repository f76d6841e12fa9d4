#include "nilgauss/harmonic.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "nilgauss/errors.hpp"

namespace nilgauss {

bool MapDomain::contains(DomainPoint p) const {
  if (!p.finite()) return false;
  if (const auto* r = std::get_if<RectDomain>(&shape_)) {
    if (r->open) {
      return p.u > r->umin && p.u < r->umax && p.v > r->vmin && p.v < r->vmax;
    }
    return p.u >= r->umin && p.u <= r->umax && p.v >= r->vmin && p.v <= r->vmax;
  }
  const auto& d = std::get<DiskDomain>(shape_);
  return std::abs(p.z() - d.center) <= d.radius;
}

std::string MapDomain::describe() const {
  char buf[200];
  if (const auto* r = std::get_if<RectDomain>(&shape_)) {
    std::snprintf(buf, sizeof buf, "%s rectangle u in %c%.6g, %.6g%c, v in %c%.6g, %.6g%c", r->open ? "open" : "closed",
                  r->open ? '(' : '[', r->umin, r->umax, r->open ? ')' : ']', r->open ? '(' : '[', r->vmin, r->vmax,
                  r->open ? ')' : ']');
  } else {
    const auto& d = std::get<DiskDomain>(shape_);
    std::snprintf(buf, sizeof buf, "disk |z - (%.6g%+.6gi)| <= %.6g", d.center.real(), d.center.imag(), d.radius);
  }
  return buf;
}

GaussMapFn::GaussMapFn(std::string provenance, MapDomain domain, JetFn jets, bool analytic_jets)
    : provenance_(std::move(provenance)), domain_(std::move(domain)), jets_(std::move(jets)), analytic_(analytic_jets) {
  if (!jets_) {
    throw std::invalid_argument("GaussMapFn: empty jet evaluator");
  }
}

GaussMapFn GaussMapFn::from_values(std::string provenance, MapDomain domain, ComplexField values) {
  if (!values) {
    throw std::invalid_argument("GaussMapFn: empty value function");
  }
  auto jets = [f = std::move(values)](DomainPoint z) { return wirtinger_jet(f, z); };
  return GaussMapFn(std::move(provenance), std::move(domain), std::move(jets), false);
}

GaussMapFn GaussMapFn::with_antiholomorphy_flag(bool guaranteed) const {
  GaussMapFn copy = *this;
  copy.antiholomorphy_guaranteed_ = guaranteed;
  return copy;
}

GaussMapFn GaussMapFn::with_finite_differences(double step) const {
  ComplexField values = [inner = jets_](DomainPoint z) { return inner(z).val; };
  JetFn fd = [values, step](DomainPoint z) {
    return step > 0.0 ? wirtinger_jet(values, z, step) : wirtinger_jet(values, z);
  };
  GaussMapFn copy(provenance_, domain_, std::move(fd), false);
  copy.antiholomorphy_guaranteed_ = antiholomorphy_guaranteed_;
  return copy;
}

MobiusIsometry::MobiusIsometry(Complex alpha, Complex beta, bool positive)
    : alpha_(alpha), beta_(beta), positive_(positive) {
  const double det = std::norm(alpha_) - std::norm(beta_);
  if (!(std::abs(det - 1.0) <= 1e-12)) {
    throw std::invalid_argument("MobiusIsometry: |alpha|^2 - |beta|^2 must equal 1");
  }
}

MobiusIsometry MobiusIsometry::rotation(double angle) {
  return {std::polar(1.0, angle / 2.0), 0.0, true};
}

MobiusIsometry MobiusIsometry::translation_to(Complex p) {
  const double m = std::norm(p);
  if (!(m < 1.0)) {
    throw OutOfDiskError("MobiusIsometry::translation_to: target outside the disk");
  }
  const double s = 1.0 / std::sqrt(1.0 - m);
  return {s, s * p, true};
}

Complex MobiusIsometry::holomorphic_part(Complex w) const {
  return (alpha_ * w + beta_) / (std::conj(beta_) * w + std::conj(alpha_));
}

Complex MobiusIsometry::operator()(Complex w) const { return holomorphic_part(positive_ ? w : std::conj(w)); }

MobiusIsometry MobiusIsometry::compose(const MobiusIsometry& inner) const {
  const Complex c = positive_ ? inner.alpha_ : std::conj(inner.alpha_);
  const Complex d = positive_ ? inner.beta_ : std::conj(inner.beta_);
  Complex a = alpha_ * c + beta_ * std::conj(d);
  Complex b = alpha_ * d + beta_ * std::conj(c);
  // renormalise against drift
  const double scale = 1.0 / std::sqrt(std::norm(a) - std::norm(b));
  a *= scale;
  b *= scale;
  return {a, b, positive_ == inner.positive_};
}

void require_in_disk(const WirtingerJet2& j, const char* who) {
  if (!(std::norm(j.val) < 1.0)) {
    throw OutOfDiskError(std::string(who) + ": |g| >= 1");
  }
}

double harmonic_residual(const WirtingerJet2& j) {
  return std::abs((1.0 - std::norm(j.val)) * j.dzzbar + 2.0 * std::conj(j.val) * j.dz * j.dzbar);
}

GridExtremum antiholomorphy_margin(const GaussMapFn& g, const GridSpec& grid) {
  GridExtremum out;
  out.value = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      const DomainPoint p = grid.node(i, j);
      if (!g.domain().contains(p)) continue;
      const double m = std::abs(g.jet(p).dz);
      ++out.nodes;
      if (m < out.value) {
        out.value = m;
        out.at = p;
      }
    }
  }
  return out;
}

HopfCoefficient hopf_coefficient(const WirtingerJet2& j) {
  require_in_disk(j, "hopf_coefficient");
  const double w = 1.0 - std::norm(j.val);
  return {4.0 * j.dz * std::conj(j.dzbar) / (w * w)};
}

bool stencil_inside(const MapDomain& domain, DomainPoint z, double step) {
  const double h = step;
  const double offsets[][2] = {{0, 0},  {2 * h, 0}, {-2 * h, 0}, {0, 2 * h}, {0, -2 * h},
                               {h, h},  {h, -h},    {-h, h},     {-h, -h}};
  for (const auto& o : offsets) {
    if (!domain.contains({z.u + o[0], z.v + o[1]})) return false;
  }
  return true;
}

double hopf_holomorphy_residual(const GaussMapFn& g, DomainPoint z, double step) {
  if (!stencil_inside(g.domain(), z, step)) {
    throw std::domain_error("hopf_holomorphy_residual: stencil leaves the domain");
  }
  const ComplexField q = [&g](DomainPoint p) { return hopf_coefficient(g.jet(p)).q; };
  return std::abs(wirtinger_jet(q, z, step).dzbar);
}

Complex eta_from_g(const WirtingerJet2& j) {
  require_in_disk(j, "eta_from_g");
  const double w = 1.0 - std::norm(j.val);
  return 8.0 * kI * std::conj(j.val) * j.dz / (w * w);
}

WirtingerJet2 mobius_apply(const MobiusIsometry& t, const WirtingerJet2& jet) {
  // negative isometries act on conj(g)
  const WirtingerJet2 j = t.positive() ? jet : conjugate(jet);
  const Complex alpha = t.alpha();
  const Complex beta = t.beta();
  const Complex den = std::conj(beta) * j.val + std::conj(alpha);
  const Complex d1 = 1.0 / (den * den);
  const Complex d2 = -2.0 * std::conj(beta) / (den * den * den);

  WirtingerJet2 out;
  out.val = (alpha * j.val + beta) / den;
  out.dz = d1 * j.dz;
  out.dzbar = d1 * j.dzbar;
  out.dzz = d2 * j.dz * j.dz + d1 * j.dzz;
  out.dzzbar = d2 * j.dz * j.dzbar + d1 * j.dzzbar;
  out.dzbarzbar = d2 * j.dzbar * j.dzbar + d1 * j.dzbarzbar;
  return out;
}

GaussMapFn mobius_apply(const MobiusIsometry& t, const GaussMapFn& g) {
  GaussMapFn::JetFn jets = [t, g](DomainPoint z) { return mobius_apply(t, g.jet(z)); };
  std::string prov = g.provenance() + (t.positive() ? " after positive isometry" : " after negative isometry");
  GaussMapFn out(std::move(prov), g.domain(), std::move(jets), g.analytic_jets());
  return out.with_antiholomorphy_flag(t.positive() && g.antiholomorphy_guaranteed());
}

MinkowskiFactor minkowski_factor(const WirtingerJet2& j) {
  require_in_disk(j, "minkowski_factor");
  const double m = std::norm(j.val);
  const double w = 1.0 - m;
  const double r = (1.0 + m) / w;
  return {16.0 * std::norm(j.dz) / (w * w), r * r};
}

}  // namespace nilgauss

#include "nilgauss/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "nilgauss/errors.hpp"

namespace nilgauss {

namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

Complex checked(const ComplexField& f, DomainPoint p) {
  Complex value;
  try {
    value = f(p);
  } catch (const std::exception& e) {
    throw EvaluationError(std::string("evaluation failed: ") + e.what(), p.u, p.v);
  }
  if (!finite(value)) {
    throw EvaluationError("non-finite value", p.u, p.v);
  }
  return value;
}

}  // namespace

bool DomainPoint::finite() const { return std::isfinite(u) && std::isfinite(v); }

WirtingerJet2 jet_from_partials(Complex f, Complex fu, Complex fv, Complex fuu, Complex fuv, Complex fvv) {
  WirtingerJet2 j;
  j.val = f;
  j.dz = 0.5 * (fu - kI * fv);
  j.dzbar = 0.5 * (fu + kI * fv);
  j.dzz = 0.25 * (fuu - 2.0 * kI * fuv - fvv);
  j.dzzbar = 0.25 * (fuu + fvv);
  j.dzbarzbar = 0.25 * (fuu + 2.0 * kI * fuv - fvv);
  return j;
}

WirtingerJet2 conjugate(const WirtingerJet2& j) {
  return {std::conj(j.val),    std::conj(j.dzbar),  std::conj(j.dz),
          std::conj(j.dzbarzbar), std::conj(j.dzzbar), std::conj(j.dzz)};
}

double default_jet_step(DomainPoint z) { return 1e-4 * std::max(1.0, std::abs(z.z())); }

WirtingerJet2 wirtinger_jet(const ComplexField& f, DomainPoint z, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("wirtinger_jet: step must be positive");
  }
  const double h = step;
  auto at = [&](double du, double dv) { return checked(f, {z.u + du, z.v + dv}); };

  const Complex f0 = at(0, 0);
  const Complex up1 = at(h, 0), um1 = at(-h, 0), up2 = at(2 * h, 0), um2 = at(-2 * h, 0);
  const Complex vp1 = at(0, h), vm1 = at(0, -h), vp2 = at(0, 2 * h), vm2 = at(0, -2 * h);
  const Complex pp = at(h, h), pm = at(h, -h), mp = at(-h, h), mm = at(-h, -h);

  const Complex fu = (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * h);
  const Complex fv = (vm2 - 8.0 * vm1 + 8.0 * vp1 - vp2) / (12.0 * h);
  const Complex fuu = (up1 - 2.0 * f0 + um1) / (h * h);
  const Complex fvv = (vp1 - 2.0 * f0 + vm1) / (h * h);
  const Complex fuv = (pp - pm - mp + mm) / (4.0 * h * h);
  return jet_from_partials(f0, fu, fv, fuu, fuv, fvv);
}

WirtingerJet2 wirtinger_jet(const ComplexField& f, DomainPoint z) { return wirtinger_jet(f, z, default_jet_step(z)); }

Polyline::Polyline(std::vector<DomainPoint> vertices, int subdivisions)
    : vertices_(std::move(vertices)), subdivisions_(subdivisions) {
  if (vertices_.size() < 2) {
    throw std::invalid_argument("Polyline: needs at least two vertices");
  }
  if (subdivisions_ < 1) {
    throw std::invalid_argument("Polyline: subdivision count must be positive");
  }
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    if (!vertices_[k].finite()) {
      throw std::invalid_argument("Polyline: non-finite vertex");
    }
    if (k > 0 && vertices_[k] == vertices_[k - 1]) {
      throw std::invalid_argument("Polyline: consecutive vertices coincide");
    }
  }
  if (subdivisions_ % 2 != 0) {
    ++subdivisions_;
  }
}

Complex path_integrate(const ComplexField& p_dz, const ComplexField& q_dzbar, const Polyline& path, Complex init) {
  const auto& verts = path.vertices();
  const int n = path.subdivisions();
  Complex total = init;
  for (std::size_t s = 0; s + 1 < verts.size(); ++s) {
    const Complex a = verts[s].z();
    const Complex delta = verts[s + 1].z() - a;
    const Complex delta_bar = std::conj(delta);
    // integrand along z(t) = a + t*delta, t in [0, 1]
    auto integrand = [&](double t) {
      const DomainPoint p = DomainPoint::from(a + t * delta);
      Complex pv, qv;
      try {
        pv = p_dz(p);
        qv = q_dzbar(p);
      } catch (const EvaluationError&) {
        throw;
      } catch (const std::exception& e) {
        throw EvaluationError(std::string("path integrand failed: ") + e.what(), p.u, p.v);
      }
      if (!finite(pv) || !finite(qv)) {
        throw EvaluationError("non-finite path integrand at t=" + std::to_string(s + t), p.u, p.v);
      }
      return pv * delta + qv * delta_bar;
    };
    const double h = 1.0 / n;
    Complex sum = integrand(0.0) + integrand(1.0);
    for (int k = 1; k < n; ++k) {
      sum += (k % 2 == 1 ? 4.0 : 2.0) * integrand(k * h);
    }
    total += sum * (h / 3.0);
  }
  return total;
}

std::vector<double> rk4_step(const OdeRhs& rhs, double t, const std::vector<double>& y, double dt) {
  const std::size_t n = y.size();
  auto axpy = [n](const std::vector<double>& base, const std::vector<double>& k, double s) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = base[i] + s * k[i];
    return out;
  };
  const auto k1 = rhs(t, y);
  const auto k2 = rhs(t + 0.5 * dt, axpy(y, k1, 0.5 * dt));
  const auto k3 = rhs(t + 0.5 * dt, axpy(y, k2, 0.5 * dt));
  const auto k4 = rhs(t + dt, axpy(y, k3, dt));
  if (k1.size() != n || k2.size() != n || k3.size() != n || k4.size() != n) {
    throw std::invalid_argument("rk4: right-hand side changed dimension");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

Trajectory rk4_solve(const OdeRhs& rhs, std::vector<double> y0, double t_begin, double t_end, double step,
                     const Rk4Options& options) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("rk4_solve: step must be positive");
  }
  Trajectory traj;
  traj.t.push_back(t_begin);
  traj.y.push_back(y0);
  traj.last_valid_t = t_begin;

  const double span = t_end - t_begin;
  const double dir = span >= 0 ? 1.0 : -1.0;
  // count steps up front so sample times are t_begin + k*step exactly
  const auto full_steps = static_cast<long>(std::floor(std::abs(span) / step + 1e-9));
  const double tail = std::abs(span) - full_steps * step;

  auto accept = [&](double t, std::vector<double> y) {
    for (double c : y) {
      if (!std::isfinite(c) || std::abs(c) > options.blowup_bound) {
        traj.truncated = true;
        return false;
      }
    }
    if (options.stop && options.stop(t, y)) {
      traj.truncated = true;
      return false;
    }
    traj.t.push_back(t);
    traj.y.push_back(std::move(y));
    traj.last_valid_t = t;
    return true;
  };

  std::vector<double> y = std::move(y0);
  for (long k = 0; k < full_steps; ++k) {
    const double t = t_begin + dir * k * step;
    auto next = rk4_step(rhs, t, y, dir * step);
    if (!accept(t_begin + dir * (k + 1) * step, next)) return traj;
    y = traj.y.back();
  }
  if (tail > 1e-12 * step) {
    const double t = traj.t.back();
    auto next = rk4_step(rhs, t, y, dir * tail);
    accept(t_end, std::move(next));
  }
  return traj;
}

void GridSpec::validate() const {
  if (!std::isfinite(umin) || !std::isfinite(umax) || !std::isfinite(vmin) || !std::isfinite(vmax)) {
    throw std::invalid_argument("grid bounds must be finite");
  }
  if (!(umax > umin) || !(vmax > vmin)) {
    throw std::invalid_argument("grid ranges must be non-empty");
  }
  if (nu < 2 || nv < 2) {
    throw std::invalid_argument("grid needs at least 2 nodes per axis");
  }
}

double GridSpec::u(int i) const {
  // pin the last node to the bound exactly
  return i == nu - 1 ? umax : umin + (umax - umin) * i / (nu - 1);
}

double GridSpec::v(int j) const { return j == nv - 1 ? vmax : vmin + (vmax - vmin) * j / (nv - 1); }

std::string GridSpec::describe() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "[%.6g, %.6g] x [%.6g, %.6g], %d x %d nodes", umin, umax, vmin, vmax, nu, nv);
  return buf;
}

}  // namespace nilgauss

#include "nilgauss/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "nilgauss/errors.hpp"

namespace nilgauss {

namespace {

// Everything the path integrands need from one jet evaluation.
struct PointData {
  Complex a;
  Complex b;
  Complex eta;
};

PointData point_data(const WirtingerJet2& j) {
  const auto [a, b] = f_integrands(j);
  return {a, b, eta_from_g(j)};
}

struct StateRate {
  Complex dF;
  double dh = 0.0;
};

StateRate rate(const PointData& p, Complex delta, const ImmersionState& s) {
  const Complex hz = 0.5 * p.eta - 0.25 * kI * (std::conj(s.F) * p.a - s.F * std::conj(p.b));
  return {p.a * delta + p.b * std::conj(delta), 2.0 * (hz * delta).real()};
}

ImmersionState advance(const ImmersionState& s, const StateRate& r, double dt) {
  return {s.F + dt * r.dF, s.h + dt * r.dh};
}

int panels_for(double length, int per_unit) {
  int n = static_cast<int>(std::ceil(length * per_unit - 1e-9));
  n = std::max(n, 2);
  return n % 2 == 0 ? n : n + 1;
}

WirtingerJet2 checked_jet(const GaussMapFn& g, DomainPoint p) {
  WirtingerJet2 j;
  try {
    j = g.jet(p);
  } catch (const EvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationError(std::string("Gauss map evaluation failed: ") + e.what(), p.u, p.v);
  }
  const Complex parts[] = {j.val, j.dz, j.dzbar};
  for (Complex c : parts) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw EvaluationError("non-finite Gauss map jet", p.u, p.v);
    }
  }
  return j;
}

// RK4 on the coupled (F, h) system along the straight segment a -> b.
// The F component has a state-independent rate, so it reduces to composite Simpson.
ImmersionState integrate_segment(const GaussMapFn& g, DomainPoint a, DomainPoint b, ImmersionState s,
                                 int per_unit) {
  const Complex za = a.z();
  const Complex delta = b.z() - za;
  const double len = std::abs(delta);
  if (len == 0.0) return s;
  const int n = panels_for(len, per_unit);
  const double dt = 1.0 / n;
  auto data_at = [&](double t) {
    const DomainPoint p = DomainPoint::from(za + t * delta);
    const WirtingerJet2 j = checked_jet(g, p);
    try {
      return point_data(j);
    } catch (const OutOfDiskError& e) {
      throw EvaluationError(std::string("integration path left the disk: ") + e.what(), p.u, p.v);
    }
  };
  PointData p0 = data_at(0.0);
  for (int k = 0; k < n; ++k) {
    const double t0 = k * dt;
    const PointData pm = data_at(t0 + 0.5 * dt);
    const PointData p1 = data_at(k + 1 == n ? 1.0 : t0 + dt);
    const StateRate k1 = rate(p0, delta, s);
    const StateRate k2 = rate(pm, delta, advance(s, k1, 0.5 * dt));
    const StateRate k3 = rate(pm, delta, advance(s, k2, 0.5 * dt));
    const StateRate k4 = rate(p1, delta, advance(s, k3, dt));
    s.F += dt / 6.0 * (k1.dF + 2.0 * k2.dF + 2.0 * k3.dF + k4.dF);
    s.h += dt / 6.0 * (k1.dh + 2.0 * k2.dh + 2.0 * k3.dh + k4.dh);
    p0 = p1;
  }
  return s;
}

std::vector<DomainPoint> path_vertices(DomainPoint z0, DomainPoint target, const IntegrationConfig& cfg) {
  std::vector<DomainPoint> pts{z0};
  switch (cfg.path) {
    case PathStrategy::UThenV:
      pts.push_back({target.u, z0.v});
      break;
    case PathStrategy::VThenU:
      pts.push_back({z0.u, target.v});
      break;
    case PathStrategy::Custom:
      pts.insert(pts.end(), cfg.waypoints.begin(), cfg.waypoints.end());
      break;
  }
  pts.push_back(target);
  return pts;
}

void record_node_residuals(const GaussMapFn& g, const WirtingerJet2& jet, const ImmersionSample& s, double step,
                           ResidualReport& report) {
  const DomainPoint z = s.z;
  report.observe(residual::kHarmonic, harmonic_residual(jet), z);
  report.observe(residual::kConformality, conformality_residual(s), z);
  const auto mr = minimality_residual(s);
  report.observe(residual::kMinimalityHorizontal, mr.horizontal, z);
  report.observe(residual::kMinimalityVertical, mr.vertical, z);

  const double predicted = induced_metric_factor(jet);
  report.observe(residual::kMetricFactor, std::abs(sample_metric_factor(s) - predicted) / predicted, z);

  const Complex q = hopf_coefficient(jet).q;
  try {
    const FrameVector n = unit_normal(s);
    const auto g_back = gauss_from_normal(n);
    report.observe(residual::kRoundTrip,
                   g_back ? std::abs(*g_back - jet.val) : std::numeric_limits<double>::infinity(), z);
    report.observe(residual::kAbreschRosenberg, std::abs(abresch_rosenberg(s, n) - 4.0 * kI * q), z);
  } catch (const DegenerateImmersionError&) {
    report.observe(residual::kRoundTrip, std::numeric_limits<double>::infinity(), z);
    report.observe(residual::kAbreschRosenberg, std::numeric_limits<double>::infinity(), z);
  }

  // the h equation is solvable iff d/dzbar of h_z is real
  const Complex hz_zbar =
      0.5 * s.eta_dzbar - 0.25 * kI *
                              (std::norm(s.F_dz) - std::norm(s.F_dzbar) + std::conj(s.F) * s.F_dzzbar -
                               s.F * std::conj(s.F_dzzbar));
  report.observe(residual::kHIntegrability, hz_zbar.imag(), z);

  if (stencil_inside(g.domain(), z, step)) {
    report.observe(residual::kIntegrability, integrability_residual(g, z, step).max(), z);
    report.observe(residual::kHopfHolomorphy, hopf_holomorphy_residual(g, z, step), z);
  }
}

}  // namespace

FIntegrands f_integrands(const WirtingerJet2& j) {
  require_in_disk(j, "f_integrands");
  const double w = 1.0 - std::norm(j.val);
  const double w2 = w * w;
  return {-4.0 * kI * j.dz / w2, -4.0 * kI * j.val * j.val * std::conj(j.dz) / w2};
}

Complex integrability_closed_form(const WirtingerJet2& j) {
  require_in_disk(j, "integrability_closed_form");
  const double w = 1.0 - std::norm(j.val);
  return -8.0 * kI * j.val * j.dz * std::conj(j.dz) / (w * w * w);
}

double IntegrabilityResidual::max() const { return std::max({cross, a_closed, b_closed}); }

IntegrabilityResidual integrability_residual(const GaussMapFn& g, DomainPoint z, double step) {
  if (!stencil_inside(g.domain(), z, step)) {
    throw std::domain_error("integrability_residual: stencil leaves the domain");
  }
  const ComplexField a = [&g](DomainPoint p) { return f_integrands(g.jet(p)).a; };
  const ComplexField b = [&g](DomainPoint p) { return f_integrands(g.jet(p)).b; };
  const Complex a_zbar = wirtinger_jet(a, z, step).dzbar;
  const Complex b_z = wirtinger_jet(b, z, step).dz;
  const Complex closed = integrability_closed_form(g.jet(z));
  return {std::abs(a_zbar - b_z), std::abs(a_zbar - closed), std::abs(b_z - closed)};
}

Complex h_integrand(const WirtingerJet2& j, Complex F, Complex F_dz, Complex F_dzbar) {
  return 0.5 * eta_from_g(j) - 0.25 * kI * (std::conj(F) * F_dz - F * std::conj(F_dzbar));
}

ImmersionSample immersion_sample(const WirtingerJet2& j, DomainPoint z, Complex F, double h) {
  require_in_disk(j, "immersion_sample");
  const Complex g = j.val;
  const Complex gb = std::conj(g);
  const Complex gb_z = std::conj(j.dzbar);
  const Complex gb_zbar = std::conj(j.dz);
  const double w = 1.0 - std::norm(g);
  const double w2 = w * w;
  const double w3 = w2 * w;
  const Complex w_z = -(j.dz * gb + g * gb_z);
  const Complex w_zbar = -(j.dzbar * gb + g * gb_zbar);
  const Complex m4i = -4.0 * kI;
  const Complex p8i = 8.0 * kI;

  ImmersionSample s;
  s.z = z;
  s.F = F;
  s.h = h;
  s.F_dz = m4i * j.dz / w2;
  s.F_dzbar = m4i * g * g * gb_zbar / w2;
  s.F_dzz = m4i * (j.dzz / w2 - 2.0 * j.dz * w_z / w3);
  s.F_dzzbar = m4i * (j.dzzbar / w2 - 2.0 * j.dz * w_zbar / w3);
  s.F_dzbarzbar = m4i * (2.0 * g * j.dzbar * gb_zbar / w2 + g * g * std::conj(j.dzz) / w2 -
                         2.0 * g * g * gb_zbar * w_zbar / w3);
  s.eta = p8i * gb * j.dz / w2;
  s.eta_dz = p8i * (gb_z * j.dz / w2 + gb * j.dzz / w2 - 2.0 * gb * j.dz * w_z / w3);
  s.eta_dzbar = p8i * (gb_zbar * j.dz / w2 + gb * j.dzzbar / w2 - 2.0 * gb * j.dz * w_zbar / w3);
  s.h_dz = 0.5 * s.eta - 0.25 * kI * (std::conj(F) * s.F_dz - F * std::conj(s.F_dzbar));
  return s;
}

void IntegrationConfig::validate() const {
  if (!z0.finite()) throw std::invalid_argument("base point must be finite");
  if (!std::isfinite(F0.real()) || !std::isfinite(F0.imag()) || !std::isfinite(h0)) {
    throw std::invalid_argument("initial values must be finite");
  }
  if (subdivisions_per_unit < 16) throw std::invalid_argument("subdivisions per unit length must be at least 16");
  if (threads < 1) throw std::invalid_argument("thread count must be positive");
  if (!(disk_margin > 0.0 && disk_margin < 1.0)) throw std::invalid_argument("disk margin must lie in (0, 1)");
  if (!(stencil_step > 0.0)) throw std::invalid_argument("stencil step must be positive");
}

ImmersionState integrate_along(const GaussMapFn& g, const std::vector<DomainPoint>& path, ImmersionState start,
                               int subdivisions_per_unit) {
  ImmersionState s = start;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    s = integrate_segment(g, path[k], path[k + 1], s, subdivisions_per_unit);
  }
  return s;
}

ImmersionState integrate_to(const GaussMapFn& g, DomainPoint target, const IntegrationConfig& cfg) {
  return integrate_along(g, path_vertices(cfg.z0, target, cfg), {cfg.F0, cfg.h0}, cfg.subdivisions_per_unit);
}

double path_independence_check(const GaussMapFn& g, DomainPoint target, const IntegrationConfig& cfg) {
  IntegrationConfig first = cfg;
  first.path = PathStrategy::UThenV;
  IntegrationConfig second = cfg;
  second.path = PathStrategy::VThenU;
  const ImmersionState a = integrate_to(g, target, first);
  const ImmersionState b = integrate_to(g, target, second);
  return std::max(std::abs(a.F - b.F), std::abs(a.h - b.h));
}

const char* to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Active:
      return "active";
    case NodeStatus::OutsideDomain:
      return "outside_domain";
    case NodeStatus::NearUnitCircle:
      return "near_unit_circle";
    case NodeStatus::EvaluationFailed:
      return "evaluation_failed";
    case NodeStatus::Unreachable:
      return "unreachable";
  }
  return "unknown";
}

ImmersionGrid::ImmersionGrid(GridSpec grid, GaussMapFn map, IntegrationConfig cfg)
    : grid_(grid), map_(std::move(map)), cfg_(std::move(cfg)), report_(grid_.describe()) {}

const ImmersionSample* ImmersionGrid::sample(int i, int j) const {
  const auto k = grid_.index(i, j);
  return status_[k] == NodeStatus::Active ? &samples_[k] : nullptr;
}

std::vector<ExcludedNode> ImmersionGrid::excluded() const {
  std::vector<ExcludedNode> out;
  for (int j = 0; j < grid_.nv; ++j) {
    for (int i = 0; i < grid_.nu; ++i) {
      const NodeStatus st = status(i, j);
      if (st != NodeStatus::Active) out.push_back({i, j, grid_.node(i, j), st});
    }
  }
  return out;
}

std::size_t ImmersionGrid::active_count() const {
  return static_cast<std::size_t>(std::count(status_.begin(), status_.end(), NodeStatus::Active));
}

ImmersionGrid integrate_immersion(const GaussMapFn& g, const GridSpec& grid, const IntegrationConfig& cfg) {
  grid.validate();
  cfg.validate();
  ImmersionGrid out(grid, g, cfg);
  const double limit = 1.0 - cfg.disk_margin;

  if (!g.domain().contains(cfg.z0)) {
    throw PreconditionError("base_point", "base point lies outside the map's domain", cfg.z0.u, cfg.z0.v, 0.0);
  }
  {
    const double r = std::abs(checked_jet(g, cfg.z0).val);
    if (!(r <= limit)) {
      throw PreconditionError("disk_containment", "|g| at the base point is not inside the disk", cfg.z0.u,
                              cfg.z0.v, r);
    }
  }

  // classify nodes and run the pre-integration checks on the candidates
  const std::size_t total = grid.size();
  std::vector<NodeStatus> status(total, NodeStatus::Active);
  std::vector<WirtingerJet2> jets(total);
  GridExtremum margin{std::numeric_limits<double>::infinity(), {}, 0};
  GridExtremum harmonic{0.0, {}, 0};
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      const auto k = grid.index(i, j);
      const DomainPoint p = grid.node(i, j);
      if (!g.domain().contains(p)) {
        status[k] = NodeStatus::OutsideDomain;
        continue;
      }
      try {
        jets[k] = checked_jet(g, p);
      } catch (const EvaluationError&) {
        status[k] = NodeStatus::EvaluationFailed;
        continue;
      }
      if (!(std::abs(jets[k].val) <= limit)) {
        status[k] = NodeStatus::NearUnitCircle;
        continue;
      }
      const double m = std::abs(jets[k].dz);
      if (m < margin.value) margin = {m, p, margin.nodes};
      ++margin.nodes;
      const double hr = harmonic_residual(jets[k]);
      if (hr > harmonic.value || std::isnan(hr)) harmonic = {hr, p, harmonic.nodes};
      ++harmonic.nodes;
    }
  }
  if (margin.nodes == 0) {
    throw PreconditionError("empty_grid", "no grid node lies in the map's good region", grid.umin, grid.vmin, 0.0);
  }
  if (!(margin.value >= cfg.antiholomorphy_threshold)) {
    throw PreconditionError("antiholomorphy", "Gauss map is antiholomorphic (g_z = 0) somewhere on the grid",
                            margin.at.u, margin.at.v, margin.value);
  }
  if (!(harmonic.value <= cfg.harmonic_tolerance)) {
    throw PreconditionError("harmonicity", "Gauss map is not harmonic into the disk on the grid", harmonic.at.u,
                            harmonic.at.v, harmonic.value);
  }
  out.margin_ = margin;

  // first leg along the axis through z0, second leg per column (or row)
  const bool u_first = cfg.path != PathStrategy::VThenU;
  const int n_first = u_first ? grid.nu : grid.nv;
  const int n_second = u_first ? grid.nv : grid.nu;
  const double base_first = u_first ? cfg.z0.u : cfg.z0.v;
  const double base_second = u_first ? cfg.z0.v : cfg.z0.u;
  auto first_coord = [&](int a) { return u_first ? grid.u(a) : grid.v(a); };
  auto second_coord = [&](int b) { return u_first ? grid.v(b) : grid.u(b); };
  auto point = [&](double first, double second) {
    return u_first ? DomainPoint{first, second} : DomainPoint{second, first};
  };
  auto node_index = [&](int a, int b) { return u_first ? grid.index(a, b) : grid.index(b, a); };

  auto passable = [&](DomainPoint p) {
    if (!g.domain().contains(p)) return false;
    try {
      return std::abs(checked_jet(g, p).val) <= limit;
    } catch (const EvaluationError&) {
      return false;
    }
  };

  // Walk outward from `base` through the sorted stop coordinates on each side,
  // stopping at the first impassable stop or failed segment.
  auto walk = [&](int count, auto coord, double base, ImmersionState start, auto make_point, auto can_stop,
                  std::vector<std::optional<ImmersionState>>& states) {
    states.assign(count, std::nullopt);
    for (int dir : {+1, -1}) {
      std::vector<int> order;
      for (int a = 0; a < count; ++a) {
        const double c = coord(a);
        if ((dir > 0 && c >= base) || (dir < 0 && c < base)) order.push_back(a);
      }
      std::sort(order.begin(), order.end(), [&](int x, int y) { return dir > 0 ? coord(x) < coord(y) : coord(x) > coord(y); });
      double cur = base;
      ImmersionState s = start;
      for (int a : order) {
        if (!can_stop(a)) break;
        try {
          s = integrate_segment(g, make_point(cur), make_point(coord(a)), s, cfg.subdivisions_per_unit);
        } catch (const EvaluationError&) {
          break;
        } catch (const OutOfDiskError&) {
          break;
        }
        cur = coord(a);
        states[a] = s;
      }
    }
  };

  std::vector<std::optional<ImmersionState>> base_states;
  walk(
      n_first, first_coord, base_first, ImmersionState{cfg.F0, cfg.h0},
      [&](double c) { return point(c, base_second); },
      [&](int a) { return passable(point(first_coord(a), base_second)); }, base_states);

  std::vector<ImmersionSample> samples(total);
  std::vector<ResidualReport> column_reports(n_first, ResidualReport(grid.describe()));
  std::vector<char> reached(total, 0);

  auto sweep_column = [&](int a) {
    if (!base_states[a]) return;
    const double c1 = first_coord(a);
    std::vector<std::optional<ImmersionState>> states;
    walk(
        n_second, second_coord, base_second, *base_states[a], [&](double c2) { return point(c1, c2); },
        [&](int b) { return status[node_index(a, b)] == NodeStatus::Active; }, states);
    for (int b = 0; b < n_second; ++b) {
      if (!states[b]) continue;
      const auto k = node_index(a, b);
      samples[k] = immersion_sample(jets[k], point(c1, second_coord(b)), states[b]->F, states[b]->h);
      reached[k] = 1;
      record_node_residuals(g, jets[k], samples[k], cfg.stencil_step, column_reports[a]);
    }
  };

  const int workers = std::min(cfg.threads, n_first);
  if (workers <= 1) {
    for (int a = 0; a < n_first; ++a) sweep_column(a);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int a = w; a < n_first; a += workers) sweep_column(a);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (std::size_t k = 0; k < total; ++k) {
    if (status[k] == NodeStatus::Active && !reached[k]) status[k] = NodeStatus::Unreachable;
  }
  for (const auto& r : column_reports) out.report_.merge(r);
  out.status_ = std::move(status);
  out.samples_ = std::move(samples);
  return out;
}

}  // namespace nilgauss

#include <gtest/gtest.h>

#include <cmath>

#include "nilgauss/errors.hpp"
#include "nilgauss/expression.hpp"
#include "nilgauss/gallery.hpp"
#include "nilgauss/weierstrass.hpp"

using namespace nilgauss;

namespace {

double sup_closed_form_error(const GallerySurface& s, const ImmersionGrid& ig, bool h_only = false) {
  double worst = 0.0;
  for (int j = 0; j < ig.grid().nv; ++j) {
    for (int i = 0; i < ig.grid().nu; ++i) {
      const ImmersionSample* p = ig.sample(i, j);
      if (!p) continue;
      worst = std::max(worst, std::abs(p->h - s.h(p->z)));
      if (!h_only) worst = std::max(worst, std::abs(p->F - s.F(p->z)));
    }
  }
  return worst;
}

}  // namespace

TEST(FIntegrands, Examples) {
  const auto hemi = f_integrands(hemisphere().map.jet({0, 0}));
  EXPECT_NEAR(std::abs(hemi.a - 4.0), 0.0, 1e-15);
  EXPECT_EQ(hemi.b, Complex(0.0));
  const auto flat = f_integrands({0.3, 0.0, 0.2, 0, 0, 0});
  EXPECT_EQ(flat.a, Complex(0.0));
  EXPECT_EQ(flat.b, Complex(0.0));
  const auto ti = f_integrands(translation_invariant(0.0).map.jet({0, 0}));
  EXPECT_NEAR(std::abs(ti.a - 1.0), 0.0, 1e-14);
  EXPECT_THROW(f_integrands({1.0, 1.0, 0, 0, 0, 0}), OutOfDiskError);
}

TEST(Integrability, GalleryMapsOnTheirGrids) {
  for (const auto& s : {hemisphere(), translation_invariant(0.3), helicoid(0.5), semitrough(), conjugate_semitrough()}) {
    const GridSpec g = s.default_grid;
    double worst = 0.0;
    for (int j = 1; j < g.nv - 1; j += 4) {
      for (int i = 1; i < g.nu - 1; i += 4) {
        const DomainPoint z = g.node(i, j);
        if (!stencil_inside(s.map.domain(), z, 2.5e-4)) continue;
        worst = std::max(worst, integrability_residual(s.map, z, 2.5e-4).max());
      }
    }
    EXPECT_LE(worst, 1e-6) << s.name;
  }
}

TEST(Integrability, HolomorphicMapHasNonzeroClosedForm) {
  const GaussMapFn g = user_map("z/2");
  const DomainPoint z{0.3, -0.2};
  const auto jet = g.jet(z);
  const Complex expected = -8.0 * kI * (0.5 * z.z()) * 0.25 / std::pow(1.0 - std::norm(0.5 * z.z()), 3);
  EXPECT_NEAR(std::abs(integrability_closed_form(jet) - expected), 0.0, 1e-15);
  EXPECT_LE(integrability_residual(g, z, 1e-3).max(), 1e-8);
}

TEST(Integrability, DetectsNonHarmonicMap) {
  EXPECT_GT(integrability_residual(user_map("z/2 + conj(z)^2/10"), {0.3, 0.2}, 1e-3).cross, 1e-3);
}

TEST(HIntegrand, Examples) {
  const auto hemi = hemisphere();
  for (DomainPoint z : {DomainPoint{0, 0}, DomainPoint{0.3, -0.5}}) {
    const auto f = f_integrands(hemi.map.jet(z));
    EXPECT_NEAR(std::abs(h_integrand(hemi.map.jet(z), hemi.F(z), f.a, f.b)), 0.0, 1e-13);
  }
  for (double a : {0.5, -0.5, 1.0}) {
    const auto hel = helicoid(a);
    const DomainPoint z{1.2, 0.3};
    const auto f = f_integrands(hel.map.jet(z));
    EXPECT_NEAR(std::abs(h_integrand(hel.map.jet(z), hel.F(z), f.a, f.b) - a), 0.0, 1e-8) << a;
  }
  const auto ti = translation_invariant(0.0);
  const auto f = f_integrands(ti.map.jet({0, 0}));
  EXPECT_NEAR(std::abs(h_integrand(ti.map.jet({0, 0}), ti.F({0, 0}), f.a, f.b)), 0.0, 1e-14);
}

TEST(IntegrateImmersion, HemisphereMatchesClosedForm) {
  const auto s = hemisphere(0.8);
  IntegrationConfig cfg;
  const auto ig = integrate_immersion(s.map, {-0.8, 0.8, -0.8, 0.8, 64, 64}, cfg);
  EXPECT_LE(sup_closed_form_error(s, ig), 1e-6);
  double h = 0.0;
  for (int j = 0; j < 64; ++j) {
    for (int i = 0; i < 64; ++i) {
      if (const auto* p = ig.sample(i, j)) h = std::max(h, std::abs(p->h));
    }
  }
  EXPECT_LE(h, 1e-8);
  // corners of the square lie outside the disk
  EXPECT_EQ(ig.status(0, 0), NodeStatus::OutsideDomain);
}

TEST(IntegrateImmersion, SemitroughHeight) {
  const auto s = semitrough();
  const auto ig = integrate_immersion(s.map, {0.2, 2.0, -1.0, 1.0, 37, 41}, s.default_config());
  EXPECT_LE(sup_closed_form_error(s, ig, true), 1e-6);
}

TEST(IntegrateImmersion, HelicoidHeightIsTwiceAU) {
  // h_z = a with h real forces h_u = 2a
  const auto s = helicoid(0.5);
  const auto ig = integrate_immersion(s.map, s.default_grid, s.default_config());
  double worst = 0.0;
  for (int j = 0; j < s.default_grid.nv; ++j) {
    for (int i = 0; i < s.default_grid.nu; ++i) {
      const auto* p = ig.sample(i, j);
      ASSERT_NE(p, nullptr);
      worst = std::max(worst, std::abs(p->h - p->z.u));
    }
  }
  EXPECT_LE(worst, 1e-7);
}

TEST(IntegrateImmersion, BaseSampleCarriesInitialValues) {
  const auto s = semitrough();
  IntegrationConfig cfg = s.default_config();
  cfg.F0 = Complex(3.0, -1.0);
  cfg.h0 = 0.25;
  const GridSpec grid{0.5, 1.5, -0.5, 0.5, 5, 5};  // node (2, 2) is z0 = 1
  const auto ig = integrate_immersion(s.map, grid, cfg);
  EXPECT_EQ(ig.sample(2, 2)->F, cfg.F0);
  EXPECT_EQ(ig.sample(2, 2)->h, cfg.h0);
}

TEST(IntegrateImmersion, TranslationsOfInitialValues) {
  const auto s = semitrough();
  const GridSpec grid{0.4, 2.0, -1.0, 1.0, 17, 17};
  const IntegrationConfig base = s.default_config();
  const auto ref = integrate_immersion(s.map, grid, base);

  // vertical translation
  IntegrationConfig up = base;
  up.h0 += 1.5;
  const auto shifted = integrate_immersion(s.map, grid, up);
  // x1 translation by t: (F, h) -> (F + t, h + t Im F / 2)
  const double t = 0.7;
  IntegrationConfig side = base;
  side.F0 += t;
  side.h0 += 0.5 * t * base.F0.imag();
  const auto moved = integrate_immersion(s.map, grid, side);

  double dv = 0.0, dx = 0.0;
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      const auto *a = ref.sample(i, j), *b = shifted.sample(i, j), *c = moved.sample(i, j);
      dv = std::max({dv, std::abs(b->h - a->h - 1.5), std::abs(b->F - a->F)});
      const Nil3Point expect = left_translate({t, 0, 0}, a->point());
      dx = std::max({dx, std::abs(c->F.real() - expect.x1), std::abs(c->F.imag() - expect.x2),
                     std::abs(c->h - expect.x3)});
    }
  }
  EXPECT_LE(dv, 1e-12);
  EXPECT_LE(dx, 1e-9);
}

TEST(IntegrateImmersion, DeterministicAcrossRunsAndThreads) {
  const auto s = translation_invariant(0.3);
  IntegrationConfig cfg = s.default_config();
  const auto a = integrate_immersion(s.map, s.default_grid, cfg);
  const auto b = integrate_immersion(s.map, s.default_grid, cfg);
  cfg.threads = 3;
  const auto c = integrate_immersion(s.map, s.default_grid, cfg);
  for (int j = 0; j < s.default_grid.nv; ++j) {
    for (int i = 0; i < s.default_grid.nu; ++i) {
      EXPECT_EQ(a.sample(i, j)->F, b.sample(i, j)->F);
      EXPECT_EQ(a.sample(i, j)->h, b.sample(i, j)->h);
      EXPECT_EQ(a.sample(i, j)->F, c.sample(i, j)->F);
      EXPECT_EQ(a.sample(i, j)->h, c.sample(i, j)->h);
    }
  }
  for (const auto& [name, e] : a.residuals().entries()) EXPECT_EQ(e.sup, c.residuals().sup(name)) << name;
}

TEST(IntegrateImmersion, Preconditions) {
  const GridSpec grid{-0.5, 0.5, -0.5, 0.5, 9, 9};
  IntegrationConfig cfg;
  try {
    integrate_immersion(user_map("conj(z)/2"), grid, cfg);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.check(), "antiholomorphy");
    EXPECT_EQ(e.value(), 0.0);
  }
  try {
    integrate_immersion(user_map("z/2 + conj(z)^2/10"), grid, cfg);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.check(), "harmonicity");
    EXPECT_GT(e.value(), 1e-3);
  }
  cfg.z0 = {5.0, 0.0};
  try {
    integrate_immersion(hemisphere().map, grid, cfg);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.check(), "base_point");
  }
  cfg.z0 = {0.0, 0.0};
  cfg.subdivisions_per_unit = 8;
  EXPECT_THROW(integrate_immersion(hemisphere().map, grid, cfg), std::invalid_argument);
}

TEST(IntegrateImmersion, NodesNearTheUnitCircleAreExcluded) {
  const GridSpec grid{-1.2, 1.2, -1.2, 1.2, 25, 25};
  const auto ig = integrate_immersion(user_map("z"), grid, IntegrationConfig{});
  long near = 0, unreachable = 0;
  for (const auto& e : ig.excluded()) {
    EXPECT_GE(std::abs(e.z.z()), 0.0);
    if (e.status == NodeStatus::NearUnitCircle) {
      ++near;
      EXPECT_GT(std::abs(e.z.z()), 1.0 - 1e-6);
    }
    if (e.status == NodeStatus::Unreachable) ++unreachable;
  }
  EXPECT_GT(near, 0);
  EXPECT_EQ(ig.active_count() + ig.excluded().size(), grid.size());
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      if (ig.sample(i, j)) EXPECT_LT(std::abs(grid.node(i, j).z()), 1.0);
    }
  }
  EXPECT_STREQ(to_string(NodeStatus::NearUnitCircle), "near_unit_circle");
  (void)unreachable;
}

TEST(PathIndependence, Examples) {
  const auto hemi = hemisphere();
  EXPECT_LE(path_independence_check(hemi.map, {0.5, 0.5}, hemi.default_config()), 1e-9);
  EXPECT_EQ(path_independence_check(hemi.map, {0.0, 0.0}, hemi.default_config()), 0.0);
  const auto tr = semitrough();
  EXPECT_LE(path_independence_check(tr.map, {1.5, 0.8}, tr.default_config()), 1e-8);
}

TEST(IntegrateAlong, CustomPolylineAgreesWithLPath) {
  const auto tr = semitrough();
  IntegrationConfig cfg = tr.default_config();
  const DomainPoint target{1.8, -0.6};
  const auto l = integrate_to(tr.map, target, cfg);
  cfg.path = PathStrategy::Custom;
  cfg.waypoints = {{1.4, 0.5}, {2.1, 0.2}};
  const auto c = integrate_to(tr.map, target, cfg);
  EXPECT_NEAR(std::abs(l.F - c.F), 0.0, 1e-8);
  EXPECT_NEAR(l.h, c.h, 1e-8);
  EXPECT_NEAR(std::abs(l.F - tr.F(target)), 0.0, 1e-8);
}

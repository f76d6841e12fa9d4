#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nilgauss/errors.hpp"
#include "nilgauss/expression.hpp"
#include "nilgauss/gallery.hpp"
#include "nilgauss/harmonic.hpp"

using namespace nilgauss;

namespace {

GaussMapFn half_z_plus(double eps) {
  return GaussMapFn("perturbed", DiskDomain{{0, 0}, 0.9}, [eps](DomainPoint p) {
    const Complex z = p.z();
    return WirtingerJet2{0.5 * z + eps * std::conj(z), 0.5, eps, 0.0, 0.0, 0.0};
  });
}

void expect_jet_near(const WirtingerJet2& a, const WirtingerJet2& b, double tol) {
  EXPECT_NEAR(std::abs(a.val - b.val), 0.0, tol);
  EXPECT_NEAR(std::abs(a.dz - b.dz), 0.0, tol);
  EXPECT_NEAR(std::abs(a.dzbar - b.dzbar), 0.0, tol);
  EXPECT_NEAR(std::abs(a.dzz - b.dzz), 0.0, tol);
  EXPECT_NEAR(std::abs(a.dzzbar - b.dzzbar), 0.0, tol);
  EXPECT_NEAR(std::abs(a.dzbarzbar - b.dzbarzbar), 0.0, tol);
}

}  // namespace

TEST(HarmonicResidual, Examples) {
  EXPECT_EQ(harmonic_residual({0.3, 1.0, 0.0, 2.0, 0.0, 0.0}), 0.0);
  EXPECT_LE(harmonic_residual(semitrough().map.jet({1.0, 0.5})), 1e-8);
  EXPECT_EQ(harmonic_residual({Complex(0.1, -0.2), 0.0, 0.5, 0.0, 0.0, 0.0}), 0.0);
}

TEST(HarmonicResidual, AllGalleryMapsOnDenseSamples) {
  for (const auto& s : {hemisphere(), translation_invariant(0.7), helicoid(0.5), helicoid(-0.5), semitrough(),
                        conjugate_semitrough()}) {
    const GridSpec g = s.default_grid;
    double worst = 0.0;
    int count = 0;
    for (int j = 0; j < g.nv; ++j) {
      for (int i = 0; i < g.nu; ++i) {
        const DomainPoint z = g.node(i, j);
        if (!s.map.domain().contains(z)) continue;
        const auto jet = s.map.jet(z);
        EXPECT_LT(std::abs(jet.val), 1.0) << s.name;
        worst = std::max(worst, harmonic_residual(jet));
        ++count;
      }
    }
    EXPECT_GT(count, 1000) << s.name;
    EXPECT_LE(worst, 1e-8) << s.name;
  }
}

TEST(AntiholomorphyMargin, Examples) {
  const auto hemi = hemisphere();
  const auto m = antiholomorphy_margin(hemi.map, hemi.default_grid);
  EXPECT_NEAR(m.value, 1.0, 1e-15);
  EXPECT_EQ(antiholomorphy_margin(user_map("conj(z)"), {-0.5, 0.5, -0.5, 0.5, 5, 5}).value, 0.0);
  const auto hel = helicoid(0.5);
  EXPECT_GT(antiholomorphy_margin(hel.map, hel.default_grid).value, 1e-2);
}

TEST(Hopf, GalleryConstants) {
  EXPECT_EQ(hopf_coefficient(hemisphere().map.jet({0.3, 0.1})).q, Complex(0.0));
  for (double theta : {0.0, 0.3, 1.0}) {
    const auto s = translation_invariant(theta);
    EXPECT_NEAR(std::abs(hopf_coefficient(s.map.jet({0.4, -1.1})).q + 0.25), 0.0, 1e-12);
  }
  const auto tr = semitrough();
  for (DomainPoint z : {DomainPoint{0.3, 0.0}, DomainPoint{1.0, 1.0}, DomainPoint{2.2, -0.9}}) {
    EXPECT_NEAR(std::abs(hopf_coefficient(tr.map.jet(z)).q + 1.0), 0.0, 1e-10);
  }
  EXPECT_THROW(hopf_coefficient({1.0, 1.0, 0.0, 0, 0, 0}), OutOfDiskError);
}

TEST(Hopf, HolomorphyResidual) {
  for (const auto& s : {translation_invariant(0.3), helicoid(0.5), semitrough(), conjugate_semitrough()}) {
    const DomainPoint z{s.base_point.u + 0.2, s.base_point.v + 0.1};
    EXPECT_LE(hopf_holomorphy_residual(s.map, z, 1e-3), 1e-6) << s.name;
  }
  EXPECT_EQ(hopf_holomorphy_residual(hemisphere().map, {0.1, 0.2}, 1e-3), 0.0);
}

TEST(Hopf, HolomorphyDetectsAntiholomorphicPart) {
  const DomainPoint z{0.3, 0.2};
  const double small = hopf_holomorphy_residual(half_z_plus(1e-3), z, 1e-3);
  const double large = hopf_holomorphy_residual(half_z_plus(1e-2), z, 1e-3);
  EXPECT_GT(small, 1e-5);
  EXPECT_NEAR(large / small, 10.0, 0.5);
}

TEST(Hopf, StencilOutsideDomainThrows) {
  EXPECT_THROW(hopf_holomorphy_residual(semitrough().map, {1e-4, 0.0}, 1e-3), std::domain_error);
}

TEST(Eta, Examples) {
  EXPECT_EQ(eta_from_g({0.0, 0.7, 0.1, 0, 0, 0}), Complex(0.0));
  EXPECT_NEAR(std::abs(eta_from_g({0.5 * kI, kI, 0, 0, 0, 0}) - Complex(0, 64.0 / 9.0)), 0.0, 1e-12);
  EXPECT_THROW(eta_from_g({Complex(0.0, 1.0), 1.0, 0, 0, 0, 0}), OutOfDiskError);
}

TEST(Mobius, ValidationAndFactories) {
  EXPECT_THROW(MobiusIsometry(1.0, 0.5), std::invalid_argument);
  const auto r = MobiusIsometry::rotation(0.4);
  EXPECT_NEAR(std::abs(r(Complex(0.5, 0.0)) - std::polar(0.5, 0.4)), 0.0, 1e-15);
  const Complex p(0.3, -0.4);
  EXPECT_NEAR(std::abs(MobiusIsometry::translation_to(p)(0.0) - p), 0.0, 1e-15);
  EXPECT_EQ(MobiusIsometry::conjugation()(Complex(0.1, 0.2)), Complex(0.1, -0.2));
  // disk to disk
  const auto t = MobiusIsometry::translation_to({0.6, 0.2});
  for (double a = 0; a < 6.28; a += 0.5) EXPECT_LT(std::abs(t(std::polar(0.999, a))), 1.0);
}

TEST(Mobius, IdentityLeavesJetUnchanged) {
  const auto jet = semitrough().map.jet({0.8, 0.3});
  expect_jet_near(mobius_apply(MobiusIsometry::identity(), jet), jet, 1e-15);
}

TEST(Mobius, RotationScalesDerivativeAndKeepsQ) {
  const double alpha = 0.9;
  const auto jet = semitrough().map.jet({0.8, 0.3});
  const auto rotated = mobius_apply(MobiusIsometry::rotation(alpha), jet);
  EXPECT_NEAR(std::abs(rotated.dz - std::polar(1.0, alpha) * jet.dz), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(rotated.dz), std::abs(jet.dz), 1e-14);
  EXPECT_NEAR(std::abs(hopf_coefficient(rotated).q - hopf_coefficient(jet).q), 0.0, 1e-12);
}

TEST(Mobius, PreservesHarmonicity) {
  const auto tr = semitrough();
  const auto t = MobiusIsometry::translation_to({0.3, 0.2});
  const GaussMapFn moved = mobius_apply(t, tr.map);
  for (DomainPoint z : {DomainPoint{0.5, 0.0}, DomainPoint{1.3, -0.8}, DomainPoint{2.0, 1.1}}) {
    ASSERT_LE(harmonic_residual(tr.map.jet(z)), 1e-10);
    EXPECT_LE(harmonic_residual(moved.jet(z)), 1e-8);
  }
  EXPECT_TRUE(moved.antiholomorphy_guaranteed());
}

TEST(Mobius, CompositionMatchesSequentialApplication) {
  const auto tr = semitrough();
  const MobiusIsometry t1 = MobiusIsometry::translation_to({0.2, -0.1});
  const MobiusIsometry t2 = MobiusIsometry::rotation(1.1).compose(MobiusIsometry::translation_to({-0.3, 0.25}));
  for (const MobiusIsometry& first : {t1, MobiusIsometry::conjugation().compose(t1)}) {
    const GaussMapFn seq = mobius_apply(t2, mobius_apply(first, tr.map));
    const GaussMapFn once = mobius_apply(t2.compose(first), tr.map);
    for (DomainPoint z : {DomainPoint{0.6, 0.2}, DomainPoint{1.9, -0.7}}) {
      expect_jet_near(seq.jet(z), once.jet(z), 1e-12);
    }
  }
}

TEST(Mobius, NegativeIsometryClearsAntiholomorphyGuarantee) {
  const GaussMapFn c = mobius_apply(MobiusIsometry::conjugation(), semitrough().map);
  EXPECT_FALSE(c.antiholomorphy_guaranteed());
  const auto jet = c.jet({1.0, 0.4});
  const auto expected = conjugate_semitrough().map.jet({1.0, 0.4});
  expect_jet_near(jet, expected, 1e-14);
}

TEST(Minkowski, Examples) {
  const auto m = minkowski_factor({0.0, kI, 0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(m.hat, 16.0);
  EXPECT_DOUBLE_EQ(m.ratio, 1.0);
  const WirtingerJet2 half{0.5 * kI, kI, 0, 0, 0, 0};
  EXPECT_NEAR(minkowski_factor(half).product(), 6400.0 / 81.0, 1e-10);
  const auto flat = minkowski_factor({0.4, 0.0, 0.2, 0, 0, 0});
  EXPECT_EQ(flat.hat, 0.0);
  EXPECT_TRUE(std::isfinite(flat.ratio));
  EXPECT_THROW(minkowski_factor({1.2, 1.0, 0, 0, 0, 0}), OutOfDiskError);
}

TEST(Minkowski, ProductIsInducedMetric) {
  for (const auto& s : {semitrough(), helicoid(-0.5), translation_invariant(0.3)}) {
    const auto jet = s.map.jet({s.base_point.u + 0.3, s.base_point.v - 0.2});
    const double lambda = induced_metric_factor(jet);
    EXPECT_NEAR(minkowski_factor(jet).product(), lambda, 1e-13 * lambda) << s.name;
  }
}

TEST(GaussMapFn, FiniteDifferenceJetsAgreeWithAnalytic) {
  const auto tr = semitrough();
  const GaussMapFn fd = tr.map.with_finite_differences(1e-3);
  EXPECT_FALSE(fd.analytic_jets());
  for (DomainPoint z : {DomainPoint{0.7, 0.1}, DomainPoint{1.4, -0.6}}) {
    const auto a = tr.map.jet(z), b = fd.jet(z);
    EXPECT_NEAR(std::abs(a.dz - b.dz), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(a.dzbar - b.dzbar), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(a.dzzbar - b.dzzbar), 0.0, 1e-5);
  }
}

TEST(MapDomain, Contains) {
  const MapDomain disk(DiskDomain{{0, 0}, 0.5});
  EXPECT_TRUE(disk.contains({0.3, 0.4}));
  EXPECT_FALSE(disk.contains({0.4, 0.4}));
  const MapDomain half(RectDomain{0.0, INFINITY, -INFINITY, INFINITY, true});
  EXPECT_FALSE(half.contains({0.0, 1.0}));
  EXPECT_TRUE(half.contains({1e-9, 1.0}));
  EXPECT_TRUE(stencil_inside(half, {1.0, 0.0}, 1e-3));
  EXPECT_FALSE(stencil_inside(half, {1e-3, 0.0}, 1e-3));
}

#include <gtest/gtest.h>

#include <cmath>

#include "nilgauss/errors.hpp"
#include "nilgauss/numerics.hpp"

using namespace nilgauss;

namespace {

// tangent half-angle solves phi'' = phi - 2a phi (1 - phi^2) for a = 1/4
OdeRhs profile_rhs(double a) {
  return [a](double, const std::vector<double>& y) {
    return std::vector<double>{y[1], y[0] - 2.0 * a * y[0] * (1.0 - y[0] * y[0])};
  };
}

double tan_profile_error(double step) {
  const auto tr = rk4_solve(profile_rhs(0.25), {0.0, 0.5}, 0.0, 1.5, step);
  double err = 0.0;
  for (std::size_t k = 0; k < tr.t.size(); ++k) err = std::max(err, std::abs(tr.y[k][0] - std::tan(tr.t[k] / 2)));
  return err;
}

}  // namespace

TEST(WirtingerJet, IdentityMap) {
  const auto j = wirtinger_jet([](DomainPoint p) { return p.z(); }, {0.3, 0.7}, 1e-3);
  EXPECT_NEAR(std::abs(j.dz - 1.0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(j.dzbar), 0.0, 1e-10);
}

TEST(WirtingerJet, Conjugation) {
  for (DomainPoint z : {DomainPoint{0, 0}, DomainPoint{-1.2, 0.4}, DomainPoint{3, -2}}) {
    const auto j = wirtinger_jet([](DomainPoint p) { return std::conj(p.z()); }, z, 1e-3);
    EXPECT_NEAR(std::abs(j.dz), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(j.dzbar - 1.0), 0.0, 1e-10);
  }
}

TEST(WirtingerJet, ModulusSquared) {
  const auto j = wirtinger_jet([](DomainPoint p) { return Complex(std::norm(p.z())); }, {1, 1});
  EXPECT_NEAR(std::abs(j.dz - Complex(1, -1)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(j.dzbar - Complex(1, 1)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(j.dzzbar - 1.0), 0.0, 1e-6);
}

TEST(WirtingerJet, HolomorphicPolynomialHasNoZbarPart) {
  auto f = [](DomainPoint p) {
    const Complex z = p.z();
    return z * z * z - 2.0 * kI * z + 0.5;
  };
  for (DomainPoint z : {DomainPoint{0.2, -0.4}, DomainPoint{1.5, 0.9}}) {
    const auto j = wirtinger_jet(f, z, 1e-3);
    EXPECT_LE(std::abs(j.dzbar), 1e-9);
    EXPECT_LE(std::abs(j.dzzbar), 1e-6);
    EXPECT_NEAR(std::abs(j.dz - (3.0 * z.z() * z.z() - 2.0 * kI)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(j.dzz - 6.0 * z.z()), 0.0, 1e-5);
  }
}

TEST(WirtingerJet, MixedMonomialAgainstSymbolicDerivatives) {
  // f = z^2 conj(z): f_z = 2|z|^2, f_zbar = z^2, f_zz = 2 conj(z), f_zzbar = 2z, f_zbarzbar = 0
  auto f = [](DomainPoint p) { return p.z() * p.z() * std::conj(p.z()); };
  const DomainPoint at{0.6, -0.3};
  const Complex z = at.z();
  const auto j = wirtinger_jet(f, at, 1e-3);
  EXPECT_NEAR(std::abs(j.dz - 2.0 * std::norm(z)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(j.dzbar - z * z), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(j.dzz - 2.0 * std::conj(z)), 0.0, 1e-5);
  EXPECT_NEAR(std::abs(j.dzzbar - 2.0 * z), 0.0, 1e-5);
  EXPECT_NEAR(std::abs(j.dzbarzbar), 0.0, 1e-5);
}

TEST(WirtingerJet, PartialsAndConjugateJet) {
  // f = exp(z): f_u = f, f_v = i f, f_uu = f, f_uv = i f, f_vv = -f
  const Complex e = std::exp(Complex(0.3, 0.2));
  const auto j = jet_from_partials(e, e, kI * e, e, kI * e, -e);
  EXPECT_NEAR(std::abs(j.dz - e), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(j.dzbar), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(j.dzz - e), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(j.dzzbar), 0.0, 1e-15);
  const auto c = conjugate(j);
  EXPECT_NEAR(std::abs(c.dz), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c.dzbar - std::conj(e)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c.dzbarzbar - std::conj(e)), 0.0, 1e-15);
}

TEST(WirtingerJet, NonFiniteValueReportsPoint) {
  auto f = [](DomainPoint p) { return 1.0 / (p.z() - Complex(1.0, 0.0)); };
  try {
    wirtinger_jet(f, {1.0, 0.0}, 1e-3);
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_DOUBLE_EQ(e.u(), 1.0);
    EXPECT_DOUBLE_EQ(e.v(), 0.0);
  }
  EXPECT_THROW(wirtinger_jet(f, {0.0, 0.0}, 0.0), std::invalid_argument);
}

TEST(WirtingerJet, DefaultStepScalesWithModulus) {
  EXPECT_DOUBLE_EQ(default_jet_step({0.1, 0.1}), 1e-4);
  EXPECT_DOUBLE_EQ(default_jet_step({3.0, 4.0}), 5e-4);
}

TEST(PathIntegrate, ConstantIntegrand) {
  const Polyline path({{0, 0}, {1, 0}}, 16);
  const Complex r = path_integrate([](DomainPoint) { return Complex(1.0); }, [](DomainPoint) { return Complex(0.0); },
                                   path, 0.0);
  EXPECT_NEAR(std::abs(r - 1.0), 0.0, 1e-14);
}

TEST(PathIntegrate, ConjugateDifferential) {
  const Polyline path({{0, 0}, {0, 1}}, 16);
  const Complex r = path_integrate([](DomainPoint) { return Complex(0.0); }, [](DomainPoint) { return Complex(1.0); },
                                   path, 0.0);
  EXPECT_NEAR(std::abs(r + kI), 0.0, 1e-12);
}

TEST(PathIntegrate, HolomorphicAntiderivative) {
  const Polyline path({{0, 0}, {1, 1}}, 32);
  const Complex r = path_integrate([](DomainPoint p) { return 2.0 * p.z(); },
                                   [](DomainPoint) { return Complex(0.0); }, path, 0.0);
  EXPECT_NEAR(std::abs(r - 2.0 * kI), 0.0, 1e-10);
}

TEST(PathIntegrate, ClosedLoopOfExactDifferential) {
  // phi = z^2 conj(z) + 3 conj(z) - i z^3
  auto p = [](DomainPoint q) { return 2.0 * q.z() * std::conj(q.z()) - 3.0 * kI * q.z() * q.z(); };
  auto qb = [](DomainPoint q) { return q.z() * q.z() + 3.0; };
  const Polyline loop({{0, 0}, {1.5, 0}, {1.5, 1}, {-0.5, 2}, {0, 0}}, 64);
  const Complex init(0.25, -1.0);
  EXPECT_NEAR(std::abs(path_integrate(p, qb, loop, init) - init), 0.0, 1e-9);
}

TEST(PathIntegrate, FourthOrderInPanels) {
  auto p = [](DomainPoint q) { return std::exp(q.z()); };
  auto zero = [](DomainPoint) { return Complex(0.0); };
  const Complex exact = std::exp(Complex(1, 1)) - 1.0;
  const double e1 = std::abs(path_integrate(p, zero, Polyline({{0, 0}, {1, 1}}, 8), 0.0) - exact);
  const double e2 = std::abs(path_integrate(p, zero, Polyline({{0, 0}, {1, 1}}, 16), 0.0) - exact);
  EXPECT_GT(e1 / e2, 12.0);
}

TEST(PathIntegrate, NonFiniteIntegrandThrows) {
  auto p = [](DomainPoint q) { return 1.0 / q.z(); };
  auto zero = [](DomainPoint) { return Complex(0.0); };
  EXPECT_THROW(path_integrate(p, zero, Polyline({{-1, 0}, {1, 0}}, 16), 0.0), EvaluationError);
}

TEST(Polyline, Validation) {
  EXPECT_THROW(Polyline({{0, 0}}, 4), std::invalid_argument);
  EXPECT_THROW(Polyline({{0, 0}, {0, 0}}, 4), std::invalid_argument);
  EXPECT_THROW(Polyline({{0, 0}, {1, 0}}, 0), std::invalid_argument);
  EXPECT_THROW(Polyline({{0, 0}, {NAN, 0}}, 4), std::invalid_argument);
  EXPECT_EQ(Polyline({{0, 0}, {1, 0}}, 7).subdivisions(), 8);
}

TEST(Rk4, Exponential) {
  const auto tr = rk4_solve([](double, const std::vector<double>& y) { return y; }, {1.0}, 0.0, 1.0, 1e-3);
  EXPECT_FALSE(tr.truncated);
  EXPECT_DOUBLE_EQ(tr.t.back(), 1.0);
  EXPECT_NEAR(tr.y.back()[0], std::exp(1.0), 1e-10);
}

TEST(Rk4, ConstantSolution) {
  const auto tr = rk4_solve([](double, const std::vector<double>& y) { return std::vector<double>(y.size(), 0.0); },
                            {2.5, -1.0}, 0.0, 3.0, 0.1);
  for (const auto& y : tr.y) {
    EXPECT_EQ(y[0], 2.5);
    EXPECT_EQ(y[1], -1.0);
  }
}

TEST(Rk4, BackwardDirectionAndShortTail) {
  const auto tr = rk4_solve([](double, const std::vector<double>& y) { return y; }, {1.0}, 0.0, -1.05, 0.1);
  EXPECT_DOUBLE_EQ(tr.t.back(), -1.05);
  EXPECT_NEAR(tr.y.back()[0], std::exp(-1.05), 1e-6);
}

TEST(Rk4, BlowUpTruncates) {
  // y' = y^2, y(0) = 1 blows up at t = 1
  Rk4Options opts;
  opts.blowup_bound = 1e6;
  const auto tr =
      rk4_solve([](double, const std::vector<double>& y) { return std::vector<double>{y[0] * y[0]}; }, {1.0}, 0.0,
                2.0, 1e-3, opts);
  EXPECT_TRUE(tr.truncated);
  // RK4 lags the pole slightly
  EXPECT_LT(tr.last_valid_t, 1.1);
  EXPECT_GT(tr.last_valid_t, 0.99);
  EXPECT_DOUBLE_EQ(tr.t.back(), tr.last_valid_t);
}

TEST(Rk4, StopPredicate) {
  Rk4Options opts;
  opts.stop = [](double, const std::vector<double>& y) { return y[0] >= 2.0; };
  const auto tr = rk4_solve([](double, const std::vector<double>& y) { return y; }, {1.0}, 0.0, 5.0, 1e-3, opts);
  EXPECT_TRUE(tr.truncated);
  EXPECT_NEAR(tr.last_valid_t, std::log(2.0), 2e-3);
  EXPECT_LT(tr.y.back()[0], 2.0);
}

TEST(Rk4, HalfAngleTangentProfile) {
  // tan(v/2) is the profile for a = 1/4 (not 1/2): (phi')^2 - phi^2 = (1 - phi^2)^2 / 4
  EXPECT_LE(tan_profile_error(1e-3), 1e-8);
}

TEST(Rk4, HalfAngleTangentIsNotTheProfileForAOneHalf) {
  const auto tr = rk4_solve(profile_rhs(0.5), {0.0, std::sqrt(0.5)}, 0.0, 1.0, 1e-3);
  EXPECT_GT(std::abs(tr.y.back()[0] - std::tan(0.5)), 1e-2);
}

TEST(Rk4, FourthOrderConvergence) {
  const double coarse = tan_profile_error(0.1);
  const double fine = tan_profile_error(0.05);
  EXPECT_GE(coarse / fine, 12.0);
}

TEST(Rk4, RejectsBadStep) {
  EXPECT_THROW(rk4_solve([](double, const std::vector<double>& y) { return y; }, {1.0}, 0.0, 1.0, 0.0),
               std::invalid_argument);
}

TEST(GridSpec, NodesAndValidation) {
  const GridSpec g{-1.0, 1.0, 0.0, 0.3, 3, 4};
  EXPECT_NO_THROW(g.validate());
  EXPECT_DOUBLE_EQ(g.u(0), -1.0);
  EXPECT_DOUBLE_EQ(g.u(1), 0.0);
  EXPECT_DOUBLE_EQ(g.u(2), 1.0);
  EXPECT_DOUBLE_EQ(g.v(3), 0.3);
  EXPECT_EQ(g.size(), 12u);
  EXPECT_EQ(g.index(2, 1), 5u);
  EXPECT_THROW((GridSpec{1.0, 0.0, 0.0, 1.0, 3, 3}.validate()), std::invalid_argument);
  EXPECT_THROW((GridSpec{0.0, 1.0, 0.0, 1.0, 1, 3}.validate()), std::invalid_argument);
  EXPECT_THROW((GridSpec{0.0, INFINITY, 0.0, 1.0, 3, 3}.validate()), std::invalid_argument);
}

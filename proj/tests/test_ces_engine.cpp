#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "susyqes/ces_engine.hpp"
#include "susyqes/spectral_oracle.hpp"

using namespace susyqes;

TEST(Duality, TanhMapsToTan) {
  const auto rm = SolvableBase::rosen_morse(2.5);
  for (double xi = -1.4; xi <= 1.4; xi += 0.1) {
    EXPECT_NEAR(rm.dual(xi).w, 2.5 * std::tan(xi), 1e-13 * std::max(1.0, std::fabs(std::tan(xi))));
    const auto r = rm.dual_by_rule(xi);
    EXPECT_NEAR(r.real(), rm.dual(xi).w, 1e-12 * std::max(1.0, std::fabs(r.real())));
    EXPECT_NEAR(r.imag(), 0.0, 1e-12);
  }
  const auto ho = SolvableBase::harmonic();
  EXPECT_DOUBLE_EQ(ho.dual(1.7).w, 1.7);
  EXPECT_NEAR(ho.dual_by_rule(1.7).real(), 1.7, 1e-15);
}

TEST(Duality, PolesRaiseDomainError) {
  const auto rm = SolvableBase::rosen_morse(2.0);
  EXPECT_THROW(rm.dual(std::numbers::pi / 2), DomainError);
  EXPECT_THROW(rm.dual(-std::numbers::pi / 2), DomainError);
  EXPECT_THROW(rm.dual(3.0 * std::numbers::pi / 2), DomainError);
  EXPECT_NO_THROW(rm.dual(std::numbers::pi / 2 - 1e-6));
}

TEST(Duality, DoubleDualIsIdentityOnW) {
  for (double a : {1.5, 2.5, 3.3}) {
    const auto rm = SolvableBase::rosen_morse(a);
    for (double x = -5.0; x <= 5.0; x += 0.1) {
      const auto dd = rm.double_dual(x);
      EXPECT_NEAR(dd.real(), rm.w1(x).w, 1e-12 * a);
      EXPECT_NEAR(dd.imag(), 0.0, 1e-12);
    }
  }
}

TEST(ShapeInvariance, TanhAndTan) {
  const auto xs = linspace(-5.0, 5.0, 501);
  const auto xis = linspace(-1.5, 1.5, 301);
  for (double a : {1.5, 2.0, 2.5, 3.3}) {
    const auto rm = SolvableBase::rosen_morse(a);
    const auto s = rm.shape();
    EXPECT_DOUBLE_EQ(s.param1, a - 1.0);
    EXPECT_LT(shape_invariance_residual(rm.family(), s.param, s.param1, s.remainder, xs), 1e-10);
    const double a1 = a + 1.0;
    const double r = 0.5 * std::fabs(a * a - a1 * a1);
    EXPECT_LT(shape_invariance_residual(tan_family(), a, a1, r, xis), 1e-10 * (1.0 + std::pow(std::tan(1.5), 2)));
    const auto d = rm.dual_shape();
    EXPECT_LT(shape_invariance_residual(rm.dual_family(), d.param, d.param1, d.remainder, xis), 1e-9);
    // Wrong remainder is caught.
    EXPECT_GT(shape_invariance_residual(rm.family(), s.param, s.param1, s.remainder + 0.1, xs), 0.1);
  }
  const auto ho = SolvableBase::harmonic().shape();
  EXPECT_LT(shape_invariance_residual(linear_family(), ho.param, ho.param1, ho.remainder, xs), 1e-12);
}

TEST(PhiFromDual, IndexRules) {
  const auto rm = SolvableBase::rosen_morse(2.5);
  EXPECT_EQ(phi_from_dual(rm, 3).family(), Family::SinhFamily);
  try {
    phi_from_dual(rm, 2);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("is even"), std::string::npos);
  }
  EXPECT_THROW(phi_from_dual(rm, 7), InputError);
  EXPECT_THROW(SolvableBase::rosen_morse(1.0), InputError);
  EXPECT_EQ(phi_from_dual(SolvableBase::harmonic(), 2).family(), Family::HermiteOdd);
}

TEST(EpsilonK, Values) {
  EXPECT_DOUBLE_EQ(epsilon_k(SolvableBase::harmonic(), 2), 5.0);
  EXPECT_DOUBLE_EQ(epsilon_k(SolvableBase::rosen_morse(2.0), 1), 2.5);
  EXPECT_DOUBLE_EQ(epsilon_k(SolvableBase::rosen_morse(2.5), 3), 12.0);
}

TEST(PhiOde, AnalyticAndFiniteDifference) {
  const auto xs = linspace(-8.0, 8.0, 801);
  for (double a : {1.5, 2.0, 2.5, 3.3, 6.0}) {
    const auto rm = SolvableBase::rosen_morse(a);
    for (int k : {1, 3, 5}) {
      EXPECT_LT(phi_ode_residual(rm, k, xs), 1e-8) << a << ' ' << k;
      // Same ODE with phi'' and phi' from finite differences of phi alone.
      const auto g = phi_from_dual(rm, k);
      const double eps = epsilon_k(rm, k);
      const double h = 1e-4;
      for (double x = -2.0; x <= 2.0; x += 0.25) {
        auto f = [&](double t) { return eval_with_derivs(g, t).value; };
        const double d1 = (f(x + h) - f(x - h)) / (2 * h);
        const double d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
        const double r = 0.5 * d2 + a * std::tanh(x) * d1 - eps * f(x);
        EXPECT_LT(std::fabs(r) / (1.0 + std::fabs(eps * f(x))), 1e-5) << a << ' ' << k << ' ' << x;
      }
    }
  }
  for (int k = 0; k <= 4; ++k) {
    EXPECT_LT(phi_ode_residual(SolvableBase::harmonic(), k, linspace(-6.0, 6.0, 201)), 1e-10);
  }
}

TEST(RosenMorseCes, TwoRoutesAgree) {
  const auto xs = linspace(-10.0, 10.0, 1001);
  for (double a : {1.5, 2.0, 2.5, 3.3}) {
    for (int k : {1, 3, 5}) {
      const auto model = make_ces_model(SolvableBase::rosen_morse(a), k);
      double worst = 0.0;
      for (double x : xs) {
        const double v = model.potential(x);
        worst = std::max(worst, std::fabs(v - rosen_morse_ces_closed(a, k, x)) / std::max(1.0, std::fabs(v)));
      }
      EXPECT_LT(worst, 1e-10) << a << ' ' << k;
    }
  }
}

TEST(RosenMorseCes, ExplicitK3) {
  const auto xs = linspace(-8.0, 8.0, 1001);
  for (double a : {2.0, 2.5, 3.3}) {
    for (double x : xs) {
      const double ref = rosen_morse_ces_k3_explicit(a, x);
      EXPECT_NEAR(rosen_morse_ces_closed(a, 3, x), ref, 1e-9 * std::max(1.0, std::fabs(ref))) << a << ' ' << x;
    }
  }
}

TEST(RosenMorseCes, KOneIsRosenMorseWithAlphaPlusOne) {
  for (double a : {1.5, 2.5, 3.3}) {
    const auto model = make_ces_model(SolvableBase::rosen_morse(a), 1);
    for (double x = -10.0; x <= 10.0; x += 0.05) {
      EXPECT_NEAR(model.potential(x), rosen_morse_potential(a + 1.0, x), 1e-10);
    }
  }
}

TEST(RosenMorseCes, OracleLowestLevels) {
  const Grid grid(12.0, 4001);
  for (int k : {1, 3}) {
    const auto model = make_ces_model(SolvableBase::rosen_morse(2.5), k);
    const auto res = solve_spectrum([&](double x) { return model.potential(x); }, grid, {.levels = 2});
    EXPECT_NEAR(res.eigenvalues[0], 0.0, 1e-3);
    EXPECT_NEAR(res.eigenvalues[1], model.epsilon, 1e-3);
  }
}

TEST(HermiteRatioCes, W1CollapsesToSolvableSuperpotential) {
  for (auto [k, m] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 2}}) {
    const double eps = 2.0 * k - 2.0 * m + 1.0;
    const auto pair = superpotentials_from_phi(GeneratorFunction::hermite_ratio(k, m), eps);
    const auto ref = hermite_odd_solvable_superpotential(m);
    for (double x = -8.0; x <= 8.0; x += 0.05) {
      EXPECT_NEAR(pair.w1(x), ref(x), 1e-9 * std::max(1.0, std::fabs(ref(x)))) << k << ' ' << m << ' ' << x;
    }
    const auto model = make_hermite_ratio_ces(k, m);
    EXPECT_LT(phi_ode_residual(model, linspace(-6.0, 6.0, 241)), 1e-10);
  }
}

TEST(ExactSpectrum, Examples) {
  const auto ho = make_ces_model(SolvableBase::harmonic(), 1);
  EXPECT_EQ(exact_spectrum(ho, 4).energies, std::vector<double>({0, 3, 4, 5, 6}));
  const auto ratio = make_hermite_ratio_ces(2, 1);
  EXPECT_EQ(exact_spectrum(ratio, 4).energies, std::vector<double>({0, 3, 6, 7, 8}));
  const auto rm = make_ces_model(SolvableBase::rosen_morse(2.5), 3);
  const auto s = exact_spectrum(rm, 6);
  EXPECT_EQ(s.energies, std::vector<double>({0, 12, 14, 15}));
  EXPECT_TRUE(s.truncated);
  EXPECT_TRUE(s.derived_by_chain);
  ASSERT_TRUE(s.continuum.has_value());
  EXPECT_DOUBLE_EQ(*s.continuum, 12.0 + 3.125);
  EXPECT_THROW(exact_spectrum(rm, -1), InputError);
}

TEST(RosenMorseCes, ChainLevelsConfirmedByOracle) {
  const auto model = make_ces_model(SolvableBase::rosen_morse(2.5), 1);
  const auto s = exact_spectrum(model, 5);
  ASSERT_EQ(s.energies, std::vector<double>({0, 3, 5, 6}));
  EXPECT_DOUBLE_EQ(*s.continuum, 6.125);
  // The top level sits just under the continuum and decays like exp(-|x|/2).
  const auto res = solve_spectrum([&](double x) { return model.potential(x); }, Grid(40.0, 16001), {.levels = 4});
  for (int n = 0; n < 4; ++n) EXPECT_NEAR(res.eigenvalues[n], s.energies[n], 1e-3) << n;
}

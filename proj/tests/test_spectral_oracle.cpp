#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "susyqes/ces_engine.hpp"
#include "susyqes/spectral_oracle.hpp"

using namespace susyqes;

namespace {

TridiagonalOperator small_operator(std::vector<double> v, double h) {
  TridiagonalOperator op;
  op.spacing = h;
  op.off_diagonal = -0.5 / (h * h);
  for (double x : v) op.diagonal.push_back(1.0 / (h * h) + x);
  return op;
}

double harmonic(double x) { return 0.5 * x * x; }

}  // namespace

TEST(Discretize, Entries) {
  // L = 1, N = 5 by hand: h = 0.5, interior -0.5, 0, 0.5.
  const auto op = small_operator({0.125, 0.0, 0.125}, 0.5);
  EXPECT_DOUBLE_EQ(op.off_diagonal, -2.0);
  EXPECT_DOUBLE_EQ(op.diagonal[0], 4.125);
  EXPECT_DOUBLE_EQ(op.diagonal[1], 4.0);

  const Grid grid(1.0, 101);
  const auto d = discretize(harmonic, grid);
  EXPECT_EQ(d.size(), 99u);
  const double h = 0.02;
  EXPECT_NEAR(d.off_diagonal, -0.5 / (h * h), 1e-9);
  EXPECT_NEAR(d.diagonal[49], 1.0 / (h * h), 1e-9);
}

TEST(Discretize, NonFinitePotential) {
  const Grid grid(1.0, 101);
  try {
    discretize([](double x) { return x == 0.0 ? NAN : 1.0; }, grid);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("node 50"), std::string::npos);
  }
}

TEST(Sturm, ParticleInABox) {
  // V = 0 on [-1, 1]: E_n = (n pi / 2)^2 / 2.
  const Grid grid(1.0, 2001);
  const auto op = discretize([](double) { return 0.0; }, grid);
  for (int n = 1; n <= 5; ++n) {
    const double e = 0.5 * std::pow(n * std::numbers::pi / 2.0, 2);
    EXPECT_EQ(sturm_count(op, e - 0.01), static_cast<std::size_t>(n - 1));
    EXPECT_EQ(sturm_count(op, e + 0.01), static_cast<std::size_t>(n));
  }
  const auto [lo, hi] = gershgorin_bounds(op);
  EXPECT_EQ(sturm_count(op, lo), 0u);
  EXPECT_EQ(sturm_count(op, hi), op.size());
}

TEST(Sturm, MonotoneInLambda) {
  const Grid grid(8.0, 801);
  const auto op = discretize(harmonic, grid);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-5.0, 200.0);
  std::vector<double> ls(100);
  for (double& l : ls) l = d(rng);
  std::sort(ls.begin(), ls.end());
  for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_LE(sturm_count(op, ls[i - 1]), sturm_count(op, ls[i]));
}

TEST(Oracle, HarmonicOscillator) {
  const Grid grid(10.0, 2001);
  const auto res = solve_spectrum(harmonic, grid, {.levels = 4});
  for (int n = 0; n < 4; ++n) EXPECT_NEAR(res.eigenvalues[n], n + 0.5, 1e-6);
  // Shifted oscillator (x^2 - 1)/2 has levels 0, 1, 2, 3.
  const auto shifted = solve_spectrum([](double x) { return 0.5 * (x * x - 1.0); }, grid, {.levels = 4});
  for (int n = 0; n < 4; ++n) EXPECT_NEAR(shifted.eigenvalues[n], n, 1e-6);
}

TEST(Oracle, RosenMorse) {
  // (W^2 - W')/2 with W = 2.5 tanh x: levels (a^2 - (a - n)^2)/2 = 0, 2, 3.
  const Grid grid(20.0, 4001);
  const auto res = solve_spectrum([](double x) { return rosen_morse_potential(2.5, x); }, grid,
                                  {.levels = 3});
  const double expect[] = {0.0, 2.0, 3.0};
  for (int n = 0; n < 3; ++n) EXPECT_NEAR(res.eigenvalues[n], expect[n], 1e-3);
}

TEST(Oracle, SecondOrderConvergence) {
  const Grid coarse(10.0, 1001);
  const auto a = lowest_eigenpairs(discretize(harmonic, coarse), 4, 1e-12, false);
  const auto b = lowest_eigenpairs(discretize(harmonic, coarse.refined()), 4, 1e-12, false);
  for (int n = 0; n < 4; ++n) {
    const double ratio = (a.raw_eigenvalues[n] - (n + 0.5)) / (b.raw_eigenvalues[n] - (n + 0.5));
    EXPECT_NEAR(ratio, 4.0, 0.8) << n;
  }
}

TEST(Oracle, EigenvectorsOrthonormal) {
  const Grid grid(10.0, 2001);
  const auto res = lowest_eigenpairs(discretize(harmonic, grid), 6, 1e-12);
  const double h = grid.spacing();
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(res.eigenvectors[i].front(), 0.0);
    EXPECT_EQ(res.eigenvectors[i].back(), 0.0);
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < grid.size(); ++p) s += res.eigenvectors[i][p] * res.eigenvectors[j][p];
      EXPECT_NEAR(s * h, i == j ? 1.0 : 0.0, 1e-8);
    }
  }
}

TEST(Oracle, OverlapWithHermiteFunctions) {
  const Grid grid(10.0, 2001);
  const auto res = lowest_eigenpairs(discretize(harmonic, grid), 3, 1e-12);
  EXPECT_GT(overlap([](double x) { return std::exp(-0.5 * x * x); }, res.eigenvectors[0], grid), 0.99999);
  EXPECT_GT(overlap([](double x) { return x * std::exp(-0.5 * x * x); }, res.eigenvectors[1], grid), 0.99999);
  EXPECT_LT(overlap([](double x) { return std::exp(-0.5 * x * x); }, res.eigenvectors[1], grid), 1e-8);
  EXPECT_THROW(overlap([](double) { return 0.0; }, res.eigenvectors[0], grid), InputError);
  EXPECT_THROW(overlap([](double) { return 1.0; }, std::vector<double>(7, 1.0), grid), InputError);
}

TEST(Oracle, TruncationStability) {
  const auto a = solve_spectrum(harmonic, Grid(10.0, 2001), {.levels = 5});
  const auto b = solve_spectrum(harmonic, Grid(12.0, 2401), {.levels = 5});
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(a.eigenvalues[n], b.eigenvalues[n], 1e-6);
}

TEST(Oracle, ArgumentValidation) {
  const auto op = discretize(harmonic, Grid(5.0, 101));
  EXPECT_THROW(lowest_eigenpairs(op, 0, 1e-10), InputError);
  EXPECT_THROW(lowest_eigenpairs(op, 13, 1e-10), InputError);
  EXPECT_THROW(lowest_eigenpairs(op, 3, 1e-14), InputError);
  EXPECT_THROW(Grid(5.0, 100), InputError);
  EXPECT_THROW(Grid(5.0, 99), InputError);
  EXPECT_THROW(Grid(-1.0, 101), InputError);
}

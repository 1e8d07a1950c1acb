#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "susyqes/errors.hpp"

namespace susyqes::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights by Newton iteration on P_n.
inline Rule gauss_legendre(int n) {
  if (n < 1) throw InputError("gauss_legendre: order must be >= 1");
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -z;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return r;
}

/// Composite Gauss-Legendre over `panels` equal subintervals of [a, b].
template <class F>
double composite_gauss_legendre(F&& f, double a, double b, int panels, const Rule& rule) {
  if (panels < 1) throw InputError("composite_gauss_legendre: panels must be >= 1");
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = 0.5 * width;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    sum += half * s;
  }
  return sum;
}

template <class F>
double composite_gauss_legendre(F&& f, double a, double b, int panels = 64, int order = 16) {
  return composite_gauss_legendre(f, a, b, panels, gauss_legendre(order));
}

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

namespace detail {

template <class F>
void simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                  double tol, int depth, AdaptiveResult& out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol || depth <= 0) {
    if (depth <= 0 && std::fabs(delta) > 15.0 * tol) out.converged = false;
    out.value += left + right + delta / 15.0;
    out.error += std::fabs(delta) / 15.0;
    return;
  }
  simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
  simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction. Reports non-convergence in the
/// result instead of throwing.
template <class F>
AdaptiveResult adaptive_simpson_raw(F&& f, double a, double b, double abs_tol = 1e-10,
                                    int max_depth = 40) {
  AdaptiveResult out;
  out.value = 0.0;
  if (a == b) return out;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  detail::simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, out);
  return out;
}

/// Adaptive Simpson; throws NumericalError carrying the achieved error estimate.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-10, int max_depth = 40) {
  const auto r = adaptive_simpson_raw(f, a, b, abs_tol, max_depth);
  if (!r.converged || !std::isfinite(r.value)) {
    throw NumericalError("adaptive_simpson: no convergence on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "], achieved error " + std::to_string(r.error),
                         r.error);
  }
  return r.value;
}

}  // namespace susyqes::quad

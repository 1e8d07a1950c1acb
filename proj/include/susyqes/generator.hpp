#pragma once

// Generator functions phi(x) with closed-form derivatives up to third order.
//
// Every catalog family is odd, has phi'(x) > 0 for admissible parameters and a
// single node at x = 0. Downstream constructions only use ratios of phi and its
// derivatives, so the scale beta drops out.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "susyqes/errors.hpp"
#include "susyqes/pseudo_hermite.hpp"

namespace susyqes {

enum class Family { Monomial, HermiteOdd, HermiteRatio, SinhFamily };

struct Interval {
  double lo = -12.0;
  double hi = 12.0;
};

inline constexpr Interval kDefaultDomain{-12.0, 12.0};

struct PhiDerivs {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// phi and its derivatives multiplied by exp(-log_scale).
struct ScaledPhiDerivs {
  PhiDerivs scaled;
  double log_scale = 0.0;

  PhiDerivs unscaled() const {
    const double s = std::exp(log_scale);
    return {scaled.value * s, scaled.d1 * s, scaled.d2 * s, scaled.d3 * s};
  }
};

class GeneratorFunction {
 public:
  static GeneratorFunction monomial(double beta = 1.0) {
    GeneratorFunction g(Family::Monomial, beta);
    return g;
  }

  /// phi = beta * P_{2k+1}(x).
  static GeneratorFunction hermite_odd(int k, double beta = 1.0) {
    if (k < 0) throw InputError("hermite-odd: k must be >= 0");
    if (2 * k + 1 > kMaxPseudoHermiteDegree) {
      throw CapacityError("hermite-odd: degree " + std::to_string(2 * k + 1) + " exceeds maximum " +
                          std::to_string(kMaxPseudoHermiteDegree));
    }
    GeneratorFunction g(Family::HermiteOdd, beta);
    g.k_ = k;
    return g;
  }

  /// phi = beta * P_{2k+1}(x) / P_{2m}(x), k >= m.
  static GeneratorFunction hermite_ratio(int k, int m, double beta = 1.0) {
    if (m < 0) throw InputError("hermite-ratio: m must be >= 0");
    if (k < m) {
      throw InputError("hermite-ratio: requires k >= m (got k=" + std::to_string(k) +
                       ", m=" + std::to_string(m) + ")");
    }
    if (2 * k + 1 > kMaxPseudoHermiteDegree) {
      throw CapacityError("hermite-ratio: degree " + std::to_string(2 * k + 1) +
                          " exceeds maximum " + std::to_string(kMaxPseudoHermiteDegree));
    }
    GeneratorFunction g(Family::HermiteRatio, beta);
    g.k_ = k;
    g.m_ = m;
    return g;
  }

  /// Odd solutions built on the Rosen-Morse base alpha*tanh(x), index 1, 3 or 5:
  ///   phi_1 = sinh x
  ///   phi_3 = [1 - a + (2 + a) cosh 2x] sinh x
  ///   phi_5 = [6 + a + 3a^2 - 4(a^2 + 2a - 3) cosh 2x + (a^2 + 7a + 12) cosh 4x] sinh x
  /// stored as sums c_j sinh(j x) over odd j.
  static GeneratorFunction sinh_family(int index, double alpha, double beta = 1.0) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw InputError("sinh-family: alpha must be a finite positive number");
    }
    GeneratorFunction g(Family::SinhFamily, beta);
    g.index_ = index;
    g.alpha_ = alpha;
    const double a = alpha;
    switch (index) {
      case 1:
        g.sinh_coeffs_ = {1.0, 0.0, 0.0};
        break;
      case 3:
        g.sinh_coeffs_ = {-1.5 * a, 0.5 * (2.0 + a), 0.0};
        break;
      case 5: {
        const double c0 = 6.0 + a + 3.0 * a * a;
        const double c2 = -4.0 * (a * a + 2.0 * a - 3.0);
        const double c4 = a * a + 7.0 * a + 12.0;
        g.sinh_coeffs_ = {c0 - 0.5 * c2, 0.5 * (c2 - c4), 0.5 * c4};
        break;
      }
      default:
        throw InputError("sinh-family: index must be 1, 3 or 5 (got " + std::to_string(index) + ")");
    }
    return g;
  }

  Family family() const noexcept { return family_; }
  int k() const noexcept { return k_; }
  int m() const noexcept { return m_; }
  int index() const noexcept { return index_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  /// Coefficients of sinh(x), sinh(3x), sinh(5x) for the sinh family.
  const std::array<double, 3>& sinh_coeffs() const noexcept { return sinh_coeffs_; }

  std::string name() const {
    switch (family_) {
      case Family::Monomial:
        return "monomial";
      case Family::HermiteOdd:
        return "hermite-odd(k=" + std::to_string(k_) + ")";
      case Family::HermiteRatio:
        return "hermite-ratio(k=" + std::to_string(k_) + ",m=" + std::to_string(m_) + ")";
      case Family::SinhFamily:
        return "sinh(index=" + std::to_string(index_) + ",alpha=" + std::to_string(alpha_) + ")";
    }
    return "unknown";
  }

  ScaledPhiDerivs eval_scaled(double x) const {
    switch (family_) {
      case Family::Monomial:
        return {{beta_ * x, beta_, 0.0, 0.0}, 0.0};
      case Family::HermiteOdd:
        return {hermite_odd_derivs(x), 0.0};
      case Family::HermiteRatio:
        return {hermite_ratio_derivs(x), 0.0};
      case Family::SinhFamily:
        return sinh_derivs(x);
    }
    return {};
  }

 private:
  GeneratorFunction(Family f, double beta) : family_(f), beta_(beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw InputError("generator: scale beta must be a finite positive number");
    }
  }

  // Derivatives of P_n via P_n^{(j)} = 2n 2(n-1) ... P_{n-j}.
  static PhiDerivs poly_derivs(const std::vector<double>& p, int n) {
    auto at = [&](int j) { return j >= 0 ? p[static_cast<std::size_t>(j)] : 0.0; };
    const double c1 = 2.0 * n;
    const double c2 = c1 * 2.0 * (n - 1);
    const double c3 = c2 * 2.0 * (n - 2);
    return {at(n), c1 * at(n - 1), c2 * at(n - 2), c3 * at(n - 3)};
  }

  PhiDerivs hermite_odd_derivs(double x) const {
    const int n = 2 * k_ + 1;
    const auto p = pseudo_hermite_values(n, x);
    auto d = poly_derivs(p, n);
    return {beta_ * d.value, beta_ * d.d1, beta_ * d.d2, beta_ * d.d3};
  }

  // Quotient rule via Leibniz on num = q * den.
  PhiDerivs hermite_ratio_derivs(double x) const {
    const int nn = 2 * k_ + 1;
    const int nd = 2 * m_;
    const auto p = pseudo_hermite_values(std::max(nn, nd), x);
    const auto num = poly_derivs(p, nn);
    const auto den = poly_derivs(p, nd);
    const double q0 = num.value / den.value;
    const double q1 = (num.d1 - q0 * den.d1) / den.value;
    const double q2 = (num.d2 - 2.0 * q1 * den.d1 - q0 * den.d2) / den.value;
    const double q3 = (num.d3 - 3.0 * q2 * den.d1 - 3.0 * q1 * den.d2 - q0 * den.d3) / den.value;
    return {beta_ * q0, beta_ * q1, beta_ * q2, beta_ * q3};
  }

  ScaledPhiDerivs sinh_derivs(double x) const {
    const int top = index_;
    const double ax = std::fabs(x);
    // Rescale once the largest exponential would leave the comfortable range.
    const double log_scale = (top * ax > 300.0) ? top * ax : 0.0;
    const double sgn = x < 0.0 ? -1.0 : 1.0;
    PhiDerivs out;
    for (int slot = 0; slot < 3; ++slot) {
      const double c = sinh_coeffs_[static_cast<std::size_t>(slot)];
      if (c == 0.0) continue;
      const double j = 2.0 * slot + 1.0;
      double sh;
      double ch;
      if (log_scale == 0.0) {
        sh = std::sinh(j * ax);
        ch = std::cosh(j * ax);
      } else {
        const double up = std::exp(j * ax - log_scale);
        const double down = std::exp(-j * ax - log_scale);
        sh = 0.5 * (up - down);
        ch = 0.5 * (up + down);
      }
      // sinh is odd, cosh even; odd derivatives of sinh(jx) are cosh.
      out.value += c * sgn * sh;
      out.d1 += c * j * ch;
      out.d2 += c * j * j * sgn * sh;
      out.d3 += c * j * j * j * ch;
    }
    out.value *= beta_;
    out.d1 *= beta_;
    out.d2 *= beta_;
    out.d3 *= beta_;
    return {out, log_scale};
  }

  Family family_;
  double beta_ = 1.0;
  int k_ = 0;
  int m_ = 0;
  int index_ = 0;
  double alpha_ = 0.0;
  std::array<double, 3> sinh_coeffs_{0.0, 0.0, 0.0};
};

namespace detail {

inline bool all_finite(const PhiDerivs& d) {
  return std::isfinite(d.value) && std::isfinite(d.d1) && std::isfinite(d.d2) &&
         std::isfinite(d.d3);
}

}  // namespace detail

/// Largest |x| for which eval_with_derivs stays finite (bisection on finiteness).
inline double overflow_threshold(const GeneratorFunction& g) {
  auto ok = [&](double x) { return detail::all_finite(g.eval_scaled(x).unscaled()); };
  double lo = 1.0;
  if (!ok(lo)) return 0.0;
  double hi = 2.0;
  while (ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

inline PhiDerivs eval_with_derivs(const GeneratorFunction& g, double x) {
  const auto d = g.eval_scaled(x).unscaled();
  if (!detail::all_finite(d)) {
    const double t = overflow_threshold(g);
    throw RangeError(g.name() + ": overflow evaluating phi at x = " + std::to_string(x) +
                         " (finite for |x| <= " + std::to_string(t) + ")",
                     t);
  }
  return d;
}

struct AdmissibilityReport {
  double min_dphi = 0.0;
  double argmin_dphi = 0.0;
  int node_count = 0;
  bool monotone = false;
  bool odd = false;
  bool passes = false;

  std::string reason() const {
    if (passes) return "admissible";
    std::string r;
    if (!(min_dphi > 0.0)) r += "phi' not positive (min " + std::to_string(min_dphi) + " at x=" +
                                std::to_string(argmin_dphi) + "); ";
    if (node_count != 1) r += "phi has " + std::to_string(node_count) + " nodes; ";
    if (!monotone) r += "phi not monotone; ";
    return r;
  }
};

/// Counts strict sign changes of a sampled sequence; exact zeros are skipped.
inline int count_sign_changes(const std::vector<double>& values, double floor = 0.0) {
  int changes = 0;
  int last = 0;
  for (double v : values) {
    if (std::fabs(v) <= floor) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// `eval(x)` must return PhiDerivs (only value and d1 are read). Values may
/// carry any positive common scale.
template <class Eval>
  requires std::invocable<Eval&, double>
AdmissibilityReport check_admissible(Eval&& eval, Interval domain, int samples) {
  if (samples < 3) throw InputError("check_admissible: need at least 3 samples");
  AdmissibilityReport rep;
  std::vector<double> phi(static_cast<std::size_t>(samples));
  rep.min_dphi = std::numeric_limits<double>::infinity();
  rep.monotone = true;
  const double step = (domain.hi - domain.lo) / (samples - 1);
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double x = domain.lo + i * step;
    const PhiDerivs d = eval(x);
    phi[static_cast<std::size_t>(i)] = d.value;
    if (d.d1 < rep.min_dphi) {
      rep.min_dphi = d.d1;
      rep.argmin_dphi = x;
    }
    if (!(d.value > prev)) rep.monotone = false;
    prev = d.value;
  }
  rep.node_count = count_sign_changes(phi);
  rep.passes = rep.min_dphi > 0.0 && rep.node_count == 1 && rep.monotone;
  return rep;
}

/// Catalog overload; also records parity at one probe pair.
inline AdmissibilityReport check_admissible(const GeneratorFunction& g,
                                            Interval domain = kDefaultDomain,
                                            int samples = 2001) {
  auto rep = check_admissible(
      [&](double x) {
        const auto s = g.eval_scaled(x);
        if (s.log_scale == 0.0) return eval_with_derivs(g, x);
        const auto u = s.unscaled();
        return detail::all_finite(u) ? u : s.scaled;
      },
      domain, samples);
  const double probe = std::min(std::fabs(domain.lo), std::fabs(domain.hi));
  const auto a = g.eval_scaled(0.5 * probe);
  const auto b = g.eval_scaled(-0.5 * probe);
  rep.odd = std::fabs(a.scaled.value + b.scaled.value) <=
            1e-12 * std::max(1.0, std::fabs(a.scaled.value));
  return rep;
}

}  // namespace susyqes

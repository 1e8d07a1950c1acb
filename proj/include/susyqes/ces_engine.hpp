#pragma once

// Conditionally exactly solvable potentials. Given an exactly solvable base
// superpotential W1, phi must solve
//
//   phi''/2 + W1 phi' = eps phi,
//
// which after phi = f exp(-int W1) and the duality xi = i x becomes an ordinary
// Schroedinger problem for the dual superpotential W1~(xi) = i W1(-i xi). Odd
// dual solutions give phi; the new potential is
//
//   V_-(x) = (W1^2 + W1')/2 + (phi''/phi')^2 + 2 W1 phi''/phi' - eps,
//
// the lower SUSY partner of V_+ = V_-^{(1)} + eps.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "susyqes/errors.hpp"
#include "susyqes/generator.hpp"
#include "susyqes/pseudo_hermite.hpp"
#include "susyqes/susy_core.hpp"

namespace susyqes {

enum class BaseKind { Harmonic, RosenMorse };

/// One shape-invariance relation W^2(x,a) + W'(x,a) = W^2(x,a1) - W'(x,a1) + 2R.
struct ShapeRelation {
  double param = 0.0;
  double param1 = 0.0;
  double remainder = 0.0;
};

/// W(x; a) with its x-derivative, for shape-invariance checks.
using ParametricSuperpotential = std::function<SuperpotentialValue(double x, double param)>;

inline ParametricSuperpotential linear_family() {
  return [](double x, double w) { return SuperpotentialValue{w * x, w}; };
}

inline ParametricSuperpotential tanh_family() {
  return [](double x, double a) {
    const double t = std::tanh(x);
    return SuperpotentialValue{a * t, a * (1.0 - t * t)};
  };
}

inline ParametricSuperpotential tan_family() {
  return [](double xi, double a) {
    const double t = std::tan(xi);
    return SuperpotentialValue{a * t, a * (1.0 + t * t)};
  };
}

class SolvableBase {
 public:
  static SolvableBase harmonic() { return SolvableBase(BaseKind::Harmonic, 1.0); }

  static SolvableBase rosen_morse(double alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) {
      throw InputError("rosen-morse: alpha must be a finite number > 1 (got " +
                       std::to_string(alpha) + ")");
    }
    return SolvableBase(BaseKind::RosenMorse, alpha);
  }

  BaseKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  std::string name() const {
    return kind_ == BaseKind::Harmonic ? "harmonic" : "rosen-morse(alpha=" + std::to_string(alpha_) + ")";
  }

  SuperpotentialValue w1(double x) const {
    return kind_ == BaseKind::Harmonic ? linear_family()(x, 1.0) : tanh_family()(x, alpha_);
  }

  Superpotential superpotential() const {
    const SolvableBase self = *this;
    return Superpotential([self](double x) { return self.w1(x); }, "W1[" + name() + "]");
  }

  /// W1 continued to complex argument.
  std::complex<double> w1_complex(std::complex<double> z) const {
    return kind_ == BaseKind::Harmonic ? z : alpha_ * std::tanh(z);
  }

  /// Closed-form dual superpotential and derivative. Throws DomainError at the
  /// poles xi_n = pi/2 + pi n of alpha tan(xi).
  SuperpotentialValue dual(double xi) const {
    if (kind_ == BaseKind::Harmonic) return {xi, 1.0};
    const double n = std::round((xi - 0.5 * std::numbers::pi) / std::numbers::pi);
    const double pole = 0.5 * std::numbers::pi + n * std::numbers::pi;
    if (std::fabs(xi - pole) < 1e-10 * std::max(1.0, std::fabs(pole))) {
      throw DomainError("dual superpotential alpha*tan(xi) is singular at xi = " + std::to_string(pole));
    }
    return tan_family()(xi, alpha_);
  }

  /// Dual by the transform rule i W1(-i xi), evaluated in complex arithmetic.
  std::complex<double> dual_by_rule(double xi) const {
    const std::complex<double> i(0.0, 1.0);
    return i * w1_complex(-i * xi);
  }

  /// Rule applied twice: i W1~(-i x), with W1~ itself from the rule.
  std::complex<double> double_dual(double x) const {
    const std::complex<double> i(0.0, 1.0);
    auto dual_c = [&](std::complex<double> xi) { return i * w1_complex(-i * xi); };
    return i * dual_c(-i * x);
  }

  ParametricSuperpotential family() const {
    return kind_ == BaseKind::Harmonic ? linear_family() : tanh_family();
  }
  ParametricSuperpotential dual_family() const {
    return kind_ == BaseKind::Harmonic ? linear_family() : tan_family();
  }

  /// alpha -> alpha - 1 for tanh; omega -> omega for the oscillator.
  ShapeRelation shape() const {
    if (kind_ == BaseKind::Harmonic) return {1.0, 1.0, 1.0};
    const double a1 = alpha_ - 1.0;
    return {alpha_, a1, 0.5 * (alpha_ * alpha_ - a1 * a1)};
  }

  /// Same remainder with the roles of the parameters exchanged.
  ShapeRelation dual_shape() const {
    const auto s = shape();
    return {s.param1, s.param, s.remainder};
  }

 private:
  SolvableBase(BaseKind k, double alpha) : kind_(k), alpha_(alpha) {}

  BaseKind kind_;
  double alpha_;
};

inline SuperpotentialValue dual_superpotential(const SolvableBase& base, double xi) {
  return base.dual(xi);
}

/// max over samples of |W^2(a) + W'(a) - W^2(a1) + W'(a1) - 2R|.
inline double shape_invariance_residual(const ParametricSuperpotential& w, double param, double param1,
                                        double remainder, std::span<const double> samples) {
  double worst = 0.0;
  for (double x : samples) {
    const auto a = w(x, param);
    const auto b = w(x, param1);
    worst = std::max(worst, std::fabs(a.w * a.w + a.dw - b.w * b.w + b.dw - 2.0 * remainder));
  }
  return worst;
}

inline void require_odd_index(const SolvableBase& base, int k) {
  if (base.kind() == BaseKind::Harmonic) {
    if (k < 0) throw InputError("harmonic base: k must be >= 0");
    return;
  }
  if (k % 2 == 0) {
    throw InputError("rosen-morse base: index " + std::to_string(k) +
                     " is even; only odd dual solutions give an admissible phi");
  }
  if (k != 1 && k != 3 && k != 5) {
    throw InputError("rosen-morse base: index must be 1, 3 or 5 (got " + std::to_string(k) + ")");
  }
}

/// phi_k = f~(ix) / f~_0(ix) from the odd dual solutions.
inline GeneratorFunction phi_from_dual(const SolvableBase& base, int k) {
  require_odd_index(base, k);
  if (base.kind() == BaseKind::Harmonic) return GeneratorFunction::hermite_odd(k);
  return GeneratorFunction::sinh_family(k, base.alpha());
}

inline double epsilon_k(const SolvableBase& base, int k) {
  require_odd_index(base, k);
  if (base.kind() == BaseKind::Harmonic) return 2.0 * k + 1.0;
  const double a = base.alpha();
  return 0.5 * ((a + k) * (a + k) - a * a);
}

/// V_- assembled from W1 and phi''/phi'.
inline double ces_potential_from_base(const Superpotential& w1, const GeneratorFunction& phi, double eps,
                                      double x) {
  const auto b = w1.eval(x);
  const double r = phi_ratios(phi, x).d2_over_d1;
  return 0.5 * (b.w * b.w + b.dw) + r * r + 2.0 * b.w * r - eps;
}

/// Rosen-Morse family in closed form:
///   V_-(x,k) = tanh^2 x (a(a-1)/2 + Phi_k (Phi_k + 2a)) - eps_k + a/2.
inline double rosen_morse_ces_closed(double alpha, int k, double x) {
  const double a = alpha;
  double big_phi = 1.0;
  if (k == 3) {
    const double c2 = std::cosh(2.0 * x);
    big_phi = (3.0 * (2.0 + a) * c2 + a + 3.0) / ((2.0 + a) * c2 - a - 1.0);
  } else if (k == 5) {
    // Divide through by cosh 4x so large |x| stays finite.
    const double c2 = std::cosh(2.0 * x);
    const double c4 = std::cosh(4.0 * x);
    const double num = (3.0 + a) * (5.0 * (4.0 + a) + 4.0 * (5.0 - a) * c2 / c4) + (a * (5.0 - a) + 30.0) / c4;
    const double den = (3.0 + a) * ((4.0 + a) - 4.0 * (1.0 + a) * c2 / c4) + 3.0 * (1.0 + a) * (2.0 + a) / c4;
    big_phi = num / den;
  } else if (k != 1) {
    throw InputError("rosen-morse closed form: index must be 1, 3 or 5");
  }
  const double t = std::tanh(x);
  const double eps = 0.5 * ((a + k) * (a + k) - a * a);
  return t * t * (0.5 * a * (a - 1.0) + big_phi * (big_phi + 2.0 * a)) - eps + 0.5 * a;
}

/// The four-term form of V_-(x,3).
inline double rosen_morse_ces_k3_explicit(double alpha, double x) {
  const double a = alpha;
  const double d = (2.0 + a) * std::cosh(2.0 * x) - 1.0 - a;
  const double ch = std::cosh(x);
  return -4.0 * (3.0 + 2.0 * a) / (d * d) + 4.0 * (1.0 + a) / d - (1.0 + a) * (2.0 + a) / (2.0 * ch * ch) +
         0.5 * (3.0 + a) * (3.0 + a);
}

/// Rosen-Morse potential (W^2 - W')/2 for W = a tanh x.
inline double rosen_morse_potential(double a, double x) {
  const double t = std::tanh(x);
  return 0.5 * (a * a * t * t - a * (1.0 - t * t));
}

/// x + 2k (gamma + 1) P_{2k-1}/P_{2k} at gamma = 1: the Hermite-odd superpotential
/// at its exactly solvable point.
inline Superpotential hermite_odd_solvable_superpotential(int k) {
  const auto g = GeneratorFunction::hermite_odd(k);
  return superpotentials_from_phi(g, 2.0 * k + 1.0).w;
}

enum class CesKind { HermiteOdd, HermiteRatio, RosenMorse };

struct CesModel {
  CesKind kind = CesKind::HermiteOdd;
  std::optional<SolvableBase> base;
  int k = 0;
  int m = 0;
  double epsilon = 0.0;
  GeneratorFunction phi = GeneratorFunction::monomial();
  Superpotential w1;  // exactly solvable partner superpotential
  AdmissibilityReport admissibility;

  double potential(double x) const { return ces_potential_from_base(w1, phi, epsilon, x); }

  std::string name() const {
    switch (kind) {
      case CesKind::HermiteOdd:
        return "hermite-odd CES (k=" + std::to_string(k) + ")";
      case CesKind::HermiteRatio:
        return "hermite-ratio CES (k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")";
      case CesKind::RosenMorse:
        return "rosen-morse CES (alpha=" + std::to_string(base->alpha()) + ", k=" + std::to_string(k) + ")";
    }
    return "unknown";
  }
};

/// Builds V_-(x,k) on an exactly solvable base. Throws ConstructionError when
/// phi_k is not admissible on `domain`.
inline CesModel make_ces_model(const SolvableBase& base, int k, Interval domain = kDefaultDomain) {
  CesModel model;
  model.kind = base.kind() == BaseKind::Harmonic ? CesKind::HermiteOdd : CesKind::RosenMorse;
  model.base = base;
  model.k = k;
  model.epsilon = epsilon_k(base, k);
  model.phi = phi_from_dual(base, k);
  model.w1 = base.superpotential();
  model.admissibility = check_admissible(model.phi, domain);
  if (!model.admissibility.passes) {
    throw ConstructionError(model.name() + ": phi is not admissible: " + model.admissibility.reason());
  }
  return model;
}

/// phi = P_{2k+1}/P_{2m} at eps = 2k - 2m + 1; W1 collapses to the Hermite-odd
/// superpotential with index m at gamma = 1.
inline CesModel make_hermite_ratio_ces(int k, int m, Interval domain = kDefaultDomain) {
  CesModel model;
  model.kind = CesKind::HermiteRatio;
  model.k = k;
  model.m = m;
  model.phi = GeneratorFunction::hermite_ratio(k, m);
  model.epsilon = 2.0 * k - 2.0 * m + 1.0;
  model.w1 = hermite_odd_solvable_superpotential(m);
  model.admissibility = check_admissible(model.phi, domain);
  if (!model.admissibility.passes) {
    throw ConstructionError(model.name() + ": phi is not admissible: " + model.admissibility.reason());
  }
  return model;
}

/// max relative residual |phi''/2 + W1 phi' - eps phi| / (1 + |eps phi|).
inline double phi_ode_residual(const Superpotential& w1, const GeneratorFunction& phi, double eps,
                               std::span<const double> samples) {
  double worst = 0.0;
  for (double x : samples) {
    const auto s = phi.eval_scaled(x);
    const double w = w1(x);
    const double r = 0.5 * s.scaled.d2 + w * s.scaled.d1 - eps * s.scaled.value;
    worst = std::max(worst, std::fabs(r) / (std::exp(-s.log_scale) + std::fabs(eps * s.scaled.value)));
  }
  return worst;
}

inline double phi_ode_residual(const SolvableBase& base, int k, std::span<const double> samples) {
  return phi_ode_residual(base.superpotential(), phi_from_dual(base, k), epsilon_k(base, k), samples);
}

inline double phi_ode_residual(const CesModel& model, std::span<const double> samples) {
  return phi_ode_residual(model.w1, model.phi, model.epsilon, samples);
}

struct ExactSpectrum {
  std::vector<double> energies;
  bool truncated = false;          // fewer bound levels than requested
  bool derived_by_chain = false;   // levels beyond E_1 from the SUSY chain
  std::optional<double> continuum; // threshold of the continuous spectrum
};

/// Levels E_0 .. E_{n_max} of the CES potential (fewer when the bound spectrum
/// ends first).
inline ExactSpectrum exact_spectrum(const CesModel& model, int n_max) {
  if (n_max < 0) throw InputError("exact_spectrum: n_max must be >= 0");
  ExactSpectrum out;
  out.energies.push_back(0.0);
  switch (model.kind) {
    case CesKind::HermiteOdd:
      for (int n = 1; n <= n_max; ++n) out.energies.push_back(n + 2.0 * model.k);
      break;
    case CesKind::HermiteRatio:
      if (n_max >= 1) out.energies.push_back(2.0 * model.k - 2.0 * model.m + 1.0);
      for (int n = 2; n <= n_max; ++n) out.energies.push_back(n + 2.0 * model.k);
      break;
    case CesKind::RosenMorse: {
      const double a = model.base->alpha();
      out.continuum = model.epsilon + 0.5 * a * a;
      if (n_max >= 1) out.energies.push_back(model.epsilon);
      // Bound levels of the base (a^2 - (a - n)^2)/2 need a - n > 0.
      for (int n = 1; n + 1 <= n_max; ++n) {
        if (!(a - n > 0.0)) {
          out.truncated = true;
          break;
        }
        out.energies.push_back(model.epsilon + 0.5 * (a * a - (a - n) * (a - n)));
        out.derived_by_chain = true;
      }
      break;
    }
  }
  return out;
}

}  // namespace susyqes

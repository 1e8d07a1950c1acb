#pragma once

// One SUSY step built from a generator phi and a level spacing eps:
//
//   W   = (eps phi + phi''/2) / phi'      (ground state of H_- at E = 0)
//   W1  = (eps phi - phi''/2) / phi'      (H_+ = H_-^{(1)} + eps)
//   V_pm = (W^2 +- W') / 2
//   psi0 = (phi')^{-1/2} exp(-eps I(x)),  I(x) = int_0^x phi/phi'
//   psi1 = phi psi0,                       E_1 = eps

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "susyqes/errors.hpp"
#include "susyqes/generator.hpp"
#include "susyqes/grid.hpp"
#include "susyqes/quadrature.hpp"

namespace susyqes {

struct SuperpotentialValue {
  double w = 0.0;
  double dw = 0.0;
};

/// W(x) together with its exact derivative.
class Superpotential {
 public:
  using Fn = std::function<SuperpotentialValue(double)>;

  Superpotential() = default;
  explicit Superpotential(Fn fn, std::string label = {})
      : fn_(std::move(fn)), label_(std::move(label)) {}

  SuperpotentialValue eval(double x) const { return fn_(x); }
  double operator()(double x) const { return fn_(x).w; }
  double derivative(double x) const { return fn_(x).dw; }
  const std::string& label() const noexcept { return label_; }

  /// W(x) + c. Used to inject known defects into validators.
  Superpotential plus_constant(double c) const {
    auto base = fn_;
    return Superpotential(
        [base, c](double x) {
          auto v = base(x);
          return SuperpotentialValue{v.w + c, v.dw};
        },
        label_ + "+const");
  }

 private:
  Fn fn_;
  std::string label_;
};

inline Superpotential linear_superpotential(double slope) {
  return Superpotential([slope](double x) { return SuperpotentialValue{slope * x, slope}; },
                        "linear");
}

struct SuperpotentialPair {
  Superpotential w;
  Superpotential w1;
  double epsilon = 0.0;
};

struct PhiRatios {
  double phi_over_d1;
  double d2_over_d1;
  double d3_over_d1;
};

inline PhiRatios phi_ratios(const GeneratorFunction& g, double x) {
  const auto s = g.eval_scaled(x).scaled;
  return {s.value / s.d1, s.d2 / s.d1, s.d3 / s.d1};
}

inline void require_positive_gap(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InputError("level spacing epsilon must be a finite positive number (got " +
                     std::to_string(eps) + ")");
  }
}

inline SuperpotentialPair superpotentials_from_phi(const GeneratorFunction& g, double eps,
                                                   Interval domain = kDefaultDomain) {
  require_positive_gap(eps);
  const auto rep = check_admissible(g, domain);
  if (!rep.passes) {
    throw ConstructionError("generator " + g.name() + " is not admissible: " + rep.reason());
  }
  Superpotential w(
      [g, eps](double x) {
        const auto r = phi_ratios(g, x);
        const double w = eps * r.phi_over_d1 + 0.5 * r.d2_over_d1;
        return SuperpotentialValue{w, eps + 0.5 * r.d3_over_d1 - w * r.d2_over_d1};
      },
      "W[" + g.name() + "]");
  Superpotential w1(
      [g, eps](double x) {
        const auto r = phi_ratios(g, x);
        const double w = eps * r.phi_over_d1 - 0.5 * r.d2_over_d1;
        return SuperpotentialValue{w, eps - 0.5 * r.d3_over_d1 - w * r.d2_over_d1};
      },
      "W1[" + g.name() + "]");
  return {std::move(w), std::move(w1), eps};
}

class PartnerPotentials {
 public:
  explicit PartnerPotentials(Superpotential w) : w_(std::move(w)) {}
  PartnerPotentials(Superpotential w, Superpotential w1, double eps)
      : w_(std::move(w)), w1_(std::move(w1)), shift_(eps) {}

  double minus(double x) const {
    const auto v = w_.eval(x);
    return 0.5 * (v.w * v.w - v.dw);
  }
  double plus(double x) const {
    const auto v = w_.eval(x);
    return 0.5 * (v.w * v.w + v.dw);
  }

  /// V_+(x) - (W1^2 - W1')/2; equals eps when built from a pair.
  double shift_at(double x) const {
    if (!shift_) throw InputError("partner potentials were not built from a superpotential pair");
    const auto v = w1_.eval(x);
    return plus(x) - 0.5 * (v.w * v.w - v.dw);
  }
  std::optional<double> shift() const { return shift_; }
  const Superpotential& superpotential() const noexcept { return w_; }

 private:
  Superpotential w_;
  Superpotential w1_;
  std::optional<double> shift_;
};

inline PartnerPotentials partner_potentials(const Superpotential& w) { return PartnerPotentials(w); }

inline PartnerPotentials partner_potentials(const SuperpotentialPair& p) {
  return PartnerPotentials(p.w, p.w1, p.epsilon);
}

enum class ExponentMethod { Auto, Quadrature };

/// The two closed-form eigenstates of H_-: E_0 = 0 and E_1 = eps. Both are
/// unnormalized with psi0(0) = 1.
class EigenPair {
 public:
  EigenPair(GeneratorFunction g, double eps, ExponentMethod method = ExponentMethod::Auto,
            double quad_tol = 1e-10)
      : g_(std::move(g)), eps_(eps), quad_tol_(quad_tol) {
    require_positive_gap(eps);
    closed_ = method == ExponentMethod::Auto &&
              (g_.family() == Family::Monomial || g_.family() == Family::HermiteOdd ||
               (g_.family() == Family::SinhFamily && g_.index() == 1));
    const auto s0 = g_.eval_scaled(0.0);
    log_d1_at_0_ = std::log(s0.scaled.d1) + s0.log_scale;
    if (g_.family() == Family::HermiteOdd) p2k_at_0_ = pseudo_hermite_values(2 * g_.k(), 0.0).back();
  }

  double epsilon() const noexcept { return eps_; }
  double energy(int level) const { return level == 0 ? 0.0 : eps_; }
  bool closed_form() const noexcept { return closed_; }
  const GeneratorFunction& generator() const noexcept { return g_; }

  /// I(x) = int_0^x phi(t)/phi'(t) dt.
  double exponent_integral(double x) const {
    if (closed_) {
      switch (g_.family()) {
        case Family::Monomial:
          return 0.5 * x * x;
        case Family::HermiteOdd: {
          const double n = 2.0 * g_.k() + 1.0;
          return (0.5 * x * x + 0.5 * log_p2k_ratio(x)) / n;
        }
        case Family::SinhFamily:
          return log_cosh(x);
        default:
          break;
      }
    }
    return quad_exponent(0.0, x);
  }

  double log_psi0(double x) const {
    if (closed_ && g_.family() == Family::HermiteOdd) {
      // (P_2k)^{-(1+gamma)/2} exp(-gamma x^2 / 2)
      const double gamma = eps_ / (2.0 * g_.k() + 1.0);
      return -0.5 * (1.0 + gamma) * log_p2k_ratio(x) - 0.5 * gamma * x * x;
    }
    return log_psi0_from_integral(x, exponent_integral(x));
  }

  double psi0(double x) const { return std::exp(log_psi0(x)); }

  double psi1(double x) const { return combine_phi(x, log_psi0(x)); }

  /// Ground state of H_+ = H_-^{(1)} + eps, proportional to exp(-int W1) = phi' psi0.
  double ground_plus(double x) const {
    const auto s = g_.eval_scaled(x);
    return std::exp(std::log(s.scaled.d1) + s.log_scale - log_d1_at_0_ + log_psi0(x));
  }

  /// psi0 (level 0) or psi1 (level 1) on ascending abscissae. The quadrature
  /// path integrates cell by cell outward from the node nearest 0.
  std::vector<double> sample(std::span<const double> xs, int level) const {
    std::vector<double> out(xs.size());
    if (xs.empty()) return out;
    std::vector<double> logs(xs.size());
    if (closed_) {
      for (std::size_t i = 0; i < xs.size(); ++i) logs[i] = log_psi0(xs[i]);
    } else {
      std::size_t c = 0;
      for (std::size_t i = 1; i < xs.size(); ++i) {
        if (std::fabs(xs[i]) < std::fabs(xs[c])) c = i;
      }
      std::vector<double> integral(xs.size());
      integral[c] = quad_exponent(0.0, xs[c]);
      for (std::size_t i = c + 1; i < xs.size(); ++i) {
        integral[i] = integral[i - 1] + quad_exponent(xs[i - 1], xs[i], 1e-13);
      }
      for (std::size_t i = c; i-- > 0;) {
        integral[i] = integral[i + 1] + quad_exponent(xs[i + 1], xs[i], 1e-13);
      }
      for (std::size_t i = 0; i < xs.size(); ++i) logs[i] = log_psi0_from_integral(xs[i], integral[i]);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out[i] = level == 0 ? std::exp(logs[i]) : combine_phi(xs[i], logs[i]);
    }
    return out;
  }

  std::vector<double> sample(const Grid& grid, int level) const {
    const auto xs = grid.nodes();
    return sample(std::span<const double>(xs), level);
  }

  /// int_{-L}^{L} psi^2 by composite Gauss-Legendre.
  double norm_squared(int level, double half_width, int panels = 96, int order = 16) const {
    const auto rule = quad::gauss_legendre(order);
    return quad::composite_gauss_legendre(
        [&](double x) {
          const double v = level == 0 ? psi0(x) : psi1(x);
          return v * v;
        },
        -half_width, half_width, panels, rule);
  }

  struct NormConvergence {
    double norm_at_l = 0.0;
    double norm_at_2l = 0.0;
    double relative_change = 0.0;
    bool converged = false;
  };

  /// Compares the norm over [-L, L] with the norm over [-2L, 2L].
  NormConvergence norm_convergence(int level, double half_width, double tol = 1e-8) const {
    NormConvergence nc;
    nc.norm_at_l = std::sqrt(norm_squared(level, half_width));
    nc.norm_at_2l = std::sqrt(norm_squared(level, 2.0 * half_width, 192));
    nc.relative_change = std::fabs(nc.norm_at_2l - nc.norm_at_l) / nc.norm_at_2l;
    nc.converged = std::isfinite(nc.relative_change) && nc.relative_change < tol;
    return nc;
  }

 private:
  static double log_cosh(double x) {
    const double ax = std::fabs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
  }

  double log_p2k_ratio(double x) const {
    return std::log(pseudo_hermite_values(2 * g_.k(), x).back() / p2k_at_0_);
  }

  double quad_exponent(double a, double b, double tol = -1.0) const {
    return quad::adaptive_simpson([this](double t) { return phi_ratios(g_, t).phi_over_d1; }, a, b,
                                  tol > 0.0 ? tol : quad_tol_);
  }

  double log_psi0_from_integral(double x, double integral) const {
    const auto s = g_.eval_scaled(x);
    const double log_d1 = std::log(s.scaled.d1) + s.log_scale;
    return -0.5 * (log_d1 - log_d1_at_0_) - eps_ * integral;
  }

  double combine_phi(double x, double log_psi) const {
    const auto s = g_.eval_scaled(x);
    const double direct = s.scaled.value * std::exp(s.log_scale) * std::exp(log_psi);
    if (std::isfinite(direct) && (direct != 0.0 || s.scaled.value == 0.0)) return direct;
    if (s.scaled.value == 0.0) return 0.0;
    const double mag = std::exp(std::log(std::fabs(s.scaled.value)) + s.log_scale + log_psi);
    return s.scaled.value > 0.0 ? mag : -mag;
  }

  GeneratorFunction g_;
  double eps_;
  double quad_tol_;
  bool closed_ = false;
  double log_d1_at_0_ = 0.0;
  double p2k_at_0_ = 1.0;
};

inline EigenPair eigenpair_from_phi(const GeneratorFunction& g, double eps,
                                    ExponentMethod method = ExponentMethod::Auto) {
  require_positive_gap(eps);
  const auto rep = check_admissible(g);
  if (!rep.passes) {
    throw ConstructionError("generator " + g.name() + " is not admissible: " + rep.reason());
  }
  return EigenPair(g, eps, method);
}

/// max over samples of |W^2 + W' - W1^2 + W1' - 2 eps|.
inline double riccati_residual(const Superpotential& w, const Superpotential& w1, double eps,
                               std::span<const double> samples) {
  double worst = 0.0;
  for (double x : samples) {
    const auto a = w.eval(x);
    const auto b = w1.eval(x);
    const double r = std::fabs(a.w * a.w + a.dw - b.w * b.w + b.dw - 2.0 * eps);
    worst = std::max(worst, std::isfinite(r) ? r : std::numeric_limits<double>::infinity());
  }
  return worst;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> xs(n);
  if (n == 1) {
    xs[0] = a;
    return xs;
  }
  for (std::size_t i = 0; i < n; ++i) xs[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return xs;
}

/// W_+ = exp(int_0^x W_-) [2 eps int_0^x exp(-int_0^t W_-) dt + lambda] by
/// nested adaptive quadrature.
inline std::function<double(double)> wplus_from_wminus(std::function<double(double)> wminus,
                                                       double eps, double lambda,
                                                       double tol = 1e-11) {
  return [wminus = std::move(wminus), eps, lambda, tol](double x) {
    auto inner = [&](double t) { return quad::adaptive_simpson(wminus, 0.0, t, 1e-2 * tol); };
    const double outer = quad::adaptive_simpson([&](double t) { return std::exp(-inner(t)); }, 0.0,
                                                x, tol);
    return std::exp(inner(x)) * (2.0 * eps * outer + lambda);
  };
}

struct SusyCheck {
  int sign_minus = 0;
  int sign_plus = 0;
  bool pass = false;
};

inline SusyCheck unbroken_susy_check(const Superpotential& w, double probe) {
  if (!(probe > 0.0)) throw InputError("unbroken_susy_check: probe must be positive");
  auto sgn = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
  SusyCheck c;
  c.sign_minus = sgn(w(-probe));
  c.sign_plus = sgn(w(probe));
  c.pass = c.sign_minus == -1 && c.sign_plus == 1;
  return c;
}

enum class BDirection { Plus, Minus };

/// Fourth-order central first derivative; third-order one-sided rows at the ends.
inline std::vector<double> grid_derivative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw InputError("grid derivative: need at least 5 points");
  std::vector<double> d(n);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
  }
  d[0] = (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h);
  d[1] = (-2.0 * f[0] - 3.0 * f[1] + 6.0 * f[2] - f[3]) / (6.0 * h);
  d[n - 1] = (11.0 * f[n - 1] - 18.0 * f[n - 2] + 9.0 * f[n - 3] - 2.0 * f[n - 4]) / (6.0 * h);
  d[n - 2] = (2.0 * f[n - 1] + 3.0 * f[n - 2] - 6.0 * f[n - 3] + f[n - 4]) / (6.0 * h);
  return d;
}

/// B^{+-} psi = (-+ psi' + W psi) / sqrt(2) on a uniform grid.
inline std::vector<double> apply_B(BDirection dir, const Superpotential& w, std::span<const double> psi,
                                   const Grid& grid) {
  if (psi.size() != grid.size()) throw InputError("apply_B: sample count does not match grid");
  const auto d = grid_derivative(psi, grid.spacing());
  const auto xs = grid.nodes();
  const double sign = dir == BDirection::Plus ? -1.0 : 1.0;
  std::vector<double> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    out[i] = (sign * d[i] + w(xs[i]) * psi[i]) / std::numbers::sqrt2;
  }
  return out;
}

/// Strict sign changes, ignoring samples below 1e-12 of the peak magnitude.
inline int node_count(std::span<const double> psi) {
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::fabs(v));
  return count_sign_changes(std::vector<double>(psi.begin(), psi.end()), 1e-12 * peak);
}

/// Cosine similarity of two grid functions (uniform weights cancel).
inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

}  // namespace susyqes

#pragma once

// Real-valued representation of Hermite polynomials at imaginary argument:
//
//   P_n(x) = i^{-n} H_n(ix),
//   P_{n+1}(x) = 2x P_n(x) + 2n P_{n-1}(x),   P_0 = 1, P_1 = 2x,
//   P_n'(x) = 2n P_{n-1}(x).
//
// All coefficients are non-negative, so P_{2k} > 0 on the real line and ratios
// such as P_{2k-1}/P_{2k} never have poles.

#include <cmath>
#include <cstddef>
#include <vector>

#include "susyqes/errors.hpp"

namespace susyqes {

inline constexpr int kMaxPseudoHermiteDegree = 64;

class PseudoHermite {
 public:
  explicit PseudoHermite(int degree, int max_degree = kMaxPseudoHermiteDegree)
      : degree_(degree) {
    if (degree < 0) throw InputError("pseudo_hermite: negative degree");
    if (degree > max_degree) {
      throw CapacityError("pseudo_hermite: degree " + std::to_string(degree) +
                          " exceeds maximum " + std::to_string(max_degree));
    }
    std::vector<double> prev{1.0};
    std::vector<double> cur{1.0};
    if (degree >= 1) cur = {0.0, 2.0};
    for (int n = 1; n < degree; ++n) {
      std::vector<double> next(static_cast<std::size_t>(n) + 2, 0.0);
      for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += 2.0 * cur[j];
      for (std::size_t j = 0; j < prev.size(); ++j) next[j] += 2.0 * n * prev[j];
      prev = std::move(cur);
      cur = std::move(next);
    }
    coeffs_ = std::move(cur);
  }

  int degree() const noexcept { return degree_; }

  /// Monomial coefficients, lowest power first.
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

 private:
  int degree_;
  std::vector<double> coeffs_;
};

inline PseudoHermite pseudo_hermite(int n, int max_degree = kMaxPseudoHermiteDegree) {
  return PseudoHermite(n, max_degree);
}

/// Values P_0(x) .. P_n(x) by the three-term recurrence. Evaluated at |x| and
/// reflected by parity, so every step adds non-negative terms.
inline std::vector<double> pseudo_hermite_values(int n, double x) {
  if (n < 0) throw InputError("pseudo_hermite_values: negative degree");
  if (n > kMaxPseudoHermiteDegree) {
    throw CapacityError("pseudo_hermite_values: degree " + std::to_string(n) +
                        " exceeds maximum " + std::to_string(kMaxPseudoHermiteDegree));
  }
  const double ax = std::fabs(x);
  std::vector<double> p(static_cast<std::size_t>(n) + 1);
  p[0] = 1.0;
  if (n >= 1) p[1] = 2.0 * ax;
  for (int j = 1; j < n; ++j) p[j + 1] = 2.0 * ax * p[j] + 2.0 * j * p[j - 1];
  if (x < 0.0) {
    for (int j = 1; j <= n; j += 2) p[j] = -p[j];
  }
  return p;
}

}  // namespace susyqes

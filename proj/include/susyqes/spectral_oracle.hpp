#pragma once

// Finite-difference eigensolver for H = -1/2 d^2/dx^2 + V(x) on [-L, L] with
// Dirichlet ends. The three-point stencil gives a symmetric tridiagonal matrix
// on the N - 2 interior nodes; the lowest eigenvalues are bracketed by Sturm
// bisection and the eigenvectors come from inverse iteration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "susyqes/errors.hpp"
#include "susyqes/grid.hpp"

namespace susyqes {

struct TridiagonalOperator {
  std::vector<double> diagonal;  // interior nodes 1 .. N-2
  double off_diagonal = 0.0;
  double spacing = 0.0;

  std::size_t size() const noexcept { return diagonal.size(); }
};

template <class V>
TridiagonalOperator discretize(V&& potential, const Grid& grid) {
  const double h = grid.spacing();
  TridiagonalOperator op;
  op.spacing = h;
  op.off_diagonal = -0.5 / (h * h);
  op.diagonal.resize(grid.size() - 2);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double x = grid.x(i);
    const double v = potential(x);
    if (!std::isfinite(v)) {
      throw InputError("discretize: potential is not finite at node " + std::to_string(i) +
                       " (x = " + std::to_string(x) + ")");
    }
    op.diagonal[i - 1] = 1.0 / (h * h) + v;
  }
  return op;
}

/// Number of eigenvalues strictly below lambda (negative pivots of T - lambda I).
inline std::size_t sturm_count(const TridiagonalOperator& op, double lambda) {
  const double b2 = op.off_diagonal * op.off_diagonal;
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, b2);
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < op.size(); ++i) {
    q = op.diagonal[i] - lambda - (i == 0 ? 0.0 : b2 / q);
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

inline std::pair<double, double> gershgorin_bounds(const TridiagonalOperator& op) {
  const double r = 2.0 * std::fabs(op.off_diagonal);
  const auto [lo, hi] = std::minmax_element(op.diagonal.begin(), op.diagonal.end());
  return {*lo - r, *hi + r};
}

/// Bisection for the eigenvalue with zero-based `index` to bracket width `tol`.
inline double bisect_eigenvalue(const TridiagonalOperator& op, std::size_t index, double tol) {
  auto [lo, hi] = gershgorin_bounds(op);
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(op, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct SpectralResult {
  std::vector<double> eigenvalues;                // reported (extrapolated when refined)
  std::vector<double> raw_eigenvalues;            // spacing h
  std::vector<std::vector<double>> eigenvectors;  // length N, zero at both ends
  std::vector<double> refinement_shift;           // E(h/2) - E(h), empty if not refined
  std::vector<int> sweeps;
  double spacing = 0.0;
  bool extrapolated = false;
};

namespace detail {

// Solves (T - shift I) y = rhs with partial pivoting.
inline std::vector<double> solve_shifted(const TridiagonalOperator& op, double shift,
                                         std::span<const double> rhs) {
  const std::size_t n = op.size();
  const double b = op.off_diagonal;
  const double tiny = std::numeric_limits<double>::epsilon() * (std::fabs(op.diagonal[0]) + 2.0 * std::fabs(b));
  // Row i after elimination: u0[i] y_i + u1[i] y_{i+1} + u2[i] y_{i+2} = r[i].
  std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0), r(rhs.begin(), rhs.end());
  double cur_diag = op.diagonal[0] - shift;
  double cur_sup = n > 1 ? b : 0.0;
  double cur_sup2 = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double below_diag = b;
    const double below_next = op.diagonal[i + 1] - shift;
    const double below_sup = i + 2 < n ? b : 0.0;
    if (std::fabs(below_diag) > std::fabs(cur_diag)) {
      // Swap the current row with the row below.
      const double m = cur_diag / below_diag;
      u0[i] = below_diag;
      u1[i] = below_next;
      u2[i] = below_sup;
      std::swap(r[i], r[i + 1]);
      r[i + 1] -= m * r[i];
      cur_diag = cur_sup - m * below_next;
      cur_sup = cur_sup2 - m * below_sup;
    } else {
      const double piv = cur_diag == 0.0 ? tiny : cur_diag;
      const double m = below_diag / piv;
      u0[i] = piv;
      u1[i] = cur_sup;
      u2[i] = cur_sup2;
      r[i + 1] -= m * r[i];
      cur_diag = below_next - m * cur_sup;
      cur_sup = below_sup;
    }
    cur_sup2 = 0.0;
  }
  u0[n - 1] = cur_diag == 0.0 ? tiny : cur_diag;
  std::vector<double> y(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = r[i];
    if (i + 1 < n) s -= u1[i] * y[i + 1];
    if (i + 2 < n) s -= u2[i] * y[i + 2];
    y[i] = s / u0[i];
  }
  return y;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void normalize(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  for (double& x : v) x /= n;
}

}  // namespace detail

/// Lowest m eigenpairs of a discretized Hamiltonian.
inline SpectralResult lowest_eigenpairs(const TridiagonalOperator& op, std::size_t m, double tol,
                                        bool with_vectors = true) {
  if (m == 0 || m > 12) throw InputError("lowest_eigenpairs: m must be in 1..12");
  if (!(tol >= 1e-12)) throw InputError("lowest_eigenpairs: tolerance must be >= 1e-12");
  if (m > op.size()) throw InputError("lowest_eigenpairs: operator too small");
  SpectralResult res;
  res.spacing = op.spacing;
  for (std::size_t j = 0; j < m; ++j) res.raw_eigenvalues.push_back(bisect_eigenvalue(op, j, tol));
  for (std::size_t j = 1; j < m; ++j) {
    if (!(res.raw_eigenvalues[j] > res.raw_eigenvalues[j - 1])) {
      throw NumericalError("lowest_eigenpairs: eigenvalues " + std::to_string(j - 1) + " and " +
                               std::to_string(j) + " not separated at tolerance",
                           res.raw_eigenvalues[j] - res.raw_eigenvalues[j - 1]);
    }
  }
  res.eigenvalues = res.raw_eigenvalues;
  if (!with_vectors) return res;

  const std::size_t n = op.size();
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  std::vector<std::vector<double>> interior;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> v(n);
    for (double& x : v) x = unit(rng);
    detail::normalize(v);
    bool converged = false;
    double diff = 0.0;
    int sweep = 0;
    for (sweep = 1; sweep <= 50; ++sweep) {
      auto y = detail::solve_shifted(op, res.raw_eigenvalues[j], v);
      for (const auto& prev : interior) {
        const double c = detail::dot(prev, y);
        for (std::size_t i = 0; i < n; ++i) y[i] -= c * prev[i];
      }
      detail::normalize(y);
      if (detail::dot(y, v) < 0.0) {
        for (double& x : y) x = -x;
      }
      diff = 0.0;
      for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::fabs(y[i] - v[i]));
      v = std::move(y);
      if (diff < 1e-10) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NumericalError("inverse iteration stagnated for eigenvalue index " + std::to_string(j),
                           diff);
    }
    // Positive on the left tail.
    const double peak = std::fabs(*std::max_element(v.begin(), v.end(), [](double a, double b) {
      return std::fabs(a) < std::fabs(b);
    }));
    for (double x : v) {
      if (std::fabs(x) > 1e-3 * peak) {
        if (x < 0.0) {
          for (double& y : v) y = -y;
        }
        break;
      }
    }
    res.sweeps.push_back(sweep);
    interior.push_back(v);
  }
  const double scale = 1.0 / std::sqrt(op.spacing);
  for (const auto& v : interior) {
    std::vector<double> full(n + 2, 0.0);
    for (std::size_t i = 0; i < n; ++i) full[i + 1] = v[i] * scale;
    res.eigenvectors.push_back(std::move(full));
  }
  return res;
}

struct OracleOptions {
  std::size_t levels = 6;
  double tol = 1e-12;
  bool refine = true;  // repeat at h/2 and Richardson-extrapolate
};

/// Full oracle run: eigenpairs at spacing h, eigenvalues extrapolated from
/// the h and h/2 operators, (4 E(h/2) - E(h)) / 3.
template <class V>
SpectralResult solve_spectrum(V&& potential, const Grid& grid, const OracleOptions& opt = {}) {
  auto res = lowest_eigenpairs(discretize(potential, grid), opt.levels, opt.tol);
  if (opt.refine) {
    const auto fine = lowest_eigenpairs(discretize(potential, grid.refined()), opt.levels, opt.tol, false);
    for (std::size_t j = 0; j < opt.levels; ++j) {
      const double shift = fine.raw_eigenvalues[j] - res.raw_eigenvalues[j];
      res.refinement_shift.push_back(shift);
      res.eigenvalues[j] = fine.raw_eigenvalues[j] + shift / 3.0;
    }
    res.extrapolated = true;
  }
  return res;
}

/// |<psi, v>| with psi sampled on the grid and normalized in the h-weighted norm.
template <class F>
double overlap(F&& closed_form, std::span<const double> eigvec, const Grid& grid) {
  if (eigvec.size() != grid.size()) throw InputError("overlap: eigenvector does not match grid");
  const double h = grid.spacing();
  const auto xs = grid.nodes();
  double pp = 0.0;
  double pv = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double p = closed_form(xs[i]);
    pp += p * p;
    pv += p * eigvec[i];
    vv += eigvec[i] * eigvec[i];
  }
  if (!(pp > 0.0) || !(vv > 0.0)) throw InputError("overlap: zero-norm input");
  return std::fabs(pv) * h / std::sqrt(pp * h * vv * h);
}

/// Same as overlap() for an already sampled closed form.
inline double overlap_sampled(std::span<const double> psi, std::span<const double> eigvec, const Grid& grid) {
  std::size_t i = 0;
  return overlap([&](double) { return psi[i++]; }, eigvec, grid);
}

}  // namespace susyqes

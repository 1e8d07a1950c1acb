#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "susyqes/errors.hpp"

namespace susyqes {

/// Uniform grid symmetric about 0: x_i = -L + i h, h = 2L / (N - 1), N odd.
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 101;

  Grid(double half_width, std::size_t points) : half_width_(half_width), points_(points) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
      throw InputError("grid: half width must be a finite positive number");
    }
    if (points < kMinPoints) {
      throw InputError("grid: need at least " + std::to_string(kMinPoints) + " points (got " +
                       std::to_string(points) + ")");
    }
    if (points % 2 == 0) throw InputError("grid: point count must be odd so that x = 0 is a node");
  }

  double half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return points_; }
  double spacing() const noexcept { return 2.0 * half_width_ / static_cast<double>(points_ - 1); }
  std::size_t center() const noexcept { return points_ / 2; }

  double x(std::size_t i) const noexcept {
    if (i == center()) return 0.0;
    return -half_width_ + static_cast<double>(i) * spacing();
  }

  std::vector<double> nodes() const {
    std::vector<double> xs(points_);
    for (std::size_t i = 0; i < points_; ++i) xs[i] = x(i);
    xs.back() = half_width_;
    return xs;
  }

  /// Same interval with the spacing halved.
  Grid refined() const { return Grid(half_width_, 2 * points_ - 1); }

 private:
  double half_width_;
  std::size_t points_;
};

template <class F>
std::vector<double> sample(F&& f, const Grid& grid) {
  std::vector<double> out(grid.size());
  const auto xs = grid.nodes();
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
  return out;
}

}  // namespace susyqes

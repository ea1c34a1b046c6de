#include "ppr/time_grid.hpp"

#include <cmath>
#include <string>

#include "ppr/errors.hpp"
#include "ppr/quadrature.hpp"

namespace ppr {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw InvalidArgument("time grid needs at least 2 points, got " +
                          std::to_string(points_.size()));
  }
  if (points_.front() != 0.0) throw InvalidArgument("time grid must start at t = 0");
  if (points_.back() != 1.0) throw InvalidArgument("time grid must end at t = 1");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1])) {
      throw InvalidArgument("time grid not strictly increasing at point " + std::to_string(i + 1));
    }
  }
}

TimeGrid TimeGrid::equal_spaced(std::size_t m) {
  if (m < 2) throw InvalidArgument("equal-spaced grid needs m >= 2");
  std::vector<double> t(m);
  for (std::size_t i = 0; i < m; ++i) {
    t[i] = static_cast<double>(i) / static_cast<double>(m - 1);
  }
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::gauss_legendre_augmented(std::size_t m) {
  if (m < 3 || m - 2 > kMaxQuadratureOrder) {
    throw InvalidArgument("Gauss-Legendre augmented grid needs 3 <= m <= " +
                          std::to_string(kMaxQuadratureOrder + 2));
  }
  const auto& scheme = gauss_legendre(m - 2);
  std::vector<double> t;
  t.reserve(m);
  t.push_back(0.0);
  for (double x : scheme.nodes) t.push_back(0.5 * (x + 1.0));
  t.push_back(1.0);
  return TimeGrid(std::move(t));
}

bool TimeGrid::is_equal_spaced(double tol) const noexcept {
  const double step = 1.0 / static_cast<double>(points_.size() - 1);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (std::abs((points_[i] - points_[i - 1]) - step) > tol * step) return false;
  }
  return true;
}

bool TimeGrid::matches(const TimeGrid& other, double tol) const noexcept {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(points_[i] - other.points_[i]) > tol) return false;
  }
  return true;
}

}  // namespace ppr

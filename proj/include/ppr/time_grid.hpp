#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ppr {

/// Ordered visit times 0 = t₁ < … < t_m = 1 on standardized follow-up.
class TimeGrid {
 public:
  /// Validates the points; throws InvalidArgument on any violation.
  explicit TimeGrid(std::vector<double> points);

  /// m equally spaced visits, tᵢ = (i−1)/(m−1).
  static TimeGrid equal_spaced(std::size_t m);

  /// {0} ∪ {(m−2)-point Gauss-Legendre nodes mapped to (0,1)} ∪ {1}; m ≥ 3.
  static TimeGrid gauss_legendre_augmented(std::size_t m);

  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  std::span<const double> points() const noexcept { return points_; }

  /// Spacing equal to within tol relative to the nominal step.
  bool is_equal_spaced(double tol = 1e-9) const noexcept;

  /// Same size and pointwise equal within tol.
  bool matches(const TimeGrid& other, double tol) const noexcept;

 private:
  std::vector<double> points_;
};

}  // namespace ppr

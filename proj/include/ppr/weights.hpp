#pragma once

// Weight functions on [0,1], discrete PPR weights on a visit grid, and the
// contrast coefficients that turn either into a linear functional of
// visit-level values.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ppr/time_grid.hpp"

namespace ppr {

class Matrix;

/// Continuous weight w(t) ≥ 0 with ∫₀¹ w = 1.
class WeightSpec {
 public:
  struct Beta {
    double a;
    double b;
  };
  // w(t) ∝ min{1 − t, 0.5}
  struct PartialAuc {};
  // w(t) ∝ 1 − t^alpha
  struct PowerAuc {
    double alpha;
  };
  struct Component;
  struct Mixture {
    std::vector<Component> parts;
  };
  using Variant = std::variant<Beta, PartialAuc, PowerAuc, Mixture>;

  static WeightSpec beta(double a, double b);
  static WeightSpec partial_auc();
  static WeightSpec power_auc(double alpha);
  // Coefficients must be ≥ 0 and sum to 1.
  static WeightSpec mixture(std::vector<std::pair<double, WeightSpec>> parts);

  static WeightSpec cfb() { return beta(1.0, 1.0); }
  static WeightSpec ols() { return beta(2.0, 2.0); }
  static WeightSpec auc() { return beta(1.0, 2.0); }

  /// w(t) for t in [0,1].
  double operator()(double t) const;

  /// w′(t). At the PartialAuc kink t = 0.5 the left derivative (0) is used.
  /// Beta with 1 < a < 2 (or 1 < b < 2) is singular at the matching endpoint.
  double derivative(double t) const;

  /// Points in (0,1) where w′ jumps; integrals over w are split there.
  std::vector<double> kinks() const;

  std::string label() const;
  const Variant& variant() const noexcept { return v_; }

 private:
  explicit WeightSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct WeightSpec::Component {
  double coefficient;
  WeightSpec weight;
};

/// Beta(a, b) density for any a, b > 0. Used where parameters below 1 occur.
double beta_density(double t, double a, double b);

/// Weights w₂…w_m of a discrete PPR, stored at index 0…m−2.
class DiscreteWeights {
 public:
  /// Checks wᵢ ≥ 0 and Σwᵢ = 1 within tolerance::kWeightSum.
  DiscreteWeights(TimeGrid grid, std::vector<double> w);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return w_; }
  /// wᵢ for i = 2..m (1-based, as on the grid).
  double at(std::size_t i) const { return w_.at(i - 2); }

 private:
  TimeGrid grid_;
  std::vector<double> w_;
};

/// Coefficients c₁…c_m applied to visit-level values.
class Contrast {
 public:
  enum class Kind {
    kExactDiscrete,     // from discrete weights, Σc = 0
    kQuadrature,        // Gauss-Legendre q, Σc ≈ 0
    kBaselineAdjusted,  // first coefficient replaced by v₁*/q₁*
  };

  Contrast(TimeGrid grid, std::vector<double> coeffs, Kind kind);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> coeffs() const noexcept { return c_; }
  Kind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }

  /// Σcᵢ fᵢ.
  double apply(std::span<const double> values) const;

 private:
  TimeGrid grid_;
  std::vector<double> c_;
  Kind kind_;
};

/// OLS weights Lᵢ on an arbitrary grid.
DiscreteWeights ols_discrete_weights(const TimeGrid& grid);
/// Closed form 6(i−1)(m+1−i)/(m(m−1)(m+1)) on the equal-spaced grid.
DiscreteWeights ols_equal_spaced_weights(std::size_t m);
/// Aᵢ = 2(m−i+1)/(m(m−1)) on the equal-spaced grid of size m.
DiscreteWeights auc_discrete_weights(std::size_t m);
/// Same, rejecting a grid that is not equally spaced.
DiscreteWeights auc_discrete_weights(const TimeGrid& grid);
/// wᵢ = tᵢ − tᵢ₋₁, which makes the PPR f(1) − f(0).
DiscreteWeights cfb_discrete_weights(const TimeGrid& grid);
/// wᵢ = ∫ w(t) dt over [tᵢ₋₁, tᵢ].
DiscreteWeights interval_mass_weights(const WeightSpec& spec, const TimeGrid& grid);

Contrast contrast_from_weights(const DiscreteWeights& dw);

/// q on {0, GL nodes, 1}: q₁ = −w(0), q_m = w(1), qᵢ = −½ aᵢ w′(tᵢ).
/// Throws InvalidArgument when a node lands on a kink of the weight.
Contrast quadrature_contrast(const WeightSpec& spec, std::size_t m);

/// Replaces c₁ by −Σ_{i≥2} cᵢ σᵢ₁/σ₁₁, the variance-minimizing choice when
/// the first visit has true effect zero.
Contrast smart_first_coefficient(const Contrast& c, const Matrix& sigma);

}  // namespace ppr

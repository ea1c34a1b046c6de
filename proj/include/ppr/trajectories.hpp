#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>

namespace ppr {

enum class ScenarioId { kDecreasing, kConstant, kIncreasing, kIncThenDec };

inline constexpr std::array<ScenarioId, 4> kAllScenarios = {
    ScenarioId::kDecreasing, ScenarioId::kConstant, ScenarioId::kIncreasing,
    ScenarioId::kIncThenDec};

std::string_view to_string(ScenarioId s);
/// Accepts decreasing, constant, increasing, incthendec (or inc-then-dec).
ScenarioId parse_scenario(std::string_view name);

/// A mean trajectory on [0,1] together with its exact derivative.
struct TrajectoryFn {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  double operator()(double t) const { return value(t); }
};

/// Control arm f(t) = −2.5t³ + 6t² + 5t + 0.5.
TrajectoryFn control_mean();

/// Δ′(t), the rate by which treatment slows progression.
double effect_rate(ScenarioId s, double t);

/// Δ(t) = ∫₀ᵗ Δ′, in closed form.
double effect_cumulative(ScenarioId s, double t);

/// Δ as a trajectory (value Δ, derivative Δ′).
TrajectoryFn effect_trajectory(ScenarioId s);

/// Treated arm h = f − Δ.
TrajectoryFn treated_mean(ScenarioId s);

}  // namespace ppr

#include "ppr/trajectories.hpp"

#include <cmath>
#include <string>

#include "ppr/errors.hpp"
#include "ppr/quadrature.hpp"

namespace ppr {

namespace {

constexpr double kBumpMean = 0.55;
constexpr double kBumpSd = 0.25;
constexpr double kBumpScale = 1.05;

void check_time(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("trajectory evaluated outside [0, 1] at t = " + std::to_string(t));
  }
}

}  // namespace

std::string_view to_string(ScenarioId s) {
  switch (s) {
    case ScenarioId::kDecreasing: return "decreasing";
    case ScenarioId::kConstant: return "constant";
    case ScenarioId::kIncreasing: return "increasing";
    case ScenarioId::kIncThenDec: return "incthendec";
  }
  throw InternalError("unknown scenario");
}

ScenarioId parse_scenario(std::string_view name) {
  if (name == "decreasing") return ScenarioId::kDecreasing;
  if (name == "constant") return ScenarioId::kConstant;
  if (name == "increasing") return ScenarioId::kIncreasing;
  if (name == "incthendec" || name == "inc-then-dec") return ScenarioId::kIncThenDec;
  throw InvalidArgument("unknown scenario '" + std::string(name) +
                        "' (expected decreasing, constant, increasing, incthendec)");
}

TrajectoryFn control_mean() {
  return {
      [](double t) { return ((-2.5 * t + 6.0) * t + 5.0) * t + 0.5; },
      [](double t) { return (-7.5 * t + 12.0) * t + 5.0; },
  };
}

double effect_rate(ScenarioId s, double t) {
  check_time(t);
  switch (s) {
    case ScenarioId::kDecreasing: {
      const double u = 2.0 - 1.1 * t;
      return 0.45 * u * u;
    }
    case ScenarioId::kConstant: return 1.0;
    case ScenarioId::kIncreasing: return 1.2 * (1.0 - std::exp(-6.0 * t));
    case ScenarioId::kIncThenDec: return kBumpScale * normal_pdf(t, kBumpMean, kBumpSd);
  }
  throw InternalError("unknown scenario");
}

double effect_cumulative(ScenarioId s, double t) {
  check_time(t);
  switch (s) {
    case ScenarioId::kDecreasing: {
      const double u = 2.0 - 1.1 * t;
      return 0.45 * (8.0 - u * u * u) / 3.3;
    }
    case ScenarioId::kConstant: return t;
    case ScenarioId::kIncreasing: return 1.2 * (t + std::expm1(-6.0 * t) / 6.0);
    case ScenarioId::kIncThenDec:
      return kBumpScale * (normal_cdf((t - kBumpMean) / kBumpSd) -
                           normal_cdf(-kBumpMean / kBumpSd));
  }
  throw InternalError("unknown scenario");
}

TrajectoryFn effect_trajectory(ScenarioId s) {
  return {
      [s](double t) { return effect_cumulative(s, t); },
      [s](double t) { return effect_rate(s, t); },
  };
}

TrajectoryFn treated_mean(ScenarioId s) {
  auto f = control_mean();
  return {
      [f, s](double t) { return f.value(t) - effect_cumulative(s, t); },
      [f, s](double t) { return f.derivative(t) - effect_rate(s, t); },
  };
}

}  // namespace ppr

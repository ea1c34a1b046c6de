#include "ppr/estimands.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ppr/errors.hpp"
#include "ppr/quadrature.hpp"
#include "ppr/tolerance.hpp"

namespace ppr {

namespace {

void check_nodes(std::size_t nodes) {
  if (nodes < 8 || nodes > kMaxQuadratureOrder) {
    throw InvalidArgument("continuous PPR needs 8 <= nodes <= " +
                          std::to_string(kMaxQuadratureOrder) + ", got " + std::to_string(nodes));
  }
}

std::vector<double> unit_breaks(const WeightSpec& spec) {
  std::vector<double> b{0.0};
  for (double k : spec.kinks()) b.push_back(k);
  b.push_back(1.0);
  return b;
}

void check_aligned(const EstimateBundle& b, const Contrast& c) {
  if (!b.grid().matches(c.grid(), tolerance::kGridMatch)) {
    throw InvalidArgument("contrast grid (m = " + std::to_string(c.size()) +
                          ") does not match the estimate bundle grid (m = " +
                          std::to_string(b.grid().size()) + ")");
  }
}

double checked_variance(double v) {
  if (v < -1e-12) {
    throw ModelError("contrast variance is negative (" + std::to_string(v) +
                     "); covariance is not positive semi-definite");
  }
  return std::max(v, 0.0);
}

}  // namespace

EstimateBundle::EstimateBundle(std::vector<double> delta_hat, EffectCovariance sigma_hat)
    : delta_(std::move(delta_hat)), sigma_(std::move(sigma_hat)) {
  if (delta_.size() != sigma_.size()) {
    throw InvalidArgument("estimate bundle has " + std::to_string(delta_.size()) +
                          " effects but a " + std::to_string(sigma_.size()) + "x" +
                          std::to_string(sigma_.size()) + " covariance");
  }
}

PprResult make_result(std::string estimand_id, double point, double variance) {
  PprResult r;
  r.estimand_id = std::move(estimand_id);
  r.point = point;
  r.variance = variance;
  r.se = std::sqrt(variance);
  if (r.se > 0.0) {
    const double z = point / r.se;
    r.z_squared = z * z;
  } else {
    r.z_squared = point == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return r;
}

double discrete_ppr(std::span<const double> values, const DiscreteWeights& dw) {
  const auto& t = dw.grid();
  if (values.size() != t.size()) {
    throw InvalidArgument("discrete PPR given " + std::to_string(values.size()) +
                          " values for a grid of " + std::to_string(t.size()));
  }
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    s += dw.values()[i - 1] * (values[i] - values[i - 1]) / (t[i] - t[i - 1]);
  }
  return s;
}

double continuous_ppr(const TrajectoryFn& f, const WeightSpec& spec, std::size_t nodes) {
  check_nodes(nodes);
  const auto breaks = unit_breaks(spec);
  return integrate_piecewise([&](double t) { return spec(t) * f.derivative(t); }, breaks,
                             gauss_legendre(nodes));
}

double wls_slope_beta(const TrajectoryFn& f, double a, double b, std::size_t nodes) {
  if (!(a > 1.0 && b > 1.0)) {
    throw InvalidArgument("weighted least-squares Beta slope requires a > 1 and b > 1");
  }
  check_nodes(nodes);
  const double wa = a - 1.0;
  const double wb = b - 1.0;
  const double mean = wa / (wa + wb);
  const auto& scheme = gauss_legendre(nodes);
  const double num = integrate(
      [&](double t) { return beta_density(t, wa, wb) * (t - mean) * f.value(t); }, 0.0, 1.0,
      scheme);
  const double den = integrate(
      [&](double t) { return beta_density(t, wa, wb) * (t - mean) * (t - mean); }, 0.0, 1.0,
      scheme);
  return num / den;
}

PprResult delta_ppr_estimate(const EstimateBundle& b, const Contrast& c, std::string estimand_id) {
  check_aligned(b, c);
  const double point = c.apply(b.delta_hat());
  const double var = checked_variance(b.sigma_hat().matrix().quadratic(c.coeffs()));
  return make_result(std::move(estimand_id), point, var);
}

PprResult delta_ppr_smart(const EstimateBundle& b, const Contrast& c, std::string estimand_id) {
  check_aligned(b, c);
  const auto& s = b.sigma_hat().matrix();
  const double s11 = s(0, 0);
  if (!(s11 > 0.0)) throw ModelError("invalid covariance: first variance is not positive");
  const auto d = b.delta_hat();
  const std::size_t m = c.size();
  double point = 0.0;
  double var = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    point += c[i] * (d[i] - s(i, 0) / s11 * d[0]);
    for (std::size_t j = 1; j < m; ++j) {
      var += c[i] * c[j] * (s(i, j) - s(i, 0) * s(j, 0) / s11);
    }
  }
  return make_result(std::move(estimand_id), point, checked_variance(var));
}

double optimal_snr(std::span<const double> delta, const EffectCovariance& sigma) {
  if (delta.size() != sigma.size()) {
    throw InvalidArgument("effect vector of length " + std::to_string(delta.size()) +
                          " for a covariance of size " + std::to_string(sigma.size()));
  }
  const auto x = sigma.solve(delta);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += delta[i] * x[i];
  return s;
}

double cs_variance_ratio(std::size_t m) {
  if (m < 2) throw InvalidArgument("variance ratio needs m >= 2");
  const double dm = static_cast<double>(m);
  return 6.0 * (dm - 1.0) / (dm * (dm + 1.0));
}

RelativeMetrics relative_metrics(const SignalVariance& candidate,
                                 const SignalVariance& reference) {
  if (reference.signal == 0.0) throw InvalidArgument("reference signal must be non-zero");
  if (!(reference.variance > 0.0)) throw InvalidArgument("reference variance must be positive");
  RelativeMetrics r;
  r.signal_pct = 100.0 * std::abs(candidate.signal / reference.signal);
  r.se_pct = 100.0 * std::sqrt(candidate.variance / reference.variance);
  if (candidate.signal != 0.0) {
    const double inv_snr = candidate.variance / (candidate.signal * candidate.signal);
    const double ref_inv_snr = reference.variance / (reference.signal * reference.signal);
    r.rel_sample_size_pct = 100.0 * (inv_snr / ref_inv_snr);
  }
  return r;
}

double ppr_ratio(double treated, double control) {
  if (!(control > 0.0)) throw InvalidArgument("PPR ratio requires a positive control PPR");
  return treated / control;
}

DecompositionCheck covariance_decomposition_check(ScenarioId s, const WeightSpec& spec,
                                                  std::size_t nodes) {
  check_nodes(nodes);
  const auto breaks = unit_breaks(spec);
  const auto& scheme = gauss_legendre(nodes);
  const double e_wd = integrate_piecewise(
      [&](double t) { return spec(t) * effect_rate(s, t); }, breaks, scheme);
  const double e_w = integrate_piecewise([&](double t) { return spec(t); }, breaks, scheme);
  const double e_d = integrate([&](double t) { return effect_rate(s, t); }, 0.0, 1.0, scheme);
  DecompositionCheck out;
  out.lhs = e_wd;
  out.covariance = e_wd - e_w * e_d;
  out.rhs = out.covariance + (effect_cumulative(s, 1.0) - effect_cumulative(s, 0.0));
  return out;
}

double ols_consistency_integral(ScenarioId s, std::size_t nodes) {
  check_nodes(nodes);
  return integrate([s](double t) { return (t - 0.5) * effect_cumulative(s, t); }, 0.0, 1.0,
                   gauss_legendre(nodes));
}

}  // namespace ppr

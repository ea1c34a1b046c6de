#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppr/covariance.hpp"
#include "ppr/time_grid.hpp"
#include "ppr/trajectories.hpp"
#include "ppr/weights.hpp"

namespace ppr {

/// Node count used for continuous "truth" values.
inline constexpr std::size_t kTruthNodes = 64;

/// Visit-level effect estimates Δ̂(tᵢ) with their covariance, e.g. from an MMRM.
class EstimateBundle {
 public:
  EstimateBundle(std::vector<double> delta_hat, EffectCovariance sigma_hat);

  const TimeGrid& grid() const noexcept { return sigma_.grid(); }
  std::span<const double> delta_hat() const noexcept { return delta_; }
  const EffectCovariance& sigma_hat() const noexcept { return sigma_; }

 private:
  std::vector<double> delta_;
  EffectCovariance sigma_;
};

struct PprResult {
  std::string estimand_id;
  double point = 0.0;
  double variance = 0.0;
  double se = 0.0;
  double z_squared = 0.0;
};

/// Fills se and z_squared from point and variance.
PprResult make_result(std::string estimand_id, double point, double variance);

/// Σᵢ₌₂ wᵢ (fᵢ − fᵢ₋₁)/(tᵢ − tᵢ₋₁)
double discrete_ppr(std::span<const double> values, const DiscreteWeights& dw);

/// ∫₀¹ w f′ by Gauss-Legendre, split at the weight's kinks; nodes ≥ 8.
double continuous_ppr(const TrajectoryFn& f, const WeightSpec& spec,
                      std::size_t nodes = kTruthNodes);

/// Slope of the weighted least-squares line through f with weight
/// Beta(a−1, b−1); a, b > 1.
double wls_slope_beta(const TrajectoryFn& f, double a, double b,
                      std::size_t nodes = kTruthNodes);

/// Point Σcᵢ Δ̂ᵢ and variance cᵀΣ̂c.
PprResult delta_ppr_estimate(const EstimateBundle& b, const Contrast& c,
                             std::string estimand_id = "ppr");

/// Baseline-adjusted estimate Σ_{i≥2} cᵢ(Δ̂ᵢ − σ̂ᵢ₁/σ̂₁₁ Δ̂₁).
PprResult delta_ppr_smart(const EstimateBundle& b, const Contrast& c,
                          std::string estimand_id = "ppr-smart");

/// ΔᵀΣ⁻¹Δ, the ceiling of (cᵀΔ)²/(cᵀΣc) over all c.
double optimal_snr(std::span<const double> delta, const EffectCovariance& sigma);

/// 6(m−1)/(m(m+1)), Var(OLS)/Var(CFB) under compound symmetry.
double cs_variance_ratio(std::size_t m);

struct SignalVariance {
  double signal;
  double variance;
};

struct RelativeMetrics {
  double signal_pct;
  double se_pct;
  std::optional<double> rel_sample_size_pct;  // absent when signal is 0
};

RelativeMetrics relative_metrics(const SignalVariance& candidate,
                                 const SignalVariance& reference);

/// R_w = r_w(h)/r_w(f); control must be positive.
double ppr_ratio(double treated, double control);

struct DecompositionCheck {
  double lhs;         // ∫ w Δ′
  double covariance;  // Cov[w(T), Δ′(T)], T ~ U(0,1)
  double rhs;         // covariance + Δ₁
};

DecompositionCheck covariance_decomposition_check(ScenarioId s, const WeightSpec& spec,
                                                  std::size_t nodes = kTruthNodes);

/// ∫₀¹ (t − 0.5) Δ(t) dt; positive iff the OLS PPR difference is positive.
double ols_consistency_integral(ScenarioId s, std::size_t nodes = kTruthNodes);

}  // namespace ppr

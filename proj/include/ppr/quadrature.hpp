#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ppr {

/// Gauss-Legendre rule on (−1, 1), nodes ascending.
struct QuadratureScheme {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t order() const noexcept { return nodes.size(); }
};

inline constexpr std::size_t kMaxQuadratureOrder = 64;

/// n-point rule, 1 ≤ n ≤ 64. Computed once per order and cached.
const QuadratureScheme& gauss_legendre(std::size_t n);

/// P_n(x) and P′_n(x) by the three-term recurrence.
struct LegendreValue {
  double p;
  double dp;
};
LegendreValue legendre(std::size_t n, double x);

/// ∫ₐᵇ fn using the scheme mapped affinely onto [a, b].
/// Throws IntegrationDomainError if fn returns a non-finite value.
double integrate(const std::function<double(double)>& fn, double a, double b,
                 const QuadratureScheme& scheme);

/// Sum of integrate() over consecutive pieces [b₀,b₁], [b₁,b₂], … .
double integrate_piecewise(const std::function<double(double)>& fn,
                           std::span<const double> breaks,
                           const QuadratureScheme& scheme);

/// Standard normal CDF.
double normal_cdf(double x);

/// Normal density with the given mean and standard deviation.
double normal_pdf(double x, double mean = 0.0, double sd = 1.0);

}  // namespace ppr

#include "ppr/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>

#include "ppr/errors.hpp"

namespace ppr {

namespace {

constexpr int kMaxNewtonIterations = 100;

QuadratureScheme build_scheme(std::size_t n) {
  QuadratureScheme s;
  s.nodes.assign(n, 0.0);
  s.weights.assign(n, 0.0);
  const double dn = static_cast<double>(n);
  // Roots come in ± pairs; solve for the positive half and mirror so the
  // node set is exactly symmetric.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    if (n % 2 == 1 && i == n / 2) {
      x = 0.0;
    } else {
      int it = 0;
      for (; it < kMaxNewtonIterations; ++it) {
        const auto [p, dp] = legendre(n, x);
        const double step = p / dp;
        x -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
      }
      if (it == kMaxNewtonIterations) {
        throw InternalError("Gauss-Legendre Newton iteration did not converge for n = " +
                            std::to_string(n));
      }
    }
    const double dp = legendre(n, x).dp;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    s.nodes[n - 1 - i] = x;
    s.nodes[i] = -x;
    s.weights[i] = w;
    s.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) s.nodes[n / 2] = 0.0;
  return s;
}

}  // namespace

LegendreValue legendre(std::size_t n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t j = 2; j <= n; ++j) {
    const double dj = static_cast<double>(j);
    const double p2 = ((2.0 * dj - 1.0) * x * p1 - (dj - 1.0) * p0) / dj;
    p0 = p1;
    p1 = p2;
  }
  const double dn = static_cast<double>(n);
  // P′_n(x) = n (x P_n − P_{n−1}) / (x² − 1), valid inside (−1, 1).
  const double dp = dn * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

const QuadratureScheme& gauss_legendre(std::size_t n) {
  if (n < 1 || n > kMaxQuadratureOrder) {
    throw InvalidArgument("Gauss-Legendre order must be in [1, " +
                          std::to_string(kMaxQuadratureOrder) + "], got " + std::to_string(n));
  }
  static std::array<std::once_flag, kMaxQuadratureOrder + 1> once;
  static std::array<std::optional<QuadratureScheme>, kMaxQuadratureOrder + 1> cache;
  std::call_once(once[n], [n] { cache[n] = build_scheme(n); });
  return *cache[n];
}

double integrate(const std::function<double(double)>& fn, double a, double b,
                 const QuadratureScheme& scheme) {
  if (!(a < b)) throw InvalidArgument("integrate requires a < b");
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < scheme.order(); ++i) {
    const double x = half * scheme.nodes[i] + mid;
    const double y = fn(x);
    if (!std::isfinite(y)) {
      throw IntegrationDomainError("integrand is not finite at x = " + std::to_string(x));
    }
    sum += scheme.weights[i] * y;
  }
  return half * sum;
}

double integrate_piecewise(const std::function<double(double)>& fn,
                           std::span<const double> breaks, const QuadratureScheme& scheme) {
  double sum = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    sum += integrate(fn, breaks[i - 1], breaks[i], scheme);
  }
  return sum;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace ppr

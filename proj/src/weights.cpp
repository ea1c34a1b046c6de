#include "ppr/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ppr/covariance.hpp"
#include "ppr/errors.hpp"
#include "ppr/quadrature.hpp"
#include "ppr/tolerance.hpp"

namespace ppr {

namespace {

constexpr double kPartialAucNorm = 3.0 / 8.0;
constexpr double kPartialAucKink = 0.5;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double log_beta_fn(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Neumaier compensated sum.
double compensated_sum(std::span<const double> xs) {
  double sum = 0.0;
  double c = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

void check_time(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("weight evaluated outside [0, 1] at t = " + std::to_string(t));
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << x;
  return os.str();
}

}  // namespace

WeightSpec WeightSpec::beta(double a, double b) {
  if (!(a >= 1.0 && b >= 1.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("Beta weight requires a >= 1 and b >= 1, got a = " + fmt(a) +
                          ", b = " + fmt(b));
  }
  return WeightSpec(Beta{a, b});
}

WeightSpec WeightSpec::partial_auc() { return WeightSpec(PartialAuc{}); }

WeightSpec WeightSpec::power_auc(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("power AUC weight requires alpha > 0, got " + fmt(alpha));
  }
  return WeightSpec(PowerAuc{alpha});
}

WeightSpec WeightSpec::mixture(std::vector<std::pair<double, WeightSpec>> parts) {
  if (parts.empty()) throw InvalidArgument("mixture weight needs at least one component");
  Mixture mix;
  double total = 0.0;
  for (auto& [c, w] : parts) {
    if (!(c >= 0.0)) throw InvalidArgument("mixture coefficients must be >= 0");
    total += c;
    mix.parts.push_back(Component{c, std::move(w)});
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument("mixture coefficients must sum to 1, got " + fmt(total));
  }
  return WeightSpec(std::move(mix));
}

double WeightSpec::operator()(double t) const {
  check_time(t);
  return std::visit(
      Overloaded{
          [t](const Beta& b) { return beta_density(t, b.a, b.b); },
          [t](const PartialAuc&) { return std::min(1.0 - t, 0.5) / kPartialAucNorm; },
          [t](const PowerAuc& p) {
            return (1.0 - std::pow(t, p.alpha)) * (p.alpha + 1.0) / p.alpha;
          },
          [t](const Mixture& m) {
            double s = 0.0;
            for (const auto& part : m.parts) s += part.coefficient * part.weight(t);
            return s;
          },
      },
      v_);
}

double WeightSpec::derivative(double t) const {
  check_time(t);
  return std::visit(
      Overloaded{
          [t](const Beta& b) {
            const double norm = std::exp(-log_beta_fn(b.a, b.b));
            double d = 0.0;
            if (b.a != 1.0) d += (b.a - 1.0) * std::pow(t, b.a - 2.0) * std::pow(1.0 - t, b.b - 1.0);
            if (b.b != 1.0) d -= (b.b - 1.0) * std::pow(t, b.a - 1.0) * std::pow(1.0 - t, b.b - 2.0);
            return norm * d;
          },
          [t](const PartialAuc&) {
            // Left derivative at the kink.
            return t <= kPartialAucKink ? 0.0 : -1.0 / kPartialAucNorm;
          },
          [t](const PowerAuc& p) { return -(p.alpha + 1.0) * std::pow(t, p.alpha - 1.0); },
          [t](const Mixture& m) {
            double s = 0.0;
            for (const auto& part : m.parts) s += part.coefficient * part.weight.derivative(t);
            return s;
          },
      },
      v_);
}

std::vector<double> WeightSpec::kinks() const {
  return std::visit(Overloaded{
                        [](const PartialAuc&) { return std::vector<double>{kPartialAucKink}; },
                        [](const Mixture& m) {
                          std::vector<double> k;
                          for (const auto& part : m.parts) {
                            if (part.coefficient == 0.0) continue;
                            auto sub = part.weight.kinks();
                            k.insert(k.end(), sub.begin(), sub.end());
                          }
                          std::sort(k.begin(), k.end());
                          k.erase(std::unique(k.begin(), k.end()), k.end());
                          return k;
                        },
                        [](const auto&) { return std::vector<double>{}; },
                    },
                    v_);
}

std::string WeightSpec::label() const {
  return std::visit(Overloaded{
                        [](const Beta& b) {
                          if (b.a == 1.0 && b.b == 1.0) return std::string("cfb");
                          if (b.a == 2.0 && b.b == 2.0) return std::string("ols");
                          if (b.a == 1.0 && b.b == 2.0) return std::string("auc");
                          return "beta:" + fmt(b.a) + "," + fmt(b.b);
                        },
                        [](const PartialAuc&) { return std::string("partial-auc"); },
                        [](const PowerAuc& p) { return "power-auc:" + fmt(p.alpha); },
                        [](const Mixture& m) {
                          std::string s = "mixture(";
                          for (std::size_t i = 0; i < m.parts.size(); ++i) {
                            if (i) s += ";";
                            s += fmt(m.parts[i].coefficient) + "*" + m.parts[i].weight.label();
                          }
                          return s + ")";
                        },
                    },
                    v_);
}

double beta_density(double t, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("Beta density requires a, b > 0");
  const double lt = (a == 1.0) ? 1.0 : std::pow(t, a - 1.0);
  const double rt = (b == 1.0) ? 1.0 : std::pow(1.0 - t, b - 1.0);
  return std::exp(-log_beta_fn(a, b)) * lt * rt;
}

DiscreteWeights::DiscreteWeights(TimeGrid grid, std::vector<double> w)
    : grid_(std::move(grid)), w_(std::move(w)) {
  if (w_.size() + 1 != grid_.size()) {
    throw InvalidArgument("discrete weights need m - 1 = " + std::to_string(grid_.size() - 1) +
                          " values, got " + std::to_string(w_.size()));
  }
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!(w_[i] >= 0.0)) {
      throw InvalidArgument("discrete weight w" + std::to_string(i + 2) + " is negative");
    }
  }
  const double total = compensated_sum(w_);
  if (std::abs(total - 1.0) > tolerance::kWeightSum) {
    throw InvalidArgument("discrete weights must sum to 1, got " + fmt(total));
  }
}

Contrast::Contrast(TimeGrid grid, std::vector<double> coeffs, Kind kind)
    : grid_(std::move(grid)), c_(std::move(coeffs)), kind_(kind) {
  if (c_.size() != grid_.size()) {
    throw InvalidArgument("contrast has " + std::to_string(c_.size()) +
                          " coefficients for a grid of " + std::to_string(grid_.size()));
  }
  const double total = compensated_sum(c_);
  if (kind_ == Kind::kExactDiscrete && std::abs(total) > tolerance::kContrastSum) {
    throw InvalidArgument("exact-discrete contrast does not sum to zero: " + fmt(total));
  }
}

double Contrast::apply(std::span<const double> values) const {
  if (values.size() != c_.size()) {
    throw InvalidArgument("contrast of size " + std::to_string(c_.size()) +
                          " applied to " + std::to_string(values.size()) + " values");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i) s += c_[i] * values[i];
  return s;
}

DiscreteWeights ols_discrete_weights(const TimeGrid& grid) {
  const std::size_t m = grid.size();
  double mean = 0.0;
  for (double t : grid.points()) mean += t;
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double t : grid.points()) ss += (t - mean) * (t - mean);

  std::vector<double> w(m - 1);
  double tail = 0.0;
  for (std::size_t i = m; i-- > 1;) {
    tail += grid[i] - mean;
    w[i - 1] = (grid[i] - grid[i - 1]) * tail / ss;
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) {
      throw InternalError("OLS weight L" + std::to_string(i + 2) +
                          " is not positive (" + fmt(w[i]) + ")");
    }
  }
  return DiscreteWeights(grid, std::move(w));
}

DiscreteWeights ols_equal_spaced_weights(std::size_t m) {
  if (m < 2) throw InvalidArgument("OLS weights need m >= 2");
  const double dm = static_cast<double>(m);
  std::vector<double> w;
  w.reserve(m - 1);
  for (std::size_t i = 2; i <= m; ++i) {
    const double di = static_cast<double>(i);
    w.push_back(6.0 * (di - 1.0) * (dm + 1.0 - di) / (dm * (dm - 1.0) * (dm + 1.0)));
  }
  return DiscreteWeights(TimeGrid::equal_spaced(m), std::move(w));
}

DiscreteWeights auc_discrete_weights(std::size_t m) {
  if (m < 2) throw InvalidArgument("AUC weights need m >= 2");
  const double dm = static_cast<double>(m);
  std::vector<double> w;
  w.reserve(m - 1);
  for (std::size_t i = 2; i <= m; ++i) {
    w.push_back(2.0 * (dm - static_cast<double>(i) + 1.0) / (dm * (dm - 1.0)));
  }
  return DiscreteWeights(TimeGrid::equal_spaced(m), std::move(w));
}

DiscreteWeights auc_discrete_weights(const TimeGrid& grid) {
  if (!grid.is_equal_spaced()) {
    throw InvalidArgument("discrete AUC weights are defined only for equally spaced visits");
  }
  auto dw = auc_discrete_weights(grid.size());
  return DiscreteWeights(grid, std::vector<double>(dw.values().begin(), dw.values().end()));
}

DiscreteWeights cfb_discrete_weights(const TimeGrid& grid) {
  std::vector<double> w(grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) w[i - 1] = grid[i] - grid[i - 1];
  return DiscreteWeights(grid, std::move(w));
}

DiscreteWeights interval_mass_weights(const WeightSpec& spec, const TimeGrid& grid) {
  const auto& scheme = gauss_legendre(kMaxQuadratureOrder);
  const auto kinks = spec.kinks();
  auto fn = [&spec](double t) { return spec(t); };
  std::vector<double> w(grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    std::vector<double> breaks{grid[i - 1]};
    for (double k : kinks) {
      if (k > grid[i - 1] && k < grid[i]) breaks.push_back(k);
    }
    breaks.push_back(grid[i]);
    w[i - 1] = std::max(0.0, integrate_piecewise(fn, breaks, scheme));
  }
  // Quadrature of a weight with endpoint singularities in w′ can leave the
  // total a few ulps off; renormalize.
  const double total = compensated_sum(w);
  for (double& x : w) x /= total;
  return DiscreteWeights(grid, std::move(w));
}

Contrast contrast_from_weights(const DiscreteWeights& dw) {
  const auto& t = dw.grid();
  const std::size_t m = t.size();
  std::vector<double> v(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    // dw.values()[i-1] is w_{i+1} in 1-based notation.
    if (i > 0) v[i] += dw.values()[i - 1] / (t[i] - t[i - 1]);
    if (i + 1 < m) v[i] -= dw.values()[i] / (t[i + 1] - t[i]);
  }
  const double partial = compensated_sum(std::span<const double>(v).first(m - 1));
  if (std::abs(partial + v[m - 1]) < tolerance::kContrastSum) v[m - 1] = -partial;
  return Contrast(t, std::move(v), Contrast::Kind::kExactDiscrete);
}

Contrast quadrature_contrast(const WeightSpec& spec, std::size_t m) {
  if (m < 3) throw InvalidArgument("quadrature contrast needs m >= 3");
  auto grid = TimeGrid::gauss_legendre_augmented(m);
  const auto& scheme = gauss_legendre(m - 2);
  const auto kinks = spec.kinks();
  std::vector<double> q(m);
  q[0] = -spec(0.0);
  q[m - 1] = spec(1.0);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    for (double k : kinks) {
      if (std::abs(grid[i] - k) < 1e-14) {
        throw InvalidArgument("quadrature node t = " + fmt(grid[i]) + " falls on a kink of " +
                              spec.label() + "; use an even number of interior nodes");
      }
    }
    q[i] = -0.5 * scheme.weights[i - 1] * spec.derivative(grid[i]);
  }
  return Contrast(std::move(grid), std::move(q), Contrast::Kind::kQuadrature);
}

Contrast smart_first_coefficient(const Contrast& c, const Matrix& sigma) {
  if (sigma.size() != c.size()) {
    throw InvalidArgument("covariance of size " + std::to_string(sigma.size()) +
                          " does not match contrast of size " + std::to_string(c.size()));
  }
  const double s11 = sigma(0, 0);
  if (!(s11 > 0.0)) throw ModelError("invalid covariance: first variance is not positive");
  double gamma = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) gamma += c[i] * sigma(i, 0);
  std::vector<double> coeffs(c.coeffs().begin(), c.coeffs().end());
  coeffs[0] = -gamma / s11;
  return Contrast(c.grid(), std::move(coeffs), Contrast::Kind::kBaselineAdjusted);
}

}  // namespace ppr

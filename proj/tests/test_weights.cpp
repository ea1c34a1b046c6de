#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "ppr/covariance.hpp"
#include "ppr/errors.hpp"
#include "ppr/estimands.hpp"
#include "ppr/quadrature.hpp"
#include "ppr/tolerance.hpp"
#include "ppr/trajectories.hpp"
#include "ppr/weights.hpp"

using namespace ppr;

namespace {

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

std::vector<WeightSpec> builtin_specs() {
  return {WeightSpec::cfb(),
          WeightSpec::ols(),
          WeightSpec::auc(),
          WeightSpec::beta(3.0, 2.0),
          WeightSpec::beta(2.0, 5.0),
          WeightSpec::partial_auc(),
          WeightSpec::power_auc(2.0),
          WeightSpec::power_auc(3.0),
          WeightSpec::power_auc(0.5),
          WeightSpec::mixture({{0.5, WeightSpec::ols()}, {0.5, WeightSpec::auc()}})};
}

// Discrete weights on a (possibly unequal) grid for each built-in family.
std::vector<DiscreteWeights> all_discrete(const TimeGrid& g) {
  std::vector<DiscreteWeights> out{ols_discrete_weights(g), cfb_discrete_weights(g)};
  if (g.is_equal_spaced()) out.push_back(auc_discrete_weights(g));
  for (const auto& s : builtin_specs()) out.push_back(interval_mass_weights(s, g));
  return out;
}

TimeGrid random_grid(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> t(m);
  t.front() = 0.0;
  t.back() = 1.0;
  for (std::size_t i = 1; i + 1 < m; ++i) t[i] = u(rng);
  std::sort(t.begin() + 1, t.end() - 1);
  return TimeGrid(t);
}

}  // namespace

TEST_CASE("weight_eval examples") {
  CHECK(WeightSpec::cfb()(0.37) == doctest::Approx(1.0));
  CHECK(WeightSpec::ols()(0.5) == doctest::Approx(1.5));
  CHECK(WeightSpec::auc()(0.0) == doctest::Approx(2.0));
  CHECK(WeightSpec::ols().derivative(0.25) == doctest::Approx(3.0));
  CHECK(WeightSpec::auc().derivative(0.7) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(WeightSpec::beta(1.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(WeightSpec::power_auc(0.0), InvalidArgument);
  CHECK_THROWS_AS(WeightSpec::cfb()(1.5), InvalidArgument);
}

TEST_CASE("partial AUC: left derivative at the kink, kink reported") {
  const auto p = WeightSpec::partial_auc();
  CHECK(p.derivative(0.5) == 0.0);
  CHECK(p.derivative(0.75) == doctest::Approx(-8.0 / 3.0));
  REQUIRE(p.kinks().size() == 1);
  CHECK(p.kinks()[0] == 0.5);
}

TEST_CASE("every weight spec integrates to 1 on [0,1]") {
  // Substituting t = u^2 smooths the sqrt(t) behaviour of fractional powers.
  const auto& g = gauss_legendre(64);
  for (const auto& s : builtin_specs()) {
    std::vector<double> br{0.0};
    for (double k : s.kinks()) br.push_back(std::sqrt(k));
    br.push_back(1.0);
    CAPTURE(s.label());
    CHECK(integrate_piecewise([&](double u) { return 2.0 * u * s(u * u); }, br, g) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("labels") {
  CHECK(WeightSpec::cfb().label() == "cfb");
  CHECK(WeightSpec::ols().label() == "ols");
  CHECK(WeightSpec::auc().label() == "auc");
  CHECK(WeightSpec::partial_auc().label() == "partial-auc");
}

TEST_CASE("mixture validation") {
  CHECK_THROWS_AS(WeightSpec::mixture({}), InvalidArgument);
  CHECK_THROWS_AS(WeightSpec::mixture({{0.6, WeightSpec::ols()}, {0.6, WeightSpec::auc()}}),
                  InvalidArgument);
  CHECK_THROWS_AS(WeightSpec::mixture({{-0.5, WeightSpec::ols()}, {1.5, WeightSpec::auc()}}),
                  InvalidArgument);
  const auto mix = WeightSpec::mixture({{0.25, WeightSpec::ols()}, {0.75, WeightSpec::auc()}});
  CHECK(mix(0.3) == doctest::Approx(0.25 * 6 * 0.3 * 0.7 + 0.75 * 2 * 0.7));
}

TEST_CASE("ols_discrete_weights examples") {
  const auto w3 = ols_discrete_weights(TimeGrid::equal_spaced(3));
  CHECK(w3.at(2) == doctest::Approx(0.5));
  CHECK(w3.at(3) == doctest::Approx(0.5));
  const auto w2 = ols_discrete_weights(TimeGrid::equal_spaced(2));
  CHECK(w2.at(2) == doctest::Approx(1.0));
}

TEST_CASE("ols_equal_spaced_weights examples") {
  const auto w3 = ols_equal_spaced_weights(3);
  CHECK(w3.at(2) == doctest::Approx(0.5));
  CHECK(w3.at(3) == doctest::Approx(0.5));
  const auto w5 = ols_equal_spaced_weights(5);
  CHECK(w5.at(2) == doctest::Approx(w5.at(5)));
  CHECK(w5.at(3) == doctest::Approx(w5.at(4)));
  const auto w4 = ols_equal_spaced_weights(4);
  double s = 0.0;
  for (double x : w4.values()) s += x;
  CHECK(s == doctest::Approx(1.0));
  CHECK_THROWS_AS(ols_equal_spaced_weights(1), InvalidArgument);
}

TEST_CASE("OLS closed form matches the general formula for m = 2..20") {
  for (std::size_t m = 2; m <= 20; ++m) {
    const auto a = ols_equal_spaced_weights(m);
    const auto b = ols_discrete_weights(TimeGrid::equal_spaced(m));
    for (std::size_t i = 2; i <= m; ++i) CHECK(std::abs(a.at(i) - b.at(i)) <= 1e-12);
  }
}

TEST_CASE("OLS discrete PPR equals the least-squares slope on any grid") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  for (std::size_t m = 2; m <= 12; ++m) {
    const auto g = random_grid(m, rng);
    std::vector<double> y(m);
    for (auto& v : y) v = z(rng);
    const auto dw = ols_discrete_weights(g);
    CHECK(discrete_ppr(y, dw) == doctest::Approx(oracle::ols_slope(to_vec(g.points()), y)));
    for (double w : dw.values()) CHECK(w > 0.0);
  }
}

TEST_CASE("auc_discrete_weights examples") {
  const auto w3 = auc_discrete_weights(3);
  CHECK(w3.at(2) == doctest::Approx(2.0 / 3.0));
  CHECK(w3.at(3) == doctest::Approx(1.0 / 3.0));
  CHECK(auc_discrete_weights(2).at(2) == doctest::Approx(1.0));
  const auto w6 = auc_discrete_weights(6);
  double s = 0.0;
  for (double x : w6.values()) s += x;
  CHECK(s == doctest::Approx(1.0));
  CHECK_THROWS_AS(auc_discrete_weights(TimeGrid({0.0, 0.3, 1.0})), InvalidArgument);
}

TEST_CASE("AUC discrete PPR equals the rescaled rectangle area") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  for (std::size_t m = 2; m <= 12; ++m) {
    std::vector<double> y(m);
    for (auto& v : y) v = z(rng);
    CHECK(discrete_ppr(y, auc_discrete_weights(m)) ==
          doctest::Approx(oracle::auc_slope_equal(y)));
  }
}

TEST_CASE("contrast_from_weights examples") {
  const auto ols = contrast_from_weights(ols_discrete_weights(TimeGrid::equal_spaced(3)));
  CHECK(ols[0] == doctest::Approx(-1.0));
  CHECK(std::abs(ols[1]) < 1e-15);
  CHECK(ols[2] == doctest::Approx(1.0));

  const auto auc = contrast_from_weights(auc_discrete_weights(3));
  CHECK(auc[0] == doctest::Approx(-4.0 / 3.0));
  CHECK(auc[1] == doctest::Approx(2.0 / 3.0));
  CHECK(auc[2] == doctest::Approx(2.0 / 3.0));

  const auto cfb = contrast_from_weights(cfb_discrete_weights(TimeGrid::equal_spaced(2)));
  CHECK(cfb[0] == -1.0);
  CHECK(cfb[1] == 1.0);
  CHECK(cfb.kind() == Contrast::Kind::kExactDiscrete);
}

TEST_CASE("DiscreteWeights validation") {
  const auto g = TimeGrid::equal_spaced(3);
  CHECK_THROWS_AS(DiscreteWeights(g, {0.5}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteWeights(g, {1.5, -0.5}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteWeights(g, {0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(Contrast(g, {1.0, 0.0, 0.0}, Contrast::Kind::kExactDiscrete), InvalidArgument);
}

TEST_CASE("invariants: weight sums, zero-sum contrasts, slope/contrast form") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + trial % 11;
    const auto g = trial % 2 == 0 ? TimeGrid::equal_spaced(m) : random_grid(m, rng);
    std::vector<double> y(m);
    for (auto& v : y) v = z(rng);
    for (const auto& dw : all_discrete(g)) {
      double ws = 0.0;
      for (double w : dw.values()) {
        CHECK(w >= 0.0);
        ws += w;
      }
      CHECK(std::abs(ws - 1.0) <= tolerance::kWeightSum);
      const auto c = contrast_from_weights(dw);
      double cs = 0.0;
      for (double v : c.coeffs()) cs += v;
      CHECK(std::abs(cs) <= tolerance::kContrastSum);
      CHECK(std::abs(discrete_ppr(y, dw) - c.apply(y)) <= tolerance::kSlopeForm);
    }
  }
}

TEST_CASE("invariants: linear invariance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 11;
    const auto g = trial % 2 == 0 ? TimeGrid::equal_spaced(m) : random_grid(m, rng);
    const double alpha = u(rng);
    const double slope = u(rng);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = alpha + slope * g[i];
    for (const auto& dw : all_discrete(g)) {
      CHECK(std::abs(contrast_from_weights(dw).apply(y) - slope) <= 1e-10);
    }
  }
}

TEST_CASE("invariants: monotone nonnegativity") {
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> e(1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 11;
    const auto g = trial % 2 == 0 ? TimeGrid::equal_spaced(m) : random_grid(m, rng);
    std::vector<double> y(m);
    y[0] = e(rng);
    for (std::size_t i = 1; i < m; ++i) y[i] = y[i - 1] + (trial % 3 == 0 ? 0.0 : e(rng));
    for (const auto& dw : all_discrete(g)) CHECK(discrete_ppr(y, dw) >= -1e-12);
  }
}

TEST_CASE("quadrature_contrast examples") {
  for (std::size_t m : {3u, 5u, 8u, 12u}) {
    const auto c = quadrature_contrast(WeightSpec::cfb(), m);
    CHECK(c[0] == doctest::Approx(-1.0));
    CHECK(c[m - 1] == doctest::Approx(1.0));
    for (std::size_t i = 1; i + 1 < m; ++i) CHECK(std::abs(c[i]) < 1e-15);
    CHECK(c.kind() == Contrast::Kind::kQuadrature);
  }
  const auto ols = quadrature_contrast(WeightSpec::ols(), 5);
  CHECK(std::abs(ols[0]) < 1e-15);
  CHECK(std::abs(ols[4]) < 1e-15);
  CHECK(ols[1] == doctest::Approx(-ols[3]).epsilon(1e-13));

  for (std::size_t m : {4u, 7u}) {
    const auto auc = quadrature_contrast(WeightSpec::auc(), m);
    const auto& g = gauss_legendre(m - 2);
    CHECK(auc[0] == doctest::Approx(-2.0));
    CHECK(std::abs(auc[m - 1]) < 1e-15);
    for (std::size_t i = 1; i + 1 < m; ++i) CHECK(auc[i] == doctest::Approx(g.weights[i - 1]));
  }
}

TEST_CASE("quadrature_contrast: partial AUC with a node on the kink is rejected") {
  // m = 5 puts the middle of three GL nodes exactly at t = 0.5.
  CHECK_THROWS_AS(quadrature_contrast(WeightSpec::partial_auc(), 5), InvalidArgument);
  CHECK_NOTHROW(quadrature_contrast(WeightSpec::partial_auc(), 6));
}

TEST_CASE("quadrature_contrast sums to ~0 for built-in specs, m = 5..12") {
  // Every spec here has a polynomial w' on each piece, so GL integrates it exactly.
  for (const auto& s : builtin_specs()) {
    if (const auto* p = std::get_if<WeightSpec::PowerAuc>(&s.variant());
        p && p->alpha != std::floor(p->alpha)) {
      continue;
    }
    const bool kinked = !s.kinks().empty();
    for (std::size_t m = 5; m <= 12; ++m) {
      if (kinked && m % 2 == 1) continue;  // odd m puts a node on the kink at 0.5
      const auto c = quadrature_contrast(s, m);
      double sum = 0.0;
      for (double v : c.coeffs()) sum += v;
      CAPTURE(s.label());
      CAPTURE(m);
      CHECK(std::abs(sum) <= tolerance::kQuadratureSum);
    }
  }
}

TEST_CASE("quadrature_contrast sum for non-integer power AUC shrinks with m") {
  // t^(alpha-1) in w' is not polynomial; the residual is pure GL error.
  for (double alpha : {0.5, 1.5, 2.5}) {
    double prev = 1.0;
    for (std::size_t m = 5; m <= 12; ++m) {
      const auto c = quadrature_contrast(WeightSpec::power_auc(alpha), m);
      double sum = 0.0;
      for (double v : c.coeffs()) sum += v;
      CHECK(std::abs(sum) < prev);
      prev = std::abs(sum);
    }
  }
}

TEST_CASE("quadrature contrast reproduces the continuous PPR for m >= 8") {
  const auto f = control_mean();
  auto apply_at = [&](const WeightSpec& s, std::size_t m) {
    const auto c = quadrature_contrast(s, m);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = f(c.grid()[i]);
    return c.apply(y);
  };
  const std::vector<WeightSpec> specs{WeightSpec::cfb(),          WeightSpec::ols(),
                                      WeightSpec::auc(),          WeightSpec::beta(3.0, 2.0),
                                      WeightSpec::beta(2.0, 5.0), WeightSpec::beta(4.0, 4.0)};
  for (const auto& s : specs) {
    const double truth = continuous_ppr(f, s);
    for (std::size_t m = 8; m <= 16; ++m) CHECK(std::abs(apply_at(s, m) - truth) <= 1e-6);
  }
  // Fractional exponents leave an endpoint singularity in w'; the GL rule
  // then converges only algebraically, so only the trend is checked.
  for (const auto& s : {WeightSpec::beta(2.5, 4.0), WeightSpec::beta(1.5, 1.0)}) {
    const double truth = continuous_ppr(f, s);
    double prev = 1e9;
    for (std::size_t m = 8; m <= 40; m += 8) {
      const double err = std::abs(apply_at(s, m) - truth);
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("interval_mass_weights reproduces CFB weights") {
  const auto g = TimeGrid({0.0, 0.2, 0.7, 1.0});
  const auto a = interval_mass_weights(WeightSpec::cfb(), g);
  const auto b = cfb_discrete_weights(g);
  for (std::size_t i = 2; i <= 4; ++i) CHECK(a.at(i) == doctest::Approx(b.at(i)).epsilon(1e-13));
}

TEST_CASE("smart_first_coefficient examples") {
  const auto c = contrast_from_weights(auc_discrete_weights(5));
  Matrix diagonal = Matrix::identity(5);
  const auto s0 = smart_first_coefficient(c, diagonal);
  CHECK(s0[0] == 0.0);
  for (std::size_t i = 1; i < 5; ++i) CHECK(s0[i] == c[i]);
  CHECK(s0.kind() == Contrast::Kind::kBaselineAdjusted);

  const double s2 = 2.0, tau = 0.6;
  Matrix cs(5, tau);
  for (std::size_t i = 0; i < 5; ++i) cs(i, i) = s2;
  const auto sc = smart_first_coefficient(c, cs);
  CHECK(sc[0] == doctest::Approx(c[0] * tau / s2).epsilon(1e-13));

  Matrix bad = Matrix::identity(5);
  bad(0, 0) = 0.0;
  CHECK_THROWS_AS(smart_first_coefficient(c, bad), ModelError);
}

TEST_CASE("beta_density") {
  CHECK(beta_density(0.5, 2.0, 2.0) == doctest::Approx(1.5));
  CHECK(beta_density(0.3, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(beta_density(0.25, 0.5, 0.5) == doctest::Approx(1.0 / (std::numbers::pi * std::sqrt(0.25 * 0.75))));
  CHECK_THROWS_AS(beta_density(0.5, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("time grids") {
  CHECK_THROWS_AS(TimeGrid({0.0}), InvalidArgument);
  CHECK_THROWS_AS(TimeGrid({0.1, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(TimeGrid({0.0, 0.9}), InvalidArgument);
  CHECK_THROWS_AS(TimeGrid({0.0, 0.5, 0.5, 1.0}), InvalidArgument);
  CHECK(TimeGrid::equal_spaced(5).is_equal_spaced());
  CHECK_FALSE(TimeGrid::gauss_legendre_augmented(5).is_equal_spaced());
  const auto gl = TimeGrid::gauss_legendre_augmented(5);
  CHECK(gl[2] == doctest::Approx(0.5));
  CHECK_THROWS_AS(TimeGrid::gauss_legendre_augmented(2), InvalidArgument);
  CHECK_THROWS_AS(TimeGrid::gauss_legendre_augmented(67), InvalidArgument);
}

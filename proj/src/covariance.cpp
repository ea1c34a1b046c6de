#include "ppr/covariance.hpp"

#include <cmath>
#include <string>

#include "ppr/errors.hpp"
#include "ppr/tolerance.hpp"

namespace ppr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Matrix symmetrized(Matrix a) {
  const double asym = a.asymmetry();
  if (asym > tolerance::kSymmetrize) {
    throw InvalidArgument("covariance matrix is not symmetric (max |a_ij - a_ji| = " +
                          std::to_string(asym) + ")");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  }
  return a;
}

}  // namespace

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix a(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw InvalidArgument("matrix row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) + " entries, expected " +
                            std::to_string(rows.size()));
    }
    for (std::size_t j = 0; j < rows.size(); ++j) a(i, j) = rows[i][j];
  }
  return a;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

double Matrix::asymmetry() const noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    }
  }
  return worst;
}

double Matrix::bilinear(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw InvalidArgument("vector length does not match matrix size " + std::to_string(n_));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n_; ++j) row += (*this)(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}

std::vector<double> Matrix::multiply(std::span<const double> x) const {
  if (x.size() != n_) {
    throw InvalidArgument("vector length does not match matrix size " + std::to_string(n_));
  }
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
  }
  return y;
}

Cholesky::Cholesky(const Matrix& a) : l_(a.size()) {
  const std::size_t n = a.size();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ModelError("matrix is not positive definite: leading minor " +
                       std::to_string(j + 1) + " of " + std::to_string(n) +
                       " has non-positive pivot");
    }
    const double ljj = std::sqrt(d);
    l_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
      l_(i, j) = s / ljj;
    }
  }
}

std::vector<double> Cholesky::solve(std::span<const double> rhs) const {
  const std::size_t n = l_.size();
  if (rhs.size() != n) {
    throw InvalidArgument("right-hand side of length " + std::to_string(rhs.size()) +
                          " for a system of size " + std::to_string(n));
  }
  std::vector<double> y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= l_(i, k) * y[k];
    y[i] /= l_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= l_(k, i) * y[k];
    y[i] /= l_(i, i);
  }
  return y;
}

std::vector<double> spd_solve(const Matrix& a, std::span<const double> rhs) {
  return Cholesky(a).solve(rhs);
}

void validate(const CovarianceSpec& spec) {
  std::visit(Overloaded{
                 [](const ArWithK& s) {
                   if (!(s.rho > 0.0 && s.rho < 1.0)) {
                     throw InvalidArgument("AR-with-k correlation requires 0 < ρ < 1");
                   }
                   if (!(s.rho <= s.k && s.k <= 1.0)) {
                     throw InvalidArgument("AR-with-k correlation requires ρ ≤ k ≤ 1 (ρ = " +
                                           std::to_string(s.rho) +
                                           ", k = " + std::to_string(s.k) + ")");
                   }
                   if (!(s.sigma_end > 0.0)) {
                     throw InvalidArgument("AR-with-k requires final SD sigma > 0");
                   }
                 },
                 [](const CompoundSymmetric& s) {
                   if (!(s.sd > 0.0)) throw InvalidArgument("compound symmetry requires sd > 0");
                   if (!(s.corr >= -1.0 && s.corr <= 1.0)) {
                     throw InvalidArgument("compound symmetry requires correlation in [-1, 1]");
                   }
                 },
                 [](const ExponentialDecay& s) {
                   if (!(s.sd > 0.0)) throw InvalidArgument("exponential decay requires sd > 0");
                   if (!(s.base > 0.0 && s.base < 1.0)) {
                     throw InvalidArgument("exponential decay requires base in (0, 1)");
                   }
                 },
                 [](const Unstructured& s) {
                   for (std::size_t i = 0; i < s.matrix.size(); ++i) {
                     if (!(s.matrix(i, i) > 0.0)) {
                       throw ModelError("variance on diagonal entry " + std::to_string(i + 1) +
                                        " is not positive");
                     }
                   }
                 },
             },
             spec);
}

std::vector<double> sd_profile(const CovarianceSpec& spec, const TimeGrid& grid) {
  validate(spec);
  const std::size_t m = grid.size();
  return std::visit(
      Overloaded{
          [&](const ArWithK& s) {
            std::vector<double> sd(m);
            for (std::size_t i = 0; i < m; ++i) {
              const double frac = s.profile == SdProfile::kIndexLinear
                                      ? static_cast<double>(i) / static_cast<double>(m - 1)
                                      : grid[i];
              sd[i] = 1.0 + (s.sigma_end - 1.0) * frac;
            }
            sd[m - 1] = s.sigma_end;
            return sd;
          },
          [&](const CompoundSymmetric& s) { return std::vector<double>(m, s.sd); },
          [&](const ExponentialDecay& s) { return std::vector<double>(m, s.sd); },
          [&](const Unstructured& s) {
            if (s.matrix.size() != m) {
              throw InvalidArgument("unstructured matrix of size " +
                                    std::to_string(s.matrix.size()) + " on a grid of " +
                                    std::to_string(m));
            }
            std::vector<double> sd(m);
            for (std::size_t i = 0; i < m; ++i) sd[i] = std::sqrt(s.matrix(i, i));
            return sd;
          },
      },
      spec);
}

Matrix correlation_matrix(const CovarianceSpec& spec, const TimeGrid& grid) {
  validate(spec);
  const std::size_t m = grid.size();
  Matrix r(m);
  auto fill = [&](auto&& corr) {
    for (std::size_t i = 0; i < m; ++i) {
      r(i, i) = 1.0;
      for (std::size_t j = 0; j < i; ++j) {
        const double c = corr(i, j, std::abs(grid[i] - grid[j]));
        r(i, j) = c;
        r(j, i) = c;
      }
    }
  };
  std::visit(Overloaded{
                 [&](const ArWithK& s) {
                   fill([&](std::size_t, std::size_t, double d) {
                     return d == 1.0 ? s.rho : s.k * std::pow(s.rho / s.k, d);
                   });
                 },
                 [&](const CompoundSymmetric& s) {
                   fill([&](std::size_t, std::size_t, double) { return s.corr; });
                 },
                 [&](const ExponentialDecay& s) {
                   fill([&](std::size_t, std::size_t, double d) { return std::pow(s.base, d); });
                 },
                 [&](const Unstructured& s) {
                   const auto sd = sd_profile(spec, grid);
                   fill([&](std::size_t i, std::size_t j, double) {
                     return 0.5 * (s.matrix(i, j) + s.matrix(j, i)) / (sd[i] * sd[j]);
                   });
                 },
             },
             spec);
  // Validate PD on the correlation scale.
  static_cast<void>(Cholesky(r));
  return r;
}

EffectCovariance::EffectCovariance(TimeGrid grid, Matrix matrix)
    : grid_(std::move(grid)), m_(symmetrized(std::move(matrix))), chol_(m_) {
  if (m_.size() != grid_.size()) {
    throw InvalidArgument("covariance of size " + std::to_string(m_.size()) +
                          " on a grid of " + std::to_string(grid_.size()));
  }
}

EffectCovariance effect_covariance(const CovarianceSpec& spec, const TimeGrid& grid) {
  if (const auto* u = std::get_if<Unstructured>(&spec)) {
    return EffectCovariance(grid, u->matrix);
  }
  const auto sd = sd_profile(spec, grid);
  const auto r = correlation_matrix(spec, grid);
  const std::size_t m = grid.size();
  Matrix s(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) s(i, j) = sd[i] * sd[j] * r(i, j);
  }
  return EffectCovariance(grid, std::move(s));
}

}  // namespace ppr

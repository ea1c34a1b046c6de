#pragma once

// Covariance models for visit-level treatment-effect estimates, PD
// validation, and the small dense solves used by SNR and smart coefficients.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "ppr/time_grid.hpp"

namespace ppr {

/// Dense square matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}
  /// Rows must all have the same length as the row count.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  /// max |aᵢⱼ − aⱼᵢ|
  double asymmetry() const noexcept;
  /// xᵀ A y
  double bilinear(std::span<const double> x, std::span<const double> y) const;
  double quadratic(std::span<const double> x) const { return bilinear(x, x); }
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// Lower-triangular Cholesky factor A = LLᵀ.
class Cholesky {
 public:
  /// Throws ModelError naming the 1-based leading minor that is not positive.
  explicit Cholesky(const Matrix& a);

  std::vector<double> solve(std::span<const double> rhs) const;
  const Matrix& lower() const noexcept { return l_; }

 private:
  Matrix l_;
};

/// Cholesky factor-and-solve for symmetric positive definite A.
std::vector<double> spd_solve(const Matrix& a, std::span<const double> rhs);

enum class SdProfile {
  kIndexLinear,  // σᵢ = 1 + (σ−1)(i−1)/(m−1)
  kTimeLinear,   // σᵢ = 1 + (σ−1)tᵢ
};

/// ρᵢⱼ = k(ρ/k)^|tᵢ−tⱼ| with an SD ramp from 1 to sigma_end.
struct ArWithK {
  double rho;
  double k;
  double sigma_end;
  SdProfile profile = SdProfile::kIndexLinear;
};

struct CompoundSymmetric {
  double sd;
  double corr;
};

/// Cov(t, s) = sd²·base^|t−s|.
struct ExponentialDecay {
  double sd;
  double base;
};

struct Unstructured {
  Matrix matrix;
};

using CovarianceSpec = std::variant<ArWithK, CompoundSymmetric, ExponentialDecay, Unstructured>;

/// Throws InvalidArgument when the spec's parameter constraints fail.
void validate(const CovarianceSpec& spec);

std::vector<double> sd_profile(const CovarianceSpec& spec, const TimeGrid& grid);
Matrix correlation_matrix(const CovarianceSpec& spec, const TimeGrid& grid);

/// Positive-definite covariance of Δ̂(t₁..t_m) on a grid.
class EffectCovariance {
 public:
  /// Symmetrizes asymmetry ≤ tolerance::kSymmetrize (else InvalidArgument);
  /// throws ModelError if not PD.
  EffectCovariance(TimeGrid grid, Matrix matrix);

  const TimeGrid& grid() const noexcept { return grid_; }
  const Matrix& matrix() const noexcept { return m_; }
  std::size_t size() const noexcept { return m_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  std::vector<double> solve(std::span<const double> rhs) const { return chol_.solve(rhs); }

 private:
  TimeGrid grid_;
  Matrix m_;
  Cholesky chol_;
};

/// Σᵢⱼ = σᵢσⱼρᵢⱼ.
EffectCovariance effect_covariance(const CovarianceSpec& spec, const TimeGrid& grid);

}  // namespace ppr

#pragma once

namespace ppr::tolerance {

// Σwᵢ = 1 for discrete weights.
inline constexpr double kWeightSum = 1e-9;
// Slope form versus contrast form of a discrete PPR.
inline constexpr double kSlopeForm = 1e-10;
// Σvᵢ = 0 for exact-discrete contrasts.
inline constexpr double kContrastSum = 1e-12;
// Σqᵢ ≈ 0 for quadrature contrasts of continuous weights.
inline constexpr double kQuadratureSum = 1e-8;
// Grid point comparison when aligning objects built on different grids.
inline constexpr double kGridMatch = 1e-12;
// User covariance asymmetry accepted (and symmetrized) on input.
inline constexpr double kSymmetrize = 1e-8;

}  // namespace ppr::tolerance

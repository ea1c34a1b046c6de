#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ppr/covariance.hpp"
#include "ppr/errors.hpp"
#include "ppr/estimands.hpp"
#include "ppr/time_grid.hpp"

namespace ppr {

/// Malformed CSV content; carries the 1-based row and column.
class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column);
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// Both files parsed but their sizes disagree.
class DimensionMismatch : public InvalidArgument {
 public:
  DimensionMismatch(std::size_t effects_rows, std::size_t cov_rows);
};

struct EffectsTable {
  std::vector<double> t;
  std::vector<double> delta;
};

/// Header "t,delta", then one "t,delta" row per visit.
EffectsTable parse_effects_csv(std::istream& is);
/// m rows of m comma-separated reals, no header.
Matrix parse_covariance_csv(std::istream& is);

/// Reads both files. Throws IoError, ParseError, DimensionMismatch,
/// InvalidArgument (grid or symmetry), or ModelError (not PD).
EstimateBundle load_bundle(const std::filesystem::path& effects,
                           const std::filesystem::path& covariance);

/// Locale-independent strict parse of a whole token.
double parse_double(std::string_view token);

}  // namespace ppr

#pragma once

// Analytic comparison study over scenario × m × k × σ grids, plus the
// compound-symmetry and exponential-decay variance-ratio tables.

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppr/covariance.hpp"
#include "ppr/trajectories.hpp"

namespace ppr {

inline constexpr std::string_view kLibraryVersion = "1.0.0";

enum class Estimand { kCfb, kOls, kAuc };
std::string_view to_string(Estimand e);
Estimand parse_estimand(std::string_view name);

enum class GridKind { kEqualSpaced, kGaussLegendreAugmented };
std::string_view to_string(GridKind g);
GridKind parse_grid_kind(std::string_view name);

struct StudyConfig {
  std::vector<ScenarioId> scenarios{kAllScenarios.begin(), kAllScenarios.end()};
  std::vector<std::size_t> m_values{5, 6, 7, 8, 9, 10};
  std::vector<double> k_values{0.6, 0.7, 0.8, 0.9};
  std::vector<double> sigma_values{std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0)};
  double rho = 0.6;
  GridKind grid_kind = GridKind::kEqualSpaced;
  bool use_smart = false;
  std::vector<Estimand> estimands{Estimand::kCfb, Estimand::kOls, Estimand::kAuc};
  // 0 selects std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

/// Throws InvalidArgument describing the first violated constraint.
void validate(const StudyConfig& cfg);

struct ComparisonRow {
  ScenarioId scenario;
  Estimand estimand;
  std::size_t m;
  double k;
  double sigma_end;
  GridKind grid_kind;
  bool smart;
  double signal_pct;
  double se_pct;
  std::optional<double> rel_sample_size_pct;
  double optimal_sample_size_pct;
};

struct StudyTable {
  std::vector<ComparisonRow> rows;
  std::map<std::string, std::string> metadata;
};

StudyTable run_discrete_study(const StudyConfig& cfg);
StudyTable run_continuous_study(const StudyConfig& cfg);
/// Dispatches on cfg.grid_kind.
StudyTable run_study(const StudyConfig& cfg);

inline constexpr std::string_view kStudyCsvHeader =
    "scenario,estimand,m,k,sigma,grid_kind,smart,signal_pct,se_pct,rel_n_pct,optimal_n_pct";

void write_study_csv(std::ostream& os, const StudyTable& table);
/// Parses the CSV written by write_study_csv; metadata is left empty.
StudyTable read_study_csv(std::istream& is);

struct Table1Row {
  std::size_t m;
  double discrete_ratio;
  double continuous_ratio;
};

/// m = 5..9 variance ratios of OLS to CFB under compound symmetry.
std::vector<Table1Row> table1();

/// Var(OLS)/Var(CFB) for equally spaced visits under a covariance model.
double ols_cfb_variance_ratio(const CovarianceSpec& spec, std::size_t m);

/// The ratio under Cov = 0.5^|t−s| (unit variance) on m equally spaced visits.
double exp_decay_counterexample(std::size_t m = 8);

/// Shortest decimal text with 10 significant digits, locale independent.
std::string format_number(double x);

}  // namespace ppr

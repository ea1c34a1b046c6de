#include "ppr/study.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "ppr/bundle_io.hpp"
#include "ppr/errors.hpp"
#include "ppr/estimands.hpp"
#include "ppr/quadrature.hpp"
#include "ppr/weights.hpp"

namespace ppr {

namespace {

struct Cell {
  ScenarioId scenario;
  std::size_t m;
  double k;
  double sigma;
};

WeightSpec continuous_weight(Estimand e) {
  switch (e) {
    case Estimand::kCfb: return WeightSpec::cfb();
    case Estimand::kOls: return WeightSpec::ols();
    case Estimand::kAuc: return WeightSpec::auc();
  }
  throw InternalError("unknown estimand");
}

Contrast endpoint_contrast(const TimeGrid& grid) {
  std::vector<double> c(grid.size(), 0.0);
  c.front() = -1.0;
  c.back() = 1.0;
  return Contrast(grid, std::move(c), Contrast::Kind::kExactDiscrete);
}

bool selected(const StudyConfig& cfg, Estimand e) {
  return std::find(cfg.estimands.begin(), cfg.estimands.end(), e) != cfg.estimands.end();
}

// Everything a cell needs to turn contrasts into rows.
struct CellContext {
  const StudyConfig& cfg;
  const Cell& cell;
  EstimateBundle bundle;
  SignalVariance reference;
  double optimal_pct;
};

ComparisonRow make_row(const CellContext& ctx, Estimand e, const Contrast& c, double signal) {
  const auto plain = delta_ppr_estimate(ctx.bundle, c);
  // The CFB reference is always the plain contrast.
  const bool smart = ctx.cfg.use_smart && e != Estimand::kCfb;
  const double variance = smart ? delta_ppr_smart(ctx.bundle, c).variance : plain.variance;
  const auto rel = relative_metrics({signal, variance}, ctx.reference);
  return ComparisonRow{ctx.cell.scenario, e,           ctx.cell.m,      ctx.cell.k,
                       ctx.cell.sigma,    ctx.cfg.grid_kind, ctx.cfg.use_smart, rel.signal_pct,
                       rel.se_pct,        rel.rel_sample_size_pct, ctx.optimal_pct};
}

std::vector<ComparisonRow> evaluate_cell(const StudyConfig& cfg, const Cell& cell) {
  const bool continuous = cfg.grid_kind == GridKind::kGaussLegendreAugmented;
  const auto grid = continuous ? TimeGrid::gauss_legendre_augmented(cell.m)
                               : TimeGrid::equal_spaced(cell.m);
  const ArWithK spec{cfg.rho, cell.k, cell.sigma,
                     continuous ? SdProfile::kTimeLinear : SdProfile::kIndexLinear};
  auto sigma = effect_covariance(spec, grid);

  std::vector<double> delta(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) delta[i] = effect_cumulative(cell.scenario, grid[i]);

  const double snr = optimal_snr(delta, sigma);
  EstimateBundle bundle(delta, std::move(sigma));

  const auto cfb = endpoint_contrast(grid);
  const double ref_signal = cfb.apply(delta);
  const double ref_var = bundle.sigma_hat().matrix().quadratic(cfb.coeffs());
  const double ref_inv_snr = ref_var / (ref_signal * ref_signal);
  CellContext ctx{cfg, cell, std::move(bundle), {ref_signal, ref_var}, 100.0 / snr / ref_inv_snr};

  std::vector<ComparisonRow> rows;
  for (Estimand e : {Estimand::kCfb, Estimand::kOls, Estimand::kAuc}) {
    if (!selected(cfg, e)) continue;
    if (e == Estimand::kCfb) {
      rows.push_back(make_row(ctx, e, cfb, ref_signal));
      continue;
    }
    if (continuous) {
      const auto w = continuous_weight(e);
      const auto q = quadrature_contrast(w, cell.m);
      const double truth = continuous_ppr(effect_trajectory(cell.scenario), w, kTruthNodes);
      rows.push_back(make_row(ctx, e, q, truth));
    } else {
      const auto dw = e == Estimand::kOls ? ols_discrete_weights(grid) : auc_discrete_weights(grid);
      const auto v = contrast_from_weights(dw);
      rows.push_back(make_row(ctx, e, v, v.apply(delta)));
    }
  }
  return rows;
}

std::string echo(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + format_number(xs[i]);
  return s;
}

StudyTable run(const StudyConfig& cfg) {
  validate(cfg);
  std::vector<Cell> cells;
  for (auto s : cfg.scenarios) {
    for (auto m : cfg.m_values) {
      for (auto k : cfg.k_values) {
        for (auto sg : cfg.sigma_values) cells.push_back({s, m, k, sg});
      }
    }
  }

  std::vector<std::vector<ComparisonRow>> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      try {
        results[i] = evaluate_cell(cfg, cells[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  StudyTable table;
  for (auto& r : results) table.rows.insert(table.rows.end(), r.begin(), r.end());
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) {
    return std::tuple(a.scenario, a.estimand, a.m, a.k, a.sigma_end) <
           std::tuple(b.scenario, b.estimand, b.m, b.k, b.sigma_end);
  });

  std::string scen;
  for (auto s : cfg.scenarios) scen += (scen.empty() ? "" : ";") + std::string(to_string(s));
  std::string ests;
  for (auto e : cfg.estimands) ests += (ests.empty() ? "" : ";") + std::string(to_string(e));
  std::vector<double> ms(cfg.m_values.begin(), cfg.m_values.end());
  table.metadata = {
      {"version", std::string(kLibraryVersion)},
      {"scenarios", scen},
      {"estimands", ests},
      {"m", echo(ms)},
      {"k", echo(cfg.k_values)},
      {"sigma", echo(cfg.sigma_values)},
      {"rho", format_number(cfg.rho)},
      {"grid_kind", std::string(to_string(cfg.grid_kind))},
      {"smart", cfg.use_smart ? "1" : "0"},
  };
  return table;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string_view to_string(Estimand e) {
  switch (e) {
    case Estimand::kCfb: return "cfb";
    case Estimand::kOls: return "ols";
    case Estimand::kAuc: return "auc";
  }
  throw InternalError("unknown estimand");
}

Estimand parse_estimand(std::string_view name) {
  if (name == "cfb") return Estimand::kCfb;
  if (name == "ols") return Estimand::kOls;
  if (name == "auc") return Estimand::kAuc;
  throw InvalidArgument("unknown estimand '" + std::string(name) + "' (expected cfb, ols, auc)");
}

std::string_view to_string(GridKind g) {
  return g == GridKind::kEqualSpaced ? "equal" : "gl";
}

GridKind parse_grid_kind(std::string_view name) {
  if (name == "equal") return GridKind::kEqualSpaced;
  if (name == "gl") return GridKind::kGaussLegendreAugmented;
  throw InvalidArgument("unknown grid '" + std::string(name) + "' (expected equal, gl)");
}

void validate(const StudyConfig& cfg) {
  if (cfg.scenarios.empty()) throw InvalidArgument("study needs at least one scenario");
  if (cfg.estimands.empty()) throw InvalidArgument("study needs at least one estimand");
  if (cfg.m_values.empty() || cfg.k_values.empty() || cfg.sigma_values.empty()) {
    throw InvalidArgument("study needs at least one value of m, k and sigma");
  }
  const std::size_t min_m = cfg.grid_kind == GridKind::kEqualSpaced ? 2 : 3;
  for (auto m : cfg.m_values) {
    if (m < min_m || m > kMaxQuadratureOrder + 2) {
      throw InvalidArgument("visit count m = " + std::to_string(m) + " outside [" +
                            std::to_string(min_m) + ", " +
                            std::to_string(kMaxQuadratureOrder + 2) + "]");
    }
  }
  for (auto k : cfg.k_values) validate(ArWithK{cfg.rho, k, 1.0});
  for (auto s : cfg.sigma_values) {
    if (!(s > 0.0)) throw InvalidArgument("final SD sigma must be positive");
  }
}

StudyTable run_discrete_study(const StudyConfig& cfg) {
  if (cfg.grid_kind != GridKind::kEqualSpaced) {
    throw InvalidArgument("discrete study requires the equal-spaced grid");
  }
  return run(cfg);
}

StudyTable run_continuous_study(const StudyConfig& cfg) {
  if (cfg.grid_kind != GridKind::kGaussLegendreAugmented) {
    throw InvalidArgument("continuous study requires the Gauss-Legendre augmented grid");
  }
  return run(cfg);
}

StudyTable run_study(const StudyConfig& cfg) { return run(cfg); }

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

void write_study_csv(std::ostream& os, const StudyTable& table) {
  os << kStudyCsvHeader << '\n';
  for (const auto& r : table.rows) {
    os << to_string(r.scenario) << ',' << to_string(r.estimand) << ',' << r.m << ','
       << format_number(r.k) << ',' << format_number(r.sigma_end) << ','
       << to_string(r.grid_kind) << ',' << (r.smart ? 1 : 0) << ','
       << format_number(r.signal_pct) << ',' << format_number(r.se_pct) << ','
       << (r.rel_sample_size_pct ? format_number(*r.rel_sample_size_pct) : "") << ','
       << format_number(r.optimal_sample_size_pct) << '\n';
  }
}

StudyTable read_study_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kStudyCsvHeader) {
    throw ParseError("study CSV header mismatch", 1, 1);
  }
  StudyTable table;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 11) throw ParseError("expected 11 fields", row, f.size());
    auto num = [&](std::size_t col) {
      try {
        return parse_double(f[col]);
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), row, col + 1);
      }
    };
    ComparisonRow r{};
    r.scenario = parse_scenario(f[0]);
    r.estimand = parse_estimand(f[1]);
    r.m = static_cast<std::size_t>(num(2));
    r.k = num(3);
    r.sigma_end = num(4);
    r.grid_kind = parse_grid_kind(f[5]);
    r.smart = f[6] == "1";
    r.signal_pct = num(7);
    r.se_pct = num(8);
    if (!f[9].empty()) r.rel_sample_size_pct = num(9);
    r.optimal_sample_size_pct = num(10);
    table.rows.push_back(r);
  }
  return table;
}

double ols_cfb_variance_ratio(const CovarianceSpec& spec, std::size_t m) {
  const auto grid = TimeGrid::equal_spaced(m);
  const auto sigma = effect_covariance(spec, grid);
  const auto ols = contrast_from_weights(ols_discrete_weights(grid));
  const auto cfb = endpoint_contrast(grid);
  return sigma.matrix().quadratic(ols.coeffs()) / sigma.matrix().quadratic(cfb.coeffs());
}

std::vector<Table1Row> table1() {
  std::vector<Table1Row> rows;
  for (std::size_t m = 5; m <= 9; ++m) {
    const auto q = quadrature_contrast(WeightSpec::ols(), m);
    double ss = 0.0;
    for (double x : q.coeffs()) ss += x * x;
    rows.push_back({m, cs_variance_ratio(m), ss / 2.0});
  }
  return rows;
}

double exp_decay_counterexample(std::size_t m) {
  return ols_cfb_variance_ratio(ExponentialDecay{1.0, 0.5}, m);
}

}  // namespace ppr

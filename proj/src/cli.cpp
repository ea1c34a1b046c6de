#include "ppr/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include "ppr/bundle_io.hpp"
#include "ppr/errors.hpp"
#include "ppr/estimands.hpp"
#include "ppr/quadrature.hpp"
#include "ppr/study.hpp"
#include "ppr/trajectories.hpp"
#include "ppr/weights.hpp"

namespace ppr::cli {

namespace {

constexpr int kMaxDiscreteVisits = 1000;

enum class Family { kCfb, kOls, kAuc, kOther };

struct EstimandChoice {
  std::string label;
  Family family;
  WeightSpec spec;
};

std::pair<double, double> parse_pair(std::string_view s) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) throw InvalidArgument("expected 'a,b' after beta:");
  return {parse_double(s.substr(0, comma)), parse_double(s.substr(comma + 1))};
}

EstimandChoice parse_choice(const std::string& name) {
  if (name == "cfb") return {name, Family::kCfb, WeightSpec::cfb()};
  if (name == "ols") return {name, Family::kOls, WeightSpec::ols()};
  if (name == "auc") return {name, Family::kAuc, WeightSpec::auc()};
  if (name == "partial-auc") return {name, Family::kOther, WeightSpec::partial_auc()};
  if (name.starts_with("beta:")) {
    const auto [a, b] = parse_pair(std::string_view(name).substr(5));
    return {name, Family::kOther, WeightSpec::beta(a, b)};
  }
  if (name.starts_with("power-auc:")) {
    return {name, Family::kOther,
            WeightSpec::power_auc(parse_double(std::string_view(name).substr(10)))};
  }
  throw InvalidArgument("unknown estimand '" + name +
                        "' (expected cfb, ols, auc, beta:a,b, partial-auc, power-auc:alpha)");
}

DiscreteWeights discrete_weights(const EstimandChoice& c, const TimeGrid& grid) {
  switch (c.family) {
    case Family::kCfb: return cfb_discrete_weights(grid);
    case Family::kOls: return ols_discrete_weights(grid);
    case Family::kAuc: return auc_discrete_weights(grid);
    case Family::kOther: return interval_mass_weights(c.spec, grid);
  }
  throw InternalError("unknown weight family");
}

std::string fixed2(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::size_t thread_cap() {
  const char* env = std::getenv("PPR_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  const std::string_view s(env);
  std::size_t n = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || n == 0) {
    throw InvalidArgument("PPR_THREADS must be a positive integer, got '" + std::string(s) + "'");
  }
  return n;
}

// ---- weights -------------------------------------------------------------

struct WeightsArgs {
  std::string estimand;
  int m = 5;
  std::string grid = "equal";
};

void cmd_weights(const WeightsArgs& a, std::ostream& out) {
  const auto choice = parse_choice(a.estimand);
  const auto kind = parse_grid_kind(a.grid);
  out << "t,w,v\n";
  if (kind == GridKind::kEqualSpaced) {
    if (a.m < 2 || a.m > kMaxDiscreteVisits) {
      throw InvalidArgument("--m must be in [2, " + std::to_string(kMaxDiscreteVisits) + "]");
    }
    const auto grid = TimeGrid::equal_spaced(static_cast<std::size_t>(a.m));
    const auto dw = discrete_weights(choice, grid);
    const auto v = contrast_from_weights(dw);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out << format_number(grid[i]) << ',' << (i ? format_number(dw.values()[i - 1]) : "") << ','
          << format_number(v[i]) << '\n';
    }
  } else {
    if (a.m < 3 || a.m > static_cast<int>(kMaxQuadratureOrder + 2)) {
      throw InvalidArgument("--m must be in [3, " + std::to_string(kMaxQuadratureOrder + 2) +
                            "] for the gl grid");
    }
    const auto q = quadrature_contrast(choice.spec, static_cast<std::size_t>(a.m));
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double t = q.grid()[i];
      out << format_number(t) << ',' << format_number(choice.spec(t)) << ','
          << format_number(q[i]) << '\n';
    }
  }
}

// ---- table1 --------------------------------------------------------------

void cmd_table1(std::ostream& out) {
  out << "m,discrete,continuous,discrete_full,continuous_full\n";
  for (const auto& r : table1()) {
    out << r.m << ',' << fixed2(r.discrete_ratio) << ',' << fixed2(r.continuous_ratio) << ','
        << format_number(r.discrete_ratio) << ',' << format_number(r.continuous_ratio) << '\n';
  }
}

// ---- study ---------------------------------------------------------------

struct StudyArgs {
  std::string out;
  std::vector<std::string> scenarios;
  std::vector<int> m;
  std::vector<double> k;
  std::vector<double> sigma;
  std::optional<double> rho;
  std::string grid = "equal";
  std::vector<std::string> estimands;
  bool smart = false;
};

void cmd_study(const StudyArgs& a, std::ostream& err) {
  StudyConfig cfg;
  if (!a.scenarios.empty()) {
    cfg.scenarios.clear();
    for (const auto& s : a.scenarios) cfg.scenarios.push_back(parse_scenario(s));
  }
  if (!a.m.empty()) {
    cfg.m_values.clear();
    for (int m : a.m) {
      if (m < 0) throw InvalidArgument("--m values must be positive");
      cfg.m_values.push_back(static_cast<std::size_t>(m));
    }
  }
  if (!a.k.empty()) cfg.k_values = a.k;
  if (!a.sigma.empty()) cfg.sigma_values = a.sigma;
  if (a.rho) cfg.rho = *a.rho;
  if (!a.estimands.empty()) {
    cfg.estimands.clear();
    for (const auto& e : a.estimands) cfg.estimands.push_back(parse_estimand(e));
  }
  cfg.grid_kind = parse_grid_kind(a.grid);
  cfg.use_smart = a.smart;
  cfg.threads = thread_cap();
  validate(cfg);

  std::ofstream file(a.out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + a.out + "' for writing");
  const auto table = run_study(cfg);
  write_study_csv(file, table);
  file.close();
  if (!file) throw IoError("failed writing '" + a.out + "'");

  err << "wrote " << table.rows.size() << " rows to " << a.out << '\n';
  for (const auto& [key, value] : table.metadata) err << "  " << key << " = " << value << '\n';
}

// ---- estimate ------------------------------------------------------------

struct EstimateArgs {
  std::string effects;
  std::string cov;
  std::vector<std::string> estimands;
  std::string reference;
  std::string kind = "discrete";
  bool smart = false;
};

void cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  if (a.kind != "discrete" && a.kind != "quadrature") {
    throw InvalidArgument("--kind must be discrete or quadrature");
  }
  std::vector<EstimandChoice> choices;
  for (const auto& e : a.estimands) choices.push_back(parse_choice(e));
  std::optional<EstimandChoice> reference;
  if (!a.reference.empty()) reference = parse_choice(a.reference);

  const auto bundle = load_bundle(a.effects, a.cov);
  const auto& grid = bundle.grid();

  auto evaluate = [&](const EstimandChoice& c) {
    std::optional<Contrast> contrast;
    if (a.kind == "quadrature") {
      const auto q = quadrature_contrast(c.spec, grid.size());
      if (!q.grid().matches(grid, 1e-9)) {
        throw InvalidArgument("visit times are not the " + std::to_string(grid.size()) +
                              "-point Gauss-Legendre augmented grid required by --kind quadrature");
      }
      contrast.emplace(grid, std::vector<double>(q.coeffs().begin(), q.coeffs().end()),
                       Contrast::Kind::kQuadrature);
    } else {
      contrast.emplace(contrast_from_weights(discrete_weights(c, grid)));
    }
    return a.smart ? delta_ppr_smart(bundle, *contrast, c.label)
                   : delta_ppr_estimate(bundle, *contrast, c.label);
  };

  std::optional<PprResult> ref;
  if (reference) ref = evaluate(*reference);

  out << "estimand,point,se,z_squared";
  if (ref) out << ",signal_pct,se_pct,z_squared_pct";
  out << '\n';
  auto pct = [](double num, double den) {
    return den != 0.0 && std::isfinite(num / den) ? format_number(100.0 * num / den)
                                                  : std::string();
  };
  auto emit = [&](const PprResult& r) {
    out << r.estimand_id << ',' << format_number(r.point) << ',' << format_number(r.se) << ','
        << format_number(r.z_squared);
    if (ref) {
      out << ',' << pct(r.point, ref->point) << ',' << pct(r.se, ref->se) << ','
          << pct(r.z_squared, ref->z_squared);
    }
    out << '\n';
  };
  const bool ref_listed =
      reference && std::any_of(choices.begin(), choices.end(),
                               [&](const auto& c) { return c.label == reference->label; });
  if (ref && !ref_listed) emit(*ref);
  for (const auto& c : choices) emit(evaluate(c));
}

// ---- scenario ------------------------------------------------------------

void cmd_scenario(const std::string& name, int points, std::ostream& out) {
  const auto s = parse_scenario(name);
  if (points < 2) throw InvalidArgument("--points must be at least 2");
  const auto f = control_mean();
  const auto h = treated_mean(s);
  out << "t,f,h,delta,f_prime,h_prime,delta_prime\n";
  for (int i = 0; i < points; ++i) {
    const double t = i == points - 1 ? 1.0 : static_cast<double>(i) / (points - 1);
    out << format_number(t) << ',' << format_number(f(t)) << ',' << format_number(h(t)) << ','
        << format_number(effect_cumulative(s, t)) << ',' << format_number(f.derivative(t)) << ','
        << format_number(h.derivative(t)) << ',' << format_number(effect_rate(s, t)) << '\n';
  }
}

// ---- gl-nodes ------------------------------------------------------------

void cmd_gl_nodes(int n, std::ostream& out) {
  if (n < 1 || n > static_cast<int>(kMaxQuadratureOrder)) {
    throw InvalidArgument("--n must be in [1, " + std::to_string(kMaxQuadratureOrder) + "]");
  }
  const auto& s = gauss_legendre(static_cast<std::size_t>(n));
  out << "i,x,a\n";
  for (std::size_t i = 0; i < s.order(); ++i) {
    out << i + 1 << ',' << format_number(s.nodes[i]) << ',' << format_number(s.weights[i]) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Principal progression rate estimands, contrasts and study tables", "ppr"};
  app.require_subcommand(1);
  std::function<void()> action;

  WeightsArgs wa;
  auto* weights = app.add_subcommand("weights", "Discrete weights and contrast coefficients");
  weights->add_option("--estimand", wa.estimand,
                      "cfb | ols | auc | beta:a,b | partial-auc | power-auc:alpha")
      ->required();
  weights->add_option("--m", wa.m, "Number of visits")->capture_default_str();
  weights->add_option("--grid", wa.grid, "equal | gl")->capture_default_str();
  weights->callback([&] { action = [&] { cmd_weights(wa, out); }; });

  auto* t1 = app.add_subcommand("table1", "Compound-symmetry variance ratios, m = 5..9");
  t1->callback([&] { action = [&] { cmd_table1(out); }; });

  StudyArgs sa;
  auto* study = app.add_subcommand("study", "Run the scenario x m x k x sigma comparison study");
  study->add_option("--out", sa.out, "Output CSV path")->required();
  study->add_option("--scenarios", sa.scenarios, "Comma-separated scenario ids")->delimiter(',');
  study->add_option("--m", sa.m, "Comma-separated visit counts")->delimiter(',');
  study->add_option("--k", sa.k, "Comma-separated k values (rho <= k <= 1)")->delimiter(',');
  study->add_option("--sigma", sa.sigma, "Comma-separated final SDs")->delimiter(',');
  study->add_option("--rho", sa.rho, "End-to-end correlation");
  study->add_option("--grid", sa.grid, "equal | gl")->capture_default_str();
  study->add_option("--estimands", sa.estimands, "Comma-separated subset of cfb,ols,auc")
      ->delimiter(',');
  study->add_flag("--smart", sa.smart, "Use variance-minimizing first coefficients");
  study->callback([&] { action = [&] { cmd_study(sa, err); }; });

  EstimateArgs ea;
  auto* estimate = app.add_subcommand("estimate", "PPR difference estimates from an estimate bundle");
  estimate->add_option("--effects", ea.effects, "CSV with header t,delta")->required();
  estimate->add_option("--cov", ea.cov, "CSV m x m covariance, no header")->required();
  estimate->add_option("--estimand", ea.estimands, "Estimand (repeatable)")->required();
  estimate->add_option("--reference", ea.reference, "Reference estimand for percentages");
  estimate->add_option("--kind", ea.kind, "discrete | quadrature")->capture_default_str();
  estimate->add_flag("--smart", ea.smart, "Use variance-minimizing first coefficient");
  estimate->callback([&] { action = [&] { cmd_estimate(ea, out); }; });

  std::string scenario_name;
  int points = 101;
  auto* scenario = app.add_subcommand("scenario", "Mean trajectories of a scenario");
  scenario->add_option("scenario", scenario_name, "decreasing | constant | increasing | incthendec")
      ->required();
  scenario->add_option("--points", points, "Number of uniform time points")->capture_default_str();
  scenario->callback([&] { action = [&] { cmd_scenario(scenario_name, points, out); }; });

  int order = 0;
  auto* gl = app.add_subcommand("gl-nodes", "Print a Gauss-Legendre rule");
  gl->add_option("--n", order, "Order")->required();
  gl->callback([&] { action = [&] { cmd_gl_nodes(order, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    action();
    return kSuccess;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace ppr::cli

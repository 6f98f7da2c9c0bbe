#include "vcrisk/config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace vcrisk;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string grid;
  std::optional<Index> n;
  std::string csv;
  std::optional<double> beta;
  std::optional<int> m;
  std::string order;
  std::string first;
  std::string second;
  bool numeric = false;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError({"cannot write output file '" + path + "'"});
  out << text;
}

std::string output_path(const Options& opt, const ScenarioConfig& cfg) {
  return opt.out.empty() ? cfg.output : opt.out;
}

ScenarioConfig load(const Options& opt) {
  if (opt.config.empty()) throw ConfigError({"--config is required"});
  auto cfg = load_scenario_config(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.grid.empty()) cfg.beta_grid = parse_grid(opt.grid);
  return cfg;
}

std::vector<double> levels(const ScenarioConfig& cfg, bool prefer_grid) {
  if (prefer_grid && !cfg.beta_grid.empty()) return cfg.beta_grid;
  if (cfg.beta) return {*cfg.beta};
  if (!cfg.beta_grid.empty()) return cfg.beta_grid;
  throw ConfigError({"config: missing field 'beta' (or 'beta_grid')"});
}

void cmd_measure(const Options& opt) {
  const auto cfg = load(opt);
  const double beta = levels(cfg, false).front();
  json out;
  if (cfg.scenarios.size() == 1) {
    out = to_json(contributions(cfg.request(0, beta), cfg.quadrature));
  } else {
    out = json::array();
    for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
      out.push_back(to_json(contributions(cfg.request(s, beta), cfg.quadrature)));
    }
  }
  emit(out.dump(2) + "\n", output_path(opt, cfg));
}

const std::vector<std::string> kSweepColumns = {"var",           "es",          "vcovar",        "mcovar",
                                                "vcoes",         "mcoes",       "delta_vcovar",  "delta_r_vcovar",
                                                "delta_vcoes",   "delta_r_vcoes"};

std::vector<double> sweep_values(const MeasureReport& r) {
  return {r.var,          r.es,           r.vcovar,      r.mcovar,       r.vcoes,
          r.mcoes,        r.delta_vcovar, r.delta_r_vcovar, r.delta_vcoes, r.delta_r_vcoes};
}

void cmd_sweep(const Options& opt) {
  const auto cfg = load(opt);
  if (cfg.beta_grid.empty()) throw ConfigError({"sweep: missing field 'beta_grid' (or --grid)"});
  const bool paired = cfg.scenarios.size() == 2;
  std::ostringstream csv;
  csv << "beta";
  for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
    for (const auto& col : kSweepColumns) csv << ',' << col << (paired ? "_" + std::to_string(s + 1) : "");
  }
  csv << '\n';
  for (double beta : cfg.beta_grid) {
    csv << format12(beta);
    for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
      for (double v : sweep_values(contributions(cfg.request(s, beta), cfg.quadrature))) csv << ',' << format12(v);
    }
    csv << '\n';
  }
  emit(csv.str(), output_path(opt, cfg));
}

void cmd_oracle(const Options& opt) {
  const auto cfg = load(opt);
  const Index n = opt.n.value_or(cfg.oracle_n);
  McOptions mc;
  mc.bootstrap = cfg.bootstrap;
  std::ostringstream csv;
  csv << "scenario,beta,measure,closed_form,monte_carlo,std_error,z\n";
  struct Row {
    const char* name;
    StressMode mode;
    McStatistic stat;
  };
  const Row rows[] = {{"vcovar", StressMode::AtLeastOne, McStatistic::Quantile},
                      {"mcovar", StressMode::All, McStatistic::Quantile},
                      {"vcoes", StressMode::AtLeastOne, McStatistic::TailMean},
                      {"mcoes", StressMode::All, McStatistic::TailMean}};
  for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
    for (double beta : levels(cfg, true)) {
      const auto req = cfg.request(s, beta);
      for (std::size_t k = 0; k < 4; ++k) {
        const auto& row = rows[k];
        const double exact = row.stat == McStatistic::Quantile ? conditional_var(req, row.mode)
                                                               : conditional_es(req, row.mode, cfg.quadrature);
        // Every measure reuses the same sample so the table is reproducible from the seed alone.
        const auto est = mc_measure(req.copula, req.marginal, req.alpha, beta, row.mode, row.stat, n,
                                    RngSpec{cfg.seed, s}, mc);
        const double z = est.std_error > 0.0 ? (exact - est.estimate) / est.std_error : 0.0;
        csv << s + 1 << ',' << format12(beta) << ',' << row.name << ',' << format12(exact) << ','
            << format12(est.estimate) << ',' << format12(est.std_error) << ',' << format12(z) << '\n';
      }
    }
  }
  emit(csv.str(), output_path(opt, cfg));
}

void cmd_backtest(const Options& opt) {
  if (opt.csv.empty()) throw ConfigError({"backtest: --csv is required"});
  if (!opt.beta) throw ConfigError({"backtest: --beta is required"});
  if (!(*opt.beta > 0.0 && *opt.beta < 1.0)) throw ConfigError({"backtest: --beta must lie in (0, 1)"});
  std::optional<ForecastSeries> series;
  try {
    series = read_forecast_csv(opt.csv);
  } catch (const DomainError& e) {
    throw ConfigError({std::string("backtest: ") + e.what()});
  }
  if (opt.m && *opt.m != series->levels()) {
    throw ConfigError({"backtest: --m " + std::to_string(*opt.m) + " does not match the " +
                       std::to_string(series->levels()) + " forecast columns"});
  }
  const auto v = violations(*series);
  const auto result = nass_test(v.Z, *opt.beta, series->levels());
  emit(to_json(result, v.violation_rate).dump(2) + "\n", opt.out);
}

Marginal marginal_arg(const std::string& text, const std::string& flag) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({flag + ": " + e.what()});
  }
  std::vector<std::string> problems;
  return parse_marginal(j, flag, ".", problems);
}

void cmd_order_check(const Options& opt) {
  std::optional<Marginal> first, second;
  std::string order = opt.order;
  if (!opt.config.empty()) {
    std::ifstream in(opt.config);
    if (!in) throw ConfigError({"cannot open config file '" + opt.config + "'"});
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError({"config file '" + opt.config + "': " + e.what()});
    }
    const auto dir = std::filesystem::path(opt.config).parent_path();
    const std::string base = dir.empty() ? "." : dir.string();
    std::vector<std::string> problems;
    if (!doc.contains("marginals") || !doc["marginals"].is_array() || doc["marginals"].size() != 2) {
      problems.push_back("config: missing field 'marginals' (array of two marginals)");
    } else {
      try {
        first = parse_marginal(doc["marginals"][0], "config.marginals[0]", base, problems);
      } catch (const ConfigError&) {
      }
      try {
        second = parse_marginal(doc["marginals"][1], "config.marginals[1]", base, problems);
      } catch (const ConfigError&) {
      }
    }
    if (order.empty() && doc.contains("order") && doc["order"].is_string()) order = doc["order"].get<std::string>();
    if (!problems.empty()) throw ConfigError(problems);
  }
  if (!opt.first.empty()) first = marginal_arg(opt.first, "--first");
  if (!opt.second.empty()) second = marginal_arg(opt.second, "--second");
  if (!first || !second) throw ConfigError({"order-check: two marginals are required (--config or --first/--second)"});
  if (order.empty()) throw ConfigError({"order-check: missing field 'order'"});
  StochasticOrder which;
  try {
    which = parse_order(order);
  } catch (const DomainError& e) {
    throw ConfigError({e.what()});
  }
  const bool closed_form =
      !opt.numeric && first->kind() == MarginalKind::Pareto && second->kind() == MarginalKind::Pareto;
  const auto verdict = closed_form ? pareto_order(which, *first, *second) : numeric_order(which, *first, *second);
  json out = to_json(verdict);
  out["method"] = closed_form ? "closed_form" : "numeric";
  out["first"] = first->name();
  out["second"] = second->name();
  emit(out.dump(2) + "\n", opt.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vcrisk: vulnerability conditional risk measures"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON configuration file");
    sub->add_option("--out", opt.out, "Output file (default: stdout)");
  };
  auto* measure = app.add_subcommand("measure", "All measures and contributions at one beta (JSON)");
  add_common(measure);
  measure->add_option("--seed", opt.seed, "RNG seed override");
  auto* sweep = app.add_subcommand("sweep", "Measures over a beta grid (CSV)");
  add_common(sweep);
  sweep->add_option("--grid", opt.grid, "Beta grid start:stop:step");
  sweep->add_option("--seed", opt.seed, "RNG seed override");
  auto* oracle = app.add_subcommand("oracle", "Closed form against Monte Carlo (CSV)");
  add_common(oracle);
  oracle->add_option("--seed", opt.seed, "RNG seed override");
  oracle->add_option("--grid", opt.grid, "Beta grid start:stop:step");
  oracle->add_option("--n", opt.n, "Monte Carlo sample size")->check(CLI::PositiveNumber);
  auto* backtest = app.add_subcommand("backtest", "Violation rate and Nass test of a forecast CSV (JSON)");
  backtest->add_option("--csv", opt.csv, "Forecast CSV t,condition_met,y,f1..fm");
  backtest->add_option("--beta", opt.beta, "Base confidence level");
  backtest->add_option("--m", opt.m, "Number of forecast levels (checked against the file)");
  backtest->add_option("--out", opt.out, "Output file (default: stdout)");
  auto* order = app.add_subcommand("order-check", "Stochastic order between two marginals (JSON)");
  add_common(order);
  order->add_option("--order", opt.order, "st, icx, disp, star or eps");
  order->add_option("--first", opt.first, "First marginal as inline JSON");
  order->add_option("--second", opt.second, "Second marginal as inline JSON");
  order->add_flag("--numeric", opt.numeric, "Decide on a grid even for Pareto pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*measure) cmd_measure(opt);
    if (*sweep) cmd_sweep(opt);
    if (*oracle) cmd_oracle(opt);
    if (*backtest) cmd_backtest(opt);
    if (*order) cmd_order_check(opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

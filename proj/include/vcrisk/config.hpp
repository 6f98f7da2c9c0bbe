#pragma once

#include "vcrisk/backtest.hpp"
#include "vcrisk/measures.hpp"
#include "vcrisk/orders.hpp"
#include "vcrisk/sampling.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace vcrisk {

/// Invalid configuration. what() lists every problem found, one per line.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct Scenario {
  Copula copula;
  Marginal marginal;
};

struct ScenarioConfig {
  std::vector<Scenario> scenarios;  ///< one or two
  std::optional<StressLevels> alpha;
  std::optional<double> beta;
  std::vector<double> beta_grid;
  QuadratureSpec quadrature;
  std::uint64_t seed = 0;
  std::string output;
  Index oracle_n = 1000000;
  int bootstrap = 500;

  MeasureRequest request(std::size_t scenario, double b) const;
};

/// Parses a scenario document; relative marginal paths resolve against base_dir.
ScenarioConfig parse_scenario_config(const nlohmann::json& doc, const std::string& base_dir = ".");
ScenarioConfig load_scenario_config(const std::string& path);

Copula parse_copula(const nlohmann::json& j, const std::string& where, std::vector<std::string>& problems);
Marginal parse_marginal(const nlohmann::json& j, const std::string& where, const std::string& base_dir,
                        std::vector<std::string>& problems);

/// Reads a one-column CSV with header `loss`.
std::vector<double> read_loss_csv(const std::string& path);

/// "start:stop:step" to the inclusive grid of levels.
std::vector<double> parse_grid(const std::string& text);

/// Round to 12 significant digits, the precision of every number the CLI prints.
double round12(double x);
std::string format12(double x);

nlohmann::json to_json(const MeasureReport& report);
nlohmann::json to_json(const NassResult& result, double violation_rate);
nlohmann::json to_json(const OrderVerdict& verdict);
nlohmann::json to_json(const McEstimate& estimate);

}  // namespace vcrisk

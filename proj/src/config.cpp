#include "vcrisk/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace vcrisk {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out = "invalid configuration:";
  for (const auto& line : lines) out += "\n  " + line;
  return out;
}

const json* field(const json& j, const std::string& key, const std::string& where,
                  std::vector<std::string>& problems) {
  if (!j.is_object()) {
    problems.push_back(where + ": expected an object");
    return nullptr;
  }
  auto it = j.find(key);
  if (it == j.end()) {
    problems.push_back(where + ": missing field '" + key + "'");
    return nullptr;
  }
  return &*it;
}

std::optional<double> number(const json& j, const std::string& key, const std::string& where,
                             std::vector<std::string>& problems) {
  const json* v = field(j, key, where, problems);
  if (!v) return std::nullopt;
  if (!v->is_number()) {
    problems.push_back(where + "." + key + ": expected a number");
    return std::nullopt;
  }
  return v->get<double>();
}

std::optional<std::string> text(const json& j, const std::string& key, const std::string& where,
                                std::vector<std::string>& problems) {
  const json* v = field(j, key, where, problems);
  if (!v) return std::nullopt;
  if (!v->is_string()) {
    problems.push_back(where + "." + key + ": expected a string");
    return std::nullopt;
  }
  return v->get<std::string>();
}

template <typename F>
auto guarded(std::vector<std::string>& problems, const std::string& where, F&& f) -> std::optional<decltype(f())> {
  try {
    return f();
  } catch (const Error& e) {
    problems.push_back(where + ": " + e.what());
  }
  return std::nullopt;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(join(problems)), problems_(std::move(problems)) {}

MeasureRequest ScenarioConfig::request(std::size_t scenario, double b) const {
  return {scenarios.at(scenario).copula, scenarios.at(scenario).marginal, alpha.value(), b};
}

Copula parse_copula(const json& j, const std::string& where, std::vector<std::string>& problems) {
  const auto family = text(j, "family", where, problems);
  const auto dim = number(j, "dim", where, problems);
  if (!family || !dim) throw ConfigError(problems);
  if (*dim != std::floor(*dim) || *dim < 1) {
    problems.push_back(where + ".dim: expected a positive integer");
    throw ConfigError(problems);
  }
  const int d = static_cast<int>(*dim);
  std::optional<Copula> c;
  if (*family == "independence") {
    c = guarded(problems, where, [&] { return Copula::independence(d); });
  } else if (*family == "gumbel") {
    const auto theta = number(j, "theta", where, problems);
    if (theta) c = guarded(problems, where, [&] { return Copula::gumbel(d, *theta); });
  } else {
    problems.push_back(where + ".family: unknown copula family '" + *family +
                       "' (expected gumbel or independence)");
  }
  if (!c) throw ConfigError(problems);
  return *c;
}

std::vector<double> read_loss_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open loss file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DomainError("loss file '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "loss") throw DomainError("loss file '" + path + "' must have the header 'loss'");
  std::vector<double> values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != line.size() || !std::isfinite(v)) {
      throw DomainError(path + ":" + std::to_string(line_no) + ": not a number: '" + line + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw DomainError("loss file '" + path + "' has no observations");
  return values;
}

Marginal parse_marginal(const json& j, const std::string& where, const std::string& base_dir,
                        std::vector<std::string>& problems) {
  const auto kind = text(j, "kind", where, problems);
  if (!kind) throw ConfigError(problems);
  std::optional<Marginal> m;
  if (*kind == "pareto") {
    const auto a = number(j, "a", where, problems);
    const auto k = number(j, "k", where, problems);
    if (a && k) m = guarded(problems, where, [&] { return Marginal::pareto(*a, *k); });
  } else if (*kind == "empirical") {
    const auto path = text(j, "path", where, problems);
    if (path) {
      std::filesystem::path p(*path);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      m = guarded(problems, where, [&] { return Marginal::empirical(read_loss_csv(p.string())); });
    }
  } else {
    problems.push_back(where + ".kind: unknown marginal kind '" + *kind + "' (expected pareto or empirical)");
  }
  if (!m) throw ConfigError(problems);
  return *m;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const auto end = spec.find(':', start);
    const std::string token = spec.substr(start, end == std::string::npos ? std::string::npos : end - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size()) throw ConfigError({"grid '" + spec + "': expected start:stop:step"});
    parts.push_back(v);
    if (end == std::string::npos) {
      if (i != 2) throw ConfigError({"grid '" + spec + "': expected start:stop:step"});
      break;
    }
    if (i == 2) throw ConfigError({"grid '" + spec + "': expected start:stop:step"});
    start = end + 1;
  }
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(step > 0.0) || hi < lo) throw ConfigError({"grid '" + spec + "': need step > 0 and stop >= start"});
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 1000000) throw ConfigError({"grid '" + spec + "': too many points"});
  std::vector<double> grid;
  for (long i = 0; i < count; ++i) grid.push_back(round12(lo + static_cast<double>(i) * step));
  return grid;
}

ScenarioConfig parse_scenario_config(const json& doc, const std::string& base_dir) {
  std::vector<std::string> problems;
  ScenarioConfig cfg;
  if (!doc.is_object()) throw ConfigError({"config: expected a JSON object"});

  auto parse_pair = [&](const json& j, const std::string& where) {
    std::optional<Copula> c;
    std::optional<Marginal> m;
    const std::size_t before = problems.size();
    if (const json* cj = field(j, "copula", where, problems)) {
      try {
        c = parse_copula(*cj, where + ".copula", problems);
      } catch (const ConfigError&) {
      }
    }
    if (const json* mj = field(j, "marginal", where, problems)) {
      try {
        m = parse_marginal(*mj, where + ".marginal", base_dir, problems);
      } catch (const ConfigError&) {
      }
    }
    if (c && m && problems.size() == before) cfg.scenarios.push_back({*c, *m});
  };

  if (doc.contains("scenarios")) {
    const json& list = doc["scenarios"];
    if (!list.is_array() || list.empty() || list.size() > 2) {
      problems.push_back("scenarios: expected an array of one or two scenarios");
    } else {
      for (std::size_t i = 0; i < list.size(); ++i) parse_pair(list[i], "scenarios[" + std::to_string(i) + "]");
    }
  } else {
    parse_pair(doc, "config");
  }

  if (const json* a = field(doc, "alpha", "config", problems)) {
    if (!a->is_array() || a->empty() || !std::all_of(a->begin(), a->end(), [](const json& x) { return x.is_number(); })) {
      problems.push_back("config.alpha: expected a non-empty array of numbers");
    } else {
      Vector v(static_cast<Index>(a->size()));
      for (std::size_t i = 0; i < a->size(); ++i) v[static_cast<Index>(i)] = (*a)[i].get<double>();
      cfg.alpha = guarded(problems, "config.alpha", [&] { return StressLevels(v); });
    }
  }
  if (cfg.alpha) {
    for (std::size_t i = 0; i < cfg.scenarios.size(); ++i) {
      if (cfg.scenarios[i].copula.dim() != cfg.alpha->size() + 1) {
        problems.push_back("scenario " + std::to_string(i + 1) + ": copula dim " +
                           std::to_string(cfg.scenarios[i].copula.dim()) + " must equal len(alpha) + 1 = " +
                           std::to_string(cfg.alpha->size() + 1));
      }
    }
  }

  auto check_level = [&](double b, const std::string& where) {
    if (!(b > 0.0 && b < 1.0)) problems.push_back(where + ": confidence level must lie in (0, 1)");
  };
  if (doc.contains("beta")) {
    if (!doc["beta"].is_number()) {
      problems.push_back("config.beta: expected a number");
    } else {
      cfg.beta = doc["beta"].get<double>();
      check_level(*cfg.beta, "config.beta");
    }
  }
  if (doc.contains("beta_grid")) {
    const json& g = doc["beta_grid"];
    try {
      if (g.is_string()) {
        cfg.beta_grid = parse_grid(g.get<std::string>());
      } else if (g.is_array() && std::all_of(g.begin(), g.end(), [](const json& x) { return x.is_number(); })) {
        for (const auto& x : g) cfg.beta_grid.push_back(x.get<double>());
      } else {
        problems.push_back("config.beta_grid: expected \"start:stop:step\" or an array of numbers");
      }
    } catch (const ConfigError& e) {
      problems.push_back("config.beta_grid: " + e.problems().front());
    }
    for (double b : cfg.beta_grid) check_level(b, "config.beta_grid");
  }

  if (doc.contains("quadrature")) {
    const json& q = doc["quadrature"];
    if (!q.is_object()) {
      problems.push_back("config.quadrature: expected an object");
    } else {
      if (q.contains("points")) {
        if (!q["points"].is_number_integer() || q["points"].get<int>() < 1 || q["points"].get<int>() > 200) {
          problems.push_back("config.quadrature.points: expected an integer in 1..200");
        } else {
          cfg.quadrature.points = q["points"].get<int>();
        }
      }
      if (q.contains("rel_tol")) {
        if (!q["rel_tol"].is_number() || !(q["rel_tol"].get<double>() > 0.0)) {
          problems.push_back("config.quadrature.rel_tol: expected a positive number");
        } else {
          cfg.quadrature.rel_tol = q["rel_tol"].get<double>();
        }
      }
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      problems.push_back("config.seed: expected a non-negative integer");
    } else {
      cfg.seed = doc["seed"].get<std::uint64_t>();
    }
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) {
      problems.push_back("config.output: expected a string");
    } else {
      cfg.output = doc["output"].get<std::string>();
    }
  }
  if (doc.contains("oracle")) {
    const json& o = doc["oracle"];
    if (o.contains("n")) {
      if (!o["n"].is_number_unsigned() || o["n"].get<std::uint64_t>() < 1) {
        problems.push_back("config.oracle.n: expected a positive integer");
      } else {
        cfg.oracle_n = o["n"].get<Index>();
      }
    }
    if (o.contains("bootstrap")) {
      if (!o["bootstrap"].is_number_unsigned()) {
        problems.push_back("config.oracle.bootstrap: expected a non-negative integer");
      } else {
        cfg.bootstrap = o["bootstrap"].get<int>();
      }
    }
  }

  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({"config file '" + path + "': " + e.what()});
  }
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_scenario_config(doc, dir.empty() ? "." : dir.string());
}

std::string format12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format12(x));
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(round12(x)) : json(nullptr); }

json numbers(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number_or_null(x));
  return out;
}

}  // namespace

json to_json(const MeasureReport& r) {
  return json{{"beta", number_or_null(r.beta)},
              {"var", number_or_null(r.var)},
              {"es", number_or_null(r.es)},
              {"vcovar", number_or_null(r.vcovar)},
              {"mcovar", number_or_null(r.mcovar)},
              {"vcoes", number_or_null(r.vcoes)},
              {"mcoes", number_or_null(r.mcoes)},
              {"delta_vcovar", number_or_null(r.delta_vcovar)},
              {"delta_r_vcovar", number_or_null(r.delta_r_vcovar)},
              {"delta_vcoes", number_or_null(r.delta_vcoes)},
              {"delta_r_vcoes", number_or_null(r.delta_r_vcoes)},
              {"covar", numbers(r.covar)},
              {"delta_i_vcovar", numbers(r.delta_i_vcovar)},
              {"delta_i_r_vcovar", numbers(r.delta_i_r_vcovar)}};
}

json to_json(const NassResult& r, double violation_rate) {
  return json{{"N", r.N},
              {"O", r.O},
              {"S_m", number_or_null(r.S_m)},
              {"c", number_or_null(r.c)},
              {"nu", number_or_null(r.nu)},
              {"p_value", number_or_null(r.p_value)},
              {"violation_rate", number_or_null(violation_rate)}};
}

json to_json(const OrderVerdict& v) {
  json out{{"order", to_string(v.order)},
           {"holds", v.holds},
           {"max_violation", number_or_null(v.max_violation)},
           {"vacuous", v.vacuous}};
  if (v.witness) {
    json w{{"u", number_or_null(v.witness->u)}, {"magnitude", number_or_null(v.witness->magnitude)}};
    if (v.witness->v) w["v"] = number_or_null(*v.witness->v);
    out["witness"] = w;
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

json to_json(const McEstimate& e) {
  return json{{"estimate", number_or_null(e.estimate)}, {"std_error", number_or_null(e.std_error)}, {"hits", e.hits}};
}

}  // namespace vcrisk

#include "vcrisk/backtest.hpp"

#include "vcrisk/chi_square.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vcrisk {

ForecastSeries::ForecastSeries(std::vector<ForecastRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw DomainError("forecast series is empty");
  m_ = static_cast<int>(rows_.front().forecasts.size());
  if (m_ < 1) throw DomainError("forecast series needs at least one forecast level");
  for (const auto& row : rows_) {
    if (static_cast<int>(row.forecasts.size()) != m_) {
      throw DomainError("row t=" + std::to_string(row.t) + " has a different number of forecasts");
    }
    for (int j = 1; j < m_; ++j) {
      if (row.forecasts[j] < row.forecasts[j - 1]) {
        throw DomainError("forecasts at row t=" + std::to_string(row.t) +
                          " are not nondecreasing across levels");
      }
    }
  }
}

std::vector<double> beta_grid(double beta, int m) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  if (m < 1) throw DomainError("m must be at least 1");
  std::vector<double> grid(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) grid[j] = beta + j * (1.0 - beta) / m;
  return grid;
}

ViolationSummary violations(const ForecastSeries& series) {
  ViolationSummary out;
  int first_level = 0;
  for (const auto& row : series.rows()) {
    if (!row.condition_met) continue;
    std::vector<int> hit(row.forecasts.size());
    int z = 0;
    for (std::size_t j = 0; j < hit.size(); ++j) {
      hit[j] = row.y > row.forecasts[j] ? 1 : 0;
      z += hit[j];
    }
    first_level += hit[0];
    out.indicators.push_back(std::move(hit));
    out.Z.push_back(z);
  }
  out.N = static_cast<Index>(out.Z.size());
  if (out.N == 0) throw DomainError("no rows with condition_met = 1: empty conditional sample");
  out.violation_rate = static_cast<double>(first_level) / static_cast<double>(out.N);
  return out;
}

NassResult nass_test(const std::vector<int>& Z, double beta, int m) {
  if (Z.empty()) throw DomainError("Nass test needs N >= 1 observations");
  const auto grid = beta_grid(beta, m);

  // Cells j = 0..m with P(Z = j) = beta_{j+1} - beta_j, beta_0 = 0, beta_{m+1} = 1.
  std::vector<double> prob(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) {
    const double lo = (j == 0) ? 0.0 : grid[j - 1];
    const double hi = (j == m) ? 1.0 : grid[j];
    prob[j] = hi - lo;
    if (!(prob[j] > 0.0)) throw DomainError("zero cell probability in the Nass test");
  }

  NassResult out;
  out.N = static_cast<Index>(Z.size());
  out.O.assign(static_cast<std::size_t>(m) + 1, 0);
  for (int z : Z) {
    if (z < 0 || z > m) throw DomainError("violation count " + std::to_string(z) + " outside 0..m");
    ++out.O[z];
  }

  const auto n = static_cast<double>(out.N);
  double inverse_sum = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double expected = n * prob[j];
    const double diff = static_cast<double>(out.O[j]) - expected;
    out.S_m += diff * diff / expected;
    inverse_sum += 1.0 / prob[j];
  }
  const double mean = m;
  const double var = 2.0 * m - (m * m + 4.0 * m + 1.0) / n + inverse_sum / n;
  if (!(var > 0.0)) throw DomainError("Nass variance is not positive");
  // Match the first two moments of c S_m to chi^2_nu: c E = nu and c^2 var = 2 nu.
  out.c = 2.0 * mean / var;
  out.nu = out.c * mean;
  out.p_value = std::clamp(chi_square_sf(out.c * out.S_m, out.nu), 0.0, 1.0);
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return fields;
}

double to_double(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DomainError(where + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

ForecastSeries read_forecast_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open forecast file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DomainError("forecast file '" + path + "' is empty");
  const auto header = split(line);
  if (header.size() < 4 || header[0] != "t" || header[1] != "condition_met" || header[2] != "y") {
    throw DomainError("forecast file header must be t,condition_met,y,f1,...,fm");
  }
  for (std::size_t j = 3; j < header.size(); ++j) {
    if (header[j] != "f" + std::to_string(j - 2)) {
      throw DomainError("forecast column " + std::to_string(j + 1) + " must be named f" +
                        std::to_string(j - 2));
    }
  }
  std::vector<ForecastRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line);
    const std::string where = path + ":" + std::to_string(line_no);
    if (fields.size() != header.size()) throw DomainError(where + ": wrong number of fields");
    ForecastRow row;
    row.t = static_cast<long>(to_double(fields[0], where));
    if (fields[1] != "0" && fields[1] != "1") throw DomainError(where + ": condition_met must be 0 or 1");
    row.condition_met = fields[1] == "1";
    row.y = to_double(fields[2], where);
    for (std::size_t j = 3; j < fields.size(); ++j) row.forecasts.push_back(to_double(fields[j], where));
    rows.push_back(std::move(row));
  }
  return ForecastSeries(std::move(rows));
}

}  // namespace vcrisk

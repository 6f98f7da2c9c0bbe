#pragma once

#include "vcrisk/types.hpp"

#include <string>
#include <vector>

namespace vcrisk {

struct ForecastRow {
  long t = 0;
  bool condition_met = false;
  double y = 0.0;
  std::vector<double> forecasts;  ///< VCoVaR forecasts at beta_1 < ... < beta_m
};

/// Rows of a forecast file. All rows carry the same number m >= 1 of forecasts,
/// nondecreasing across levels.
class ForecastSeries {
 public:
  explicit ForecastSeries(std::vector<ForecastRow> rows);

  const std::vector<ForecastRow>& rows() const { return rows_; }
  int levels() const { return m_; }

 private:
  std::vector<ForecastRow> rows_;
  int m_ = 0;
};

/// beta_j = beta + (j - 1)(1 - beta)/m for j = 1..m.
std::vector<double> beta_grid(double beta, int m);

struct ViolationSummary {
  Index N = 0;
  std::vector<std::vector<int>> indicators;  ///< N x m, [y_t > forecast_j]
  std::vector<int> Z;                        ///< number of violated levels per row
  double violation_rate = 0.0;               ///< mean indicator at beta_1
};

/// Restricts to rows with the condition met; throws DomainError if none remain.
ViolationSummary violations(const ForecastSeries& series);

struct NassResult {
  Index N = 0;
  std::vector<Index> O;  ///< O_0..O_m
  double S_m = 0.0;
  double c = 0.0;
  double nu = 0.0;
  double p_value = 1.0;
};

/// Multinomial test of Z_t against P(Z = 0) = beta, P(Z = j) = (1 - beta)/m. c S_m is
/// referred to chi^2_nu with c = 2 E[S_m] / var[S_m] and nu = c E[S_m] (Nass, 1959).
NassResult nass_test(const std::vector<int>& Z, double beta, int m);

/// Reads a CSV with header t,condition_met,y,f1,...,fm.
ForecastSeries read_forecast_csv(const std::string& path);

}  // namespace vcrisk

#pragma once

#include "vcrisk/backtest.hpp"
#include "vcrisk/measures.hpp"
#include "vcrisk/sampling.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace support {

// Kendall's tau of two tie-free columns by counting inversions with merge sort.
inline double kendall_tau(const vcrisk::Vector& x, const vcrisk::Vector& y) {
  const auto n = static_cast<std::size_t>(x.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> seq(n), buffer(n);
  for (std::size_t i = 0; i < n; ++i) seq[i] = y[static_cast<vcrisk::Index>(order[i])];
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n), hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (seq[j] < seq[i]) {
          inversions += mid - i;
          buffer[k++] = seq[j++];
        } else {
          buffer[k++] = seq[i++];
        }
      }
      while (i < mid) buffer[k++] = seq[i++];
      while (j < hi) buffer[k++] = seq[j++];
    }
    seq.swap(buffer);
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return (pairs - 2.0 * static_cast<double>(inversions)) / pairs;
}

// Correctly specified forecast series: copula rows are drawn until `conditional`
// rows satisfy the at-least-one stress event; every row carries the exact VCoVaR
// forecasts at beta_1..beta_m and Y = F_Y^{-1}(V).
inline vcrisk::ForecastSeries synthetic_series(const vcrisk::MeasureRequest& req, int m, vcrisk::Index conditional,
                                               const vcrisk::RngSpec& rng) {
  std::vector<double> forecasts;
  for (double level : vcrisk::beta_grid(req.beta, m)) forecasts.push_back(vcrisk::vcovar(req.with_beta(level)));
  vcrisk::CopulaSampler sampler(req.copula, rng);
  const vcrisk::Index d = req.alpha.size();
  std::vector<vcrisk::ForecastRow> rows;
  vcrisk::Index hits = 0;
  long t = 0;
  while (hits < conditional) {
    const vcrisk::Matrix batch = sampler.draw(1024);
    for (vcrisk::Index r = 0; r < batch.rows() && hits < conditional; ++r) {
      vcrisk::ForecastRow row;
      row.t = ++t;
      row.condition_met = (batch.row(r).head(d).transpose().array() > req.alpha.values().array()).any();
      row.y = req.marginal.quantile(batch(r, d));
      row.forecasts = forecasts;
      hits += row.condition_met ? 1 : 0;
      rows.push_back(std::move(row));
    }
  }
  return vcrisk::ForecastSeries(std::move(rows));
}

}  // namespace support

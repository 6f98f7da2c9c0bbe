#include "vcrisk/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

namespace vcrisk {

namespace {

std::seed_seq make_seed(const RngSpec& spec) {
  return std::seed_seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                       static_cast<std::uint32_t>(spec.stream_id),
                       static_cast<std::uint32_t>(spec.stream_id >> 32)};
}

// Bootstrap replicate b draws from its own stream so replicates can run in any order.
RngSpec bootstrap_stream(const RngSpec& rng, int b) {
  return {rng.seed ^ 0x9e3779b97f4a7c15ULL, (rng.stream_id << 20) + static_cast<std::uint64_t>(b) + 1};
}

}  // namespace

RandomStream::RandomStream(const RngSpec& spec) {
  auto seq = make_seed(spec);
  engine_.seed(seq);
}

double RandomStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential() { return -std::log(uniform()); }

CopulaSampler::CopulaSampler(Copula copula, const RngSpec& rng)
    : copula_(std::move(copula)), stream_(rng) {
  if (copula_.family() == CopulaFamily::ArchimedeanGeneric) {
    throw UnsupportedError("sampling is implemented for the independence and Gumbel copulas only");
  }
}

// Positive stable variable with Laplace transform exp(-s^(1/theta)) (Kanter's
// form of the Chambers-Mallows-Stuck construction).
double CopulaSampler::stable_frailty() {
  const double alpha = 1.0 / copula_.theta();
  if (alpha == 1.0) return 1.0;
  const double angle = std::numbers::pi * stream_.uniform();
  const double w = stream_.exponential();
  const double a = std::sin(alpha * angle) / std::pow(std::sin(angle), 1.0 / alpha);
  const double b = std::pow(std::sin((1.0 - alpha) * angle) / w, (1.0 - alpha) / alpha);
  return a * b;
}

Matrix CopulaSampler::draw(Index n) {
  if (n < 1) throw DomainError("sample size must be at least 1");
  const int dim = copula_.dim();
  Matrix out(n, dim);
  if (copula_.family() == CopulaFamily::Independence) {
    for (Index r = 0; r < n; ++r) {
      for (int j = 0; j < dim; ++j) out(r, j) = stream_.uniform();
    }
    return out;
  }
  // Marshall-Olkin: U_j = psi^{-1}(E_j / M) with psi^{-1}(s) = exp(-s^(1/theta)).
  const double inv_theta = 1.0 / copula_.theta();
  constexpr double tiny = std::numeric_limits<double>::min();
  for (Index r = 0; r < n; ++r) {
    const double frailty = stable_frailty();
    for (int j = 0; j < dim; ++j) {
      const double e = stream_.exponential();
      out(r, j) = std::max(tiny, std::exp(-std::pow(e / frailty, inv_theta)));
    }
  }
  return out;
}

Matrix sample(const Copula& c, Index n, const RngSpec& rng) { return CopulaSampler(c, rng).draw(n); }

double conditional_statistic(std::vector<double>& losses, double beta, McStatistic statistic) {
  if (losses.empty()) throw InsufficientSampleError("empty conditional sample");
  const auto n = static_cast<double>(losses.size());
  // Generalized inverse of the empirical cdf: order statistic ceil(n beta).
  auto j = static_cast<std::size_t>(std::clamp(std::ceil(n * beta), 1.0, n));
  while (j > 1 && static_cast<double>(j - 1) / n >= beta) --j;
  auto nth = losses.begin() + static_cast<std::ptrdiff_t>(j - 1);
  std::nth_element(losses.begin(), nth, losses.end());
  const double quantile = *nth;
  if (statistic == McStatistic::Quantile) return quantile;
  // Exact integral of the step quantile over [beta, 1].
  double upper = 0.0;
  for (auto it = nth + 1; it != losses.end(); ++it) upper += *it;
  const double total = quantile * (static_cast<double>(j) / n - beta) + upper / n;
  return total / (1.0 - beta);
}

McEstimate mc_measure(const Copula& c, const Marginal& marginal, const StressLevels& alpha,
                      double beta, StressMode mode, McStatistic statistic, Index n,
                      const RngSpec& rng, const McOptions& options) {
  if (c.dim() != alpha.size() + 1) throw DomainError("copula dimension does not match stress levels");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  if (mode == StressMode::Single) throw DomainError("mc_measure supports the at-least-one and all events");
  if (n < 1) throw DomainError("sample size must be at least 1");

  const Index d = alpha.size();
  CopulaSampler sampler(c, rng);
  std::vector<double> losses;
  for (Index done = 0; done < n;) {
    const Index rows = std::min(options.chunk, n - done);
    const Matrix batch = sampler.draw(rows);
    for (Index r = 0; r < rows; ++r) {
      const auto exceed = (batch.row(r).head(d).transpose().array() > alpha.values().array());
      const bool in_event = (mode == StressMode::AtLeastOne) ? exceed.any() : exceed.all();
      if (in_event) losses.push_back(marginal.quantile(batch(r, d)));
    }
    done += rows;
  }
  const auto hits = static_cast<Index>(losses.size());
  if (hits < options.min_hits) {
    throw InsufficientSampleError("only " + std::to_string(hits) +
                                  " samples fell into the conditioning event (need " +
                                  std::to_string(options.min_hits) + ")");
  }

  McEstimate result;
  result.hits = hits;
  {
    std::vector<double> copy(losses);
    result.estimate = conditional_statistic(copy, beta, statistic);
  }

  const int replicates = options.bootstrap;
  if (replicates < 2) return result;
  std::vector<double> stats(static_cast<std::size_t>(replicates));
  const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
  auto run = [&](unsigned worker) {
    std::vector<double> resample(losses.size());
    for (int b = static_cast<int>(worker); b < replicates; b += static_cast<int>(workers)) {
      RandomStream stream(bootstrap_stream(rng, b));
      for (auto& x : resample) x = losses[stream.bits() % losses.size()];
      stats[static_cast<std::size_t>(b)] = conditional_statistic(resample, beta, statistic);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();

  const Eigen::Map<const Vector> boot(stats.data(), replicates);
  const double mean = boot.mean();
  result.std_error = std::sqrt((boot.array() - mean).square().sum() / (replicates - 1));
  return result;
}

}  // namespace vcrisk

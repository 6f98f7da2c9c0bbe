#pragma once

#include "vcrisk/conditional.hpp"
#include "vcrisk/marginal.hpp"

#include <cstdint>
#include <random>

namespace vcrisk {

/// Seed and stream of a sampling run. Equal specs reproduce identical samples.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// 64-bit Mersenne Twister seeded through std::seed_seq from (seed, stream_id).
/// Uniforms are built from the top 53 bits so that sequences do not depend on the
/// standard library's distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(const RngSpec& spec);

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard exponential.
  double exponential();
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Draws rows of a copula sample; successive draw() calls continue the same stream,
/// so draw(n1) followed by draw(n2) equals a single draw(n1 + n2).
class CopulaSampler {
 public:
  CopulaSampler(Copula copula, const RngSpec& rng);

  /// n x dim matrix with entries in (0, 1).
  Matrix draw(Index n);

 private:
  double stable_frailty();

  Copula copula_;
  RandomStream stream_;
};

/// Convenience wrapper: CopulaSampler(c, rng).draw(n).
Matrix sample(const Copula& c, Index n, const RngSpec& rng);

enum class McStatistic { Quantile, TailMean };

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  Index hits = 0;  ///< samples inside the conditioning event
};

struct McOptions {
  int bootstrap = 500;
  Index min_hits = 1000;
  Index chunk = 1 << 16;
};

/// Monte Carlo counterpart of the conditional measures: filters a copula sample by the
/// stress event, maps V through the marginal quantile and returns the empirical
/// beta-quantile (Quantile) or the mean beyond it (TailMean), with a bootstrap SE.
McEstimate mc_measure(const Copula& c, const Marginal& marginal, const StressLevels& alpha,
                      double beta, StressMode mode, McStatistic statistic, Index n,
                      const RngSpec& rng, const McOptions& options = {});

/// Statistic of a conditional sample of losses (sorted in place).
double conditional_statistic(std::vector<double>& losses, double beta, McStatistic statistic);

}  // namespace vcrisk

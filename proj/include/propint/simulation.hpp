#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "propint/intervals.hpp"
#include "propint/numerics.hpp"

namespace propint {

/// Seed used whenever none is given, so documented tables are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 20240501;

/// Counter-based random stream: replication r of seed s always yields the
/// same sequence, independent of how replications are scheduled.
class ReplicationStream {
public:
  ReplicationStream(std::uint64_t seed, std::uint64_t replication);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform();

private:
  std::uint64_t state_;
};

/// Draws from Binomial(n, p): inversion of the CDF for n <= 64, a sum of n
/// Bernoulli draws otherwise. `pmf` must be binomial_pmf_table(n, p) when
/// n <= 64 and is ignored otherwise.
std::int64_t draw_binomial(ReplicationStream& rng, std::int64_t n, double p,
                           const std::vector<double>& pmf);

struct SimulationReport {
  Method method;
  std::int64_t n;
  double p;
  ConfidenceLevel level;
  std::int64_t replications;
  std::int64_t covered;
  double empirical_coverage;
  /// sqrt(c (1 - c) / N) at the empirical coverage c.
  double standard_error;
  std::uint64_t seed;
};

/// Monte-Carlo estimate of coverage: draw k ~ Binomial(n, p) `replications`
/// times and count how often the method's interval contains p.
/// Deterministic in `seed` regardless of `threads` (0 = hardware concurrency).
SimulationReport simulate_coverage(Method m, std::int64_t n, double p, const ConfidenceLevel& lv,
                                   std::int64_t replications, std::uint64_t seed = kDefaultSeed,
                                   unsigned threads = 1, const IntervalOptions& opts = {});

struct LimitCheckReport {
  std::int64_t n;
  double p;
  /// Exact sup_t |P(Q <= t) - F_chi2_1(t)| where Q is the quadratic-form
  /// statistic under Binomial(n, p).
  double sup_distance;
  /// Max of the same difference over a uniform t-grid (never exceeds sup_distance).
  double grid_sup_distance;
  /// (1/p + 1/q) / (2^{3/2} n).
  double l1_diagnostic;
  /// Distinct values of Q with their probabilities, sorted by value.
  std::vector<std::pair<double, double>> support;
};

/// Compares the exact law of the quadratic-form statistic with chi-square(1).
/// `t_grid_resolution` points on [0, max(support, 3 kappa_0.99)] are checked
/// in addition to the support points (0 skips the grid).
/// Throws DomainError unless n >= 1 and 0 < p < 1.
LimitCheckReport limit_check(std::int64_t n, double p, std::int64_t t_grid_resolution = 1000);

}  // namespace propint

#include "propint/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include <fmt/format.h>

#include "propint/errors.hpp"

namespace propint {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Chi-square(1) CDF extended by 0 to negative arguments.
double chi2_cdf_ext(double t) { return t <= 0.0 ? 0.0 : chi2_1_cdf(t); }

}  // namespace

ReplicationStream::ReplicationStream(std::uint64_t seed, std::uint64_t replication)
    : state_(mix64(seed ^ mix64(replication + kGolden))) {}

std::uint64_t ReplicationStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double ReplicationStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t draw_binomial(ReplicationStream& rng, std::int64_t n, double p,
                           const std::vector<double>& pmf) {
  if (n <= 64) {
    const double u = rng.next_uniform();
    double cdf = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
      cdf += pmf[static_cast<std::size_t>(k)];
      if (u < cdf) return k;
    }
    return n;
  }
  std::int64_t k = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    if (rng.next_uniform() < p) ++k;
  }
  return k;
}

SimulationReport simulate_coverage(Method m, std::int64_t n, double p, const ConfidenceLevel& lv,
                                   std::int64_t replications, std::uint64_t seed,
                                   unsigned threads, const IntervalOptions& opts) {
  if (replications < 1) throw DomainError("replications must be >= 1");
  if (n < 1) throw DomainError(fmt::format("n = {} must be >= 1", n));
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("p = {} not in [0,1]", p));

  const auto table = interval_table(m, n, lv, opts);
  const std::vector<double> pmf = n <= 64 ? binomial_pmf_table(n, p) : std::vector<double>{};

  auto count_range = [&](std::int64_t begin, std::int64_t end) {
    std::int64_t covered = 0;
    for (std::int64_t r = begin; r < end; ++r) {
      ReplicationStream rng(seed, static_cast<std::uint64_t>(r));
      const auto k = draw_binomial(rng, n, p, pmf);
      if (table[static_cast<std::size_t>(k)].contains(p)) ++covered;
    }
    return covered;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::int64_t covered = 0;
  if (threads <= 1 || replications < 2 * static_cast<std::int64_t>(threads)) {
    covered = count_range(0, replications);
  } else {
    std::vector<std::int64_t> partial(threads, 0);
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> workers;
      const std::int64_t chunk = (replications + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
          try {
            const std::int64_t begin = std::min<std::int64_t>(replications, t * chunk);
            const std::int64_t end = std::min<std::int64_t>(replications, begin + chunk);
            partial[t] = count_range(begin, end);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (auto c : partial) covered += c;
  }

  const double c = static_cast<double>(covered) / static_cast<double>(replications);
  return SimulationReport{m,       n, p, lv, replications, covered, c,
                          std::sqrt(c * (1.0 - c) / static_cast<double>(replications)), seed};
}

LimitCheckReport limit_check(std::int64_t n, double p, std::int64_t t_grid_resolution) {
  if (n < 1) throw DomainError(fmt::format("n = {} must be >= 1", n));
  if (!(p > 0.0 && p < 1.0)) throw DomainError(fmt::format("limit check: p = {} not in (0,1)", p));

  const auto pmf = binomial_pmf_table(n, p);
  std::vector<std::pair<double, double>> points;
  points.reserve(pmf.size());
  for (std::int64_t k = 0; k <= n; ++k) {
    points.emplace_back(stat_quadratic_closed(Counts(n, k), p), pmf[static_cast<std::size_t>(k)]);
  }
  std::sort(points.begin(), points.end());

  // k and its mirror around np can map to the same value; merge those.
  std::vector<std::pair<double, double>> support;
  for (const auto& [value, weight] : points) {
    if (!support.empty() &&
        std::abs(value - support.back().first) <= 1e-12 * (1.0 + std::abs(value))) {
      support.back().second += weight;
    } else {
      support.emplace_back(value, weight);
    }
  }

  // The empirical CDF is a step function and F is continuous and
  // nondecreasing, so the supremum is attained at a support point or its
  // left limit.
  double sup = 0.0;
  double cumulative = 0.0;
  for (const auto& [value, weight] : support) {
    const double f = chi2_cdf_ext(value);
    sup = std::max(sup, std::abs(cumulative - f));
    cumulative += weight;
    sup = std::max(sup, std::abs(std::min(cumulative, 1.0) - f));
  }

  double grid_sup = 0.0;
  if (t_grid_resolution > 0) {
    const double t_max = std::max(support.back().first, 3.0 * 6.634896601021214);
    std::size_t idx = 0;
    double cdf = 0.0;
    for (std::int64_t i = 0; i <= t_grid_resolution; ++i) {
      const double t = t_max * static_cast<double>(i) / static_cast<double>(t_grid_resolution);
      while (idx < support.size() && support[idx].first <= t) cdf += support[idx++].second;
      grid_sup = std::max(grid_sup, std::abs(std::min(cdf, 1.0) - chi2_cdf_ext(t)));
    }
  }

  const double l1 = (1.0 / p + 1.0 / (1.0 - p)) / (std::pow(2.0, 1.5) * static_cast<double>(n));
  return LimitCheckReport{n, p, std::min(sup, 1.0), std::min(grid_sup, sup), l1, std::move(support)};
}

}  // namespace propint

#pragma once

#include <cstdint>
#include <vector>

#include "propint/intervals.hpp"
#include "propint/numerics.hpp"

namespace propint {

/// Exact coverage and expected margin of error at one (method, n, p, level).
struct EvaluationPoint {
  Method method;
  std::int64_t n;
  double p;
  ConfidenceLevel level;
  double coverage;
  double expected_me;
};

/// Coverage sum_k 1{L(k) <= p <= U(k)} P(X = k) for X ~ Binomial(n, p), using
/// unclipped bounds. Throws DomainError for p outside [0, 1] or n < 1.
double exact_coverage(Method m, std::int64_t n, double p, const ConfidenceLevel& lv,
                      const IntervalOptions& opts = {});

/// Expected half-width sum_k (U(k) - L(k)) / 2 * P(X = k).
double expected_margin(Method m, std::int64_t n, double p, const ConfidenceLevel& lv,
                       const IntervalOptions& opts = {});

/// Same sums over a precomputed interval table; lets sweeps reuse the n + 1
/// intervals across many values of p.
double coverage_from_table(const std::vector<Interval>& table, double p);
double expected_margin_from_table(const std::vector<Interval>& table, double p);

/// Half-width a formula assigns when p_hat q_hat equals `pq`. Defined only
/// for methods whose margin depends on p_hat through p_hat q_hat alone
/// (wald, wald_cc, quadratic); others raise UnsupportedMethod.
double margin_profile(Method m, std::int64_t n, double pq, const ConfidenceLevel& lv,
                      const IntervalOptions& opts = {});

struct SweepGrid {
  std::vector<std::int64_t> n_values;
  std::vector<double> p_values;
  std::vector<ConfidenceLevel> levels;
  std::vector<Method> methods;

  /// Throws DomainError on an empty list, n < 1 or p outside [0, 1].
  void validate() const;
};

/// Evaluates the Cartesian product of the grid, ordered by method, then
/// level, then n, then p (each in input order). `threads` = 0 uses the
/// hardware concurrency; the result does not depend on it.
std::vector<EvaluationPoint> sweep(const SweepGrid& grid, unsigned threads = 0,
                                   const IntervalOptions& opts = {});

/// Evenly spaced values start, start + step, ..., stop (inclusive, snapped so
/// the last value is exactly `stop` when it lies on the grid).
std::vector<double> linear_grid(double start, double stop, double step);

}  // namespace propint

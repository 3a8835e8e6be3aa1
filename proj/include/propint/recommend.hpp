#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "propint/intervals.hpp"
#include "propint/numerics.hpp"

namespace propint {

/// Method-selection advice for a sample of size n with a reference
/// proportion (a planning value or, in practice, the observed p_hat).
struct Recommendation {
  Method preferred;
  std::vector<Method> acceptable;
  /// Stable rule identifier, e.g. "s3-extremely-small". When the level was
  /// snapped, the studied level is appended: "s3-extremely-small@0.95".
  std::string rationale;
  ConfidenceLevel level;
  /// The studied level (0.90, 0.95 or 0.99) whose rules were applied.
  double studied_level;
  /// True when `level` was snapped to a different studied level.
  bool level_snapped;
};

/// Rule identifiers.
inline constexpr const char* kRuleExtremelySmall = "s3-extremely-small";
inline constexpr const char* kRuleModeratelySmall = "s3-moderately-small";
inline constexpr const char* kRuleSimilarPerformance = "s3-similar-performance";
inline constexpr const char* kRuleLevel90SmallBoundary = "level90-small-boundary";
inline constexpr const char* kRuleLevel90AgrestiCoull = "level90-moderate-agresti-coull";
inline constexpr const char* kRuleLevel99Quadratic = "level99-quadratic";

/// Deterministic rule engine. Thresholds are closed on the side favoring
/// the quadratic interval and symmetric under p -> 1 - p; the Wald interval
/// is never acceptable. Throws DomainError for n < 1 or p_ref outside [0, 1].
Recommendation recommend(std::int64_t n, double p_ref, const ConfidenceLevel& lv);

/// Nearest of {0.90, 0.95, 0.99}.
double nearest_studied_level(double level);

}  // namespace propint

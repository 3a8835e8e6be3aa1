#include "propint/recommend.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "propint/errors.hpp"

namespace propint {
namespace {

// Slack on threshold comparisons so that 1 - 0.8 still counts as <= 0.2.
constexpr double kThresholdSlack = 1e-12;

bool near_boundary(double p, double threshold) {
  return std::min(p, 1.0 - p) <= threshold + kThresholdSlack;
}

}  // namespace

double nearest_studied_level(double level) {
  constexpr std::array<double, 3> studied = {0.90, 0.95, 0.99};
  double best = studied[0];
  for (double s : studied) {
    if (std::abs(level - s) < std::abs(level - best)) best = s;
  }
  return best;
}

Recommendation recommend(std::int64_t n, double p_ref, const ConfidenceLevel& lv) {
  if (n < 1) throw DomainError(fmt::format("n = {} must be >= 1", n));
  if (!(p_ref >= 0.0 && p_ref <= 1.0)) {
    throw DomainError(fmt::format("reference proportion {} not in [0,1]", p_ref));
  }
  const double studied = nearest_studied_level(lv.level());
  Recommendation r{Method::quadratic, {Method::quadratic}, "", lv, studied,
                   std::abs(studied - lv.level()) > 1e-12};

  if (studied == 0.95) {
    if (n <= 10 && near_boundary(p_ref, 0.2)) {
      r.rationale = kRuleExtremelySmall;
    } else if (n > 10 && near_boundary(p_ref, 0.1)) {
      r.rationale = kRuleModeratelySmall;
    } else {
      r.acceptable = {Method::quadratic, Method::wilson, Method::agresti_coull};
      r.rationale = kRuleSimilarPerformance;
    }
  } else if (studied == 0.90) {
    if (n <= 10 && near_boundary(p_ref, 0.1)) {
      r.rationale = kRuleLevel90SmallBoundary;
    } else {
      r.preferred = Method::agresti_coull;
      r.acceptable = {Method::agresti_coull, Method::quadratic, Method::wilson};
      r.rationale = kRuleLevel90AgrestiCoull;
    }
  } else {
    r.rationale = kRuleLevel99Quadratic;
  }
  if (r.level_snapped) r.rationale += fmt::format("@{:g}", studied);
  return r;
}

}  // namespace propint

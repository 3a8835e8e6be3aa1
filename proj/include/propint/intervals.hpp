#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "propint/numerics.hpp"

namespace propint {

enum class Method { wald, wald_cc, wilson, agresti_coull, clopper_pearson, quadratic };

inline constexpr std::array<Method, 6> kAllMethods = {
    Method::wald,          Method::wald_cc,         Method::wilson,
    Method::agresti_coull, Method::clopper_pearson, Method::quadratic};

/// The four methods compared in the coverage and expected-margin figures.
inline constexpr std::array<Method, 4> kFigureMethods = {Method::wald, Method::quadratic,
                                                         Method::agresti_coull, Method::wilson};

/// Lowercase token used on the command line and in CSV/JSON output.
std::string_view method_name(Method m);

/// Inverse of method_name; throws UnsupportedMethod for unknown tokens.
Method parse_method(std::string_view token);

/// A binomial observation: k successes in n trials.
///
/// n = 0 is representable (an empty subgroup) but every interval constructor
/// rejects it.
struct Counts {
  std::int64_t n;
  std::int64_t k;

  /// Throws DomainError if n < 0, k < 0 or k > n.
  Counts(std::int64_t n, std::int64_t k);

  double p_hat() const { return static_cast<double>(k) / static_cast<double>(n); }
  double q_hat() const { return static_cast<double>(n - k) / static_cast<double>(n); }
  /// p_hat * q_hat computed as k(n-k)/n^2 so that it is exactly 0 at k in {0, n}.
  double pq_hat() const;

  friend bool operator==(const Counts&, const Counts&) = default;
};

/// Counts augmented by kappa/2 successes and kappa/2 failures.
struct AugmentedCounts {
  double x_tilde;
  double n_tilde;
  double p_tilde;

  AugmentedCounts(const Counts& c, const ConfidenceLevel& lv);
};

/// A two-sided interval. Bounds are never clipped to [0, 1]; `overshoot`
/// records whether they left the unit interval.
struct Interval {
  double lower;
  double upper;
  Method method;
  ConfidenceLevel level;
  bool degenerate;
  bool overshoot;

  double width() const { return upper - lower; }
  double half_width() const { return 0.5 * (upper - lower); }
  /// Closed-interval membership.
  bool contains(double p) const { return lower <= p && p <= upper; }
  double clipped_lower() const;
  double clipped_upper() const;
};

/// Where the continuity correction of Wald-CC enters.
enum class WaldCcForm {
  paper,      ///< p_hat +- z * sqrt(p_hat q_hat / n + 1 / (2n))
  classical,  ///< p_hat +- (z * sqrt(p_hat q_hat / n) + 1 / (2n))
};

struct IntervalOptions {
  WaldCcForm wald_cc_form = WaldCcForm::paper;
};

Interval ci_wald(const Counts& c, const ConfidenceLevel& lv);
Interval ci_wald_cc(const Counts& c, const ConfidenceLevel& lv,
                    WaldCcForm form = WaldCcForm::paper);
Interval ci_wilson(const Counts& c, const ConfidenceLevel& lv);
Interval ci_agresti_coull(const Counts& c, const ConfidenceLevel& lv);

/// Exact equal-tailed interval obtained by inverting two one-sided binomial
/// tests; each endpoint is found by bisection on the binomial tails.
Interval ci_clopper_pearson(const Counts& c, const ConfidenceLevel& lv);

/// Interval obtained by inverting {p : Q(p) <= kappa} where Q is the
/// quadratic-form statistic (see stat_quadratic_closed). The inequality is
/// the quadratic
///
///   (n + kappa - 2) p^2 - 2((n-1) p_hat + (kappa-1)/2) p + p_hat (n p_hat - 1) <= 0,
///
/// whose roots are center +- margin with
///
///   center = ((n-1) p_hat + (kappa-1)/2) / (n + kappa - 2)
///   margin = sqrt(n kappa p_hat q_hat + (kappa-1)^2/4 - p_hat q_hat) / (n + kappa - 2).
///
/// The constant term is >= 0 for integer k, so both roots are >= 0; the lower
/// root is evaluated as constant / (leading * upper root) so that it is exactly
/// 0 at k in {0, 1}, and the upper root mirrors it through k -> n - k.
///
/// Throws UnsupportedRegime when n + kappa - 2 <= 0 and InternalError if the
/// discriminant comes out negative.
Interval ci_quadratic(const Counts& c, const ConfidenceLevel& lv);

/// Dispatch on method identifier. Throws DomainError when c.n == 0.
Interval compute_interval(Method m, const Counts& c, const ConfidenceLevel& lv,
                          const IntervalOptions& opts = {});

/// All n + 1 intervals {CI(k)}_{k=0..n} for a method.
std::vector<Interval> interval_table(Method m, std::int64_t n, const ConfidenceLevel& lv,
                                     const IntervalOptions& opts = {});

/// Discriminant n kappa p_hat q_hat + (kappa-1)^2/4 - p_hat q_hat of the
/// quadratic-form inversion.
double quadratic_discriminant(const Counts& c, const ConfidenceLevel& lv);

/// Closed form of the quadratic-form statistic
///   n (p_hat - p)^2 / (p q) - (p_hat / p + q_hat / q - 2).
/// Can be negative. Throws DomainError unless 0 < p < 1.
double stat_quadratic_closed(const Counts& c, double p);

/// Pairwise form n^-1 sum_{i != j} (B_i - p)(B_j - p) / (p q) + 1 over a raw
/// Bernoulli sequence, evaluated in O(n) via
/// sum_{i != j} a_i a_j = (sum a_i)^2 - sum a_i^2.
/// Throws DomainError for an empty sequence, non-binary entries or p not in (0,1).
double stat_quadratic_form(std::span<const std::uint8_t> bits, double p);

}  // namespace propint

#include "propint/intervals.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "propint/errors.hpp"

namespace propint {
namespace {

Interval make_interval(double lower, double upper, Method m, const ConfidenceLevel& lv) {
  return Interval{lower, upper, m, lv, lower == upper, lower < 0.0 || upper > 1.0};
}

void require_nonempty(const Counts& c) {
  if (c.n == 0) throw DomainError("empty subgroup: interval requires n >= 1");
}

// Finds the root of a monotone function on [0, 1] by bisection. `increasing`
// gives the direction of f; returns the midpoint of the final bracket.
template <typename F>
double bisect_unit(F f, double target, bool increasing) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if ((v < target) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Smaller root of the inverted quadratic for counts c, computed without
// cancellation: the larger-magnitude root first, the other from the product.
double quadratic_lower_root(const Counts& c, const ConfidenceLevel& lv) {
  const double kappa = lv.kappa();
  const double n = static_cast<double>(c.n);
  const double k = static_cast<double>(c.k);
  const double leading = n + kappa - 2.0;
  const double half_linear = (n - 1.0) * c.p_hat() + 0.5 * (kappa - 1.0);
  // p_hat (n p_hat - 1) = k (k - 1) / n, exactly zero at k in {0, 1}.
  const double constant = k * (k - 1.0) / n;
  const double root_disc = std::sqrt(quadratic_discriminant(c, lv));
  if (half_linear >= 0.0) {
    if (c.k <= 1) return 0.0;
    const double big = (half_linear + root_disc) / leading;
    if (big == 0.0) return 0.0;
    return constant / (leading * big);
  }
  return (half_linear - root_disc) / leading;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::wald: return "wald";
    case Method::wald_cc: return "wald_cc";
    case Method::wilson: return "wilson";
    case Method::agresti_coull: return "agresti_coull";
    case Method::clopper_pearson: return "clopper_pearson";
    case Method::quadratic: return "quadratic";
  }
  return "unknown";
}

Method parse_method(std::string_view token) {
  for (Method m : kAllMethods) {
    if (method_name(m) == token) return m;
  }
  throw UnsupportedMethod(fmt::format("unknown method '{}'", token));
}

Counts::Counts(std::int64_t n_, std::int64_t k_) : n(n_), k(k_) {
  if (n < 0 || k < 0) throw DomainError("counts must be nonnegative");
  if (k > n) throw DomainError(fmt::format("successes k = {} exceed trials n = {}", k, n));
}

double Counts::pq_hat() const {
  const double nn = static_cast<double>(n);
  return static_cast<double>(k) * static_cast<double>(n - k) / (nn * nn);
}

AugmentedCounts::AugmentedCounts(const Counts& c, const ConfidenceLevel& lv)
    : x_tilde(static_cast<double>(c.k) + lv.kappa() / 2.0),
      n_tilde(static_cast<double>(c.n) + lv.kappa()),
      p_tilde(x_tilde / n_tilde) {}

double Interval::clipped_lower() const { return std::clamp(lower, 0.0, 1.0); }
double Interval::clipped_upper() const { return std::clamp(upper, 0.0, 1.0); }

Interval ci_wald(const Counts& c, const ConfidenceLevel& lv) {
  require_nonempty(c);
  const double p = c.p_hat();
  const double margin = lv.z() * std::sqrt(c.pq_hat() / static_cast<double>(c.n));
  return make_interval(p - margin, p + margin, Method::wald, lv);
}

Interval ci_wald_cc(const Counts& c, const ConfidenceLevel& lv, WaldCcForm form) {
  require_nonempty(c);
  const double n = static_cast<double>(c.n);
  const double p = c.p_hat();
  const double margin = form == WaldCcForm::paper
                            ? lv.z() * std::sqrt(c.pq_hat() / n + 1.0 / (2.0 * n))
                            : lv.z() * std::sqrt(c.pq_hat() / n) + 1.0 / (2.0 * n);
  return make_interval(p - margin, p + margin, Method::wald_cc, lv);
}

Interval ci_wilson(const Counts& c, const ConfidenceLevel& lv) {
  require_nonempty(c);
  const AugmentedCounts aug(c, lv);
  const AugmentedCounts mirror(Counts(c.n, c.n - c.k), lv);
  const double n = static_cast<double>(c.n);
  const double margin = lv.z() * std::sqrt(n * c.pq_hat() + lv.kappa() / 4.0) / aug.n_tilde;
  // Upper endpoint via k -> n - k so that it is exactly 1 at k = n, as the
  // lower endpoint is exactly 0 at k = 0.
  return make_interval(aug.p_tilde - margin, 1.0 - (mirror.p_tilde - margin), Method::wilson, lv);
}

Interval ci_agresti_coull(const Counts& c, const ConfidenceLevel& lv) {
  require_nonempty(c);
  const AugmentedCounts aug(c, lv);
  const double margin = lv.z() * std::sqrt(aug.p_tilde * (1.0 - aug.p_tilde) / aug.n_tilde);
  return make_interval(aug.p_tilde - margin, aug.p_tilde + margin, Method::agresti_coull, lv);
}

Interval ci_clopper_pearson(const Counts& c, const ConfidenceLevel& lv) {
  require_nonempty(c);
  const double tail = lv.alpha() / 2.0;
  double lower = 0.0;
  double upper = 1.0;
  if (c.k > 0) {
    lower = bisect_unit([&](double p) { return binomial_upper_tail(c.n, c.k, p); }, tail,
                        /*increasing=*/true);
  }
  if (c.k < c.n) {
    upper = bisect_unit([&](double p) { return binomial_cdf(c.n, c.k, p); }, tail,
                        /*increasing=*/false);
  }
  return make_interval(lower, upper, Method::clopper_pearson, lv);
}

double quadratic_discriminant(const Counts& c, const ConfidenceLevel& lv) {
  const double kappa = lv.kappa();
  const double pq = c.pq_hat();
  const double n = static_cast<double>(c.n);
  return n * kappa * pq + (kappa - 1.0) * (kappa - 1.0) / 4.0 - pq;
}

Interval ci_quadratic(const Counts& c, const ConfidenceLevel& lv) {
  require_nonempty(c);
  const double leading = static_cast<double>(c.n) + lv.kappa() - 2.0;
  if (!(leading > 0.0)) {
    throw UnsupportedRegime(fmt::format(
        "quadratic interval undefined for n = {} at level {} (n + kappa - 2 <= 0)", c.n,
        lv.level()));
  }
  const double disc = quadratic_discriminant(c, lv);
  if (disc < 0.0) {
    throw InternalError(fmt::format("quadratic interval: negative discriminant {} at n={}, k={}",
                                    disc, c.n, c.k));
  }
  const double lower = quadratic_lower_root(c, lv);
  const double upper = 1.0 - quadratic_lower_root(Counts(c.n, c.n - c.k), lv);
  return make_interval(lower, upper, Method::quadratic, lv);
}

Interval compute_interval(Method m, const Counts& c, const ConfidenceLevel& lv,
                          const IntervalOptions& opts) {
  switch (m) {
    case Method::wald: return ci_wald(c, lv);
    case Method::wald_cc: return ci_wald_cc(c, lv, opts.wald_cc_form);
    case Method::wilson: return ci_wilson(c, lv);
    case Method::agresti_coull: return ci_agresti_coull(c, lv);
    case Method::clopper_pearson: return ci_clopper_pearson(c, lv);
    case Method::quadratic: return ci_quadratic(c, lv);
  }
  throw UnsupportedMethod("unknown method");
}

std::vector<Interval> interval_table(Method m, std::int64_t n, const ConfidenceLevel& lv,
                                     const IntervalOptions& opts) {
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  for (std::int64_t k = 0; k <= n; ++k) out.push_back(compute_interval(m, Counts(n, k), lv, opts));
  return out;
}

double stat_quadratic_closed(const Counts& c, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(fmt::format("quadratic-form statistic: p = {} not in (0,1)", p));
  }
  if (c.n == 0) throw DomainError("quadratic-form statistic requires n >= 1");
  const double q = 1.0 - p;
  const double ph = c.p_hat();
  const double d = ph - p;
  return static_cast<double>(c.n) * d * d / (p * q) - (ph / p + c.q_hat() / q - 2.0);
}

double stat_quadratic_form(std::span<const std::uint8_t> bits, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(fmt::format("quadratic-form statistic: p = {} not in (0,1)", p));
  }
  if (bits.empty()) throw DomainError("quadratic-form statistic requires n >= 1");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint8_t b : bits) {
    if (b > 1) throw DomainError("quadratic-form statistic: observations must be 0 or 1");
    const double a = static_cast<double>(b) - p;
    sum += a;
    sum_sq += a * a;
  }
  const double cross = sum * sum - sum_sq;
  return cross / (static_cast<double>(bits.size()) * p * (1.0 - p)) + 1.0;
}

}  // namespace propint

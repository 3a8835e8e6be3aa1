#pragma once

#include <cstdint>

namespace propint {

/// Nominal confidence level 1 - alpha together with its two-sided normal
/// quantile z = z_{1-alpha/2} and the chi-square(1) quantile kappa = z^2.
class ConfidenceLevel {
public:
  /// Throws DomainError unless 0 < level < 1.
  explicit ConfidenceLevel(double level);

  /// Level whose two-sided quantile is exactly `z` (so kappa = z * z exactly);
  /// e.g. from_z(1.0) is the 68.27% level with kappa = 1.
  static ConfidenceLevel from_z(double z);

  double level() const { return level_; }
  double alpha() const { return alpha_; }
  double z() const { return z_; }
  double kappa() const { return kappa_; }

  friend bool operator==(const ConfidenceLevel& a, const ConfidenceLevel& b) {
    return a.level_ == b.level_;
  }

private:
  ConfidenceLevel() = default;

  double level_;
  double alpha_;
  double z_;
  double kappa_;
};

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile, accurate to ~1e-15 absolute in the body.
/// Throws DomainError unless 0 < u < 1.
double normal_inverse_cdf(double u);

/// CDF of the chi-square distribution with one degree of freedom.
/// Throws DomainError for t < 0 or NaN.
double chi2_1_cdf(double t);

/// P(X = k) for X ~ Binomial(n, p), evaluated in log space.
/// Throws DomainError if k > n or p is outside [0, 1].
double binomial_pmf(std::int64_t n, std::int64_t k, double p);

/// P(X <= k) for X ~ Binomial(n, p).
double binomial_cdf(std::int64_t n, std::int64_t k, double p);

/// P(X >= k) for X ~ Binomial(n, p), summed over the upper tail directly.
double binomial_upper_tail(std::int64_t n, std::int64_t k, double p);

}  // namespace propint

#include <vector>

namespace propint {

/// The full probability vector {P(X = k)}_{k=0..n} for X ~ Binomial(n, p).
std::vector<double> binomial_pmf_table(std::int64_t n, double p);

}  // namespace propint

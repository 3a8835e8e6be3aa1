#include "propint/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "propint/errors.hpp"

namespace propint {
namespace {

constexpr double kBoundaryTolerance = 1e-12;

// Rational approximation of Acklam; relative error 1.15e-9 before refinement.
constexpr std::array<double, 6> kA = {-3.969683028665376e+01, 2.209460984245205e+02,
                                      -2.759285104469687e+02, 1.383577518672690e+02,
                                      -3.066479806614716e+01, 2.506628277459239e+00};
constexpr std::array<double, 5> kB = {-5.447609879822406e+01, 1.615858368580409e+02,
                                      -1.556989798598866e+02, 6.680131188771972e+01,
                                      -1.328068155288572e+01};
constexpr std::array<double, 6> kC = {-7.784894002430293e-03, -3.223964580411365e-01,
                                      -2.400758277161838e+00, -2.549732539343734e+00,
                                      4.374664141464968e+00,  2.938163982698783e+00};
constexpr std::array<double, 4> kD = {7.784695709041462e-03, 3.224671290700398e-01,
                                      2.445134137142996e+00, 3.754408661907416e+00};
constexpr double kLow = 0.02425;

double acklam(double u) {
  if (u < kLow) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  if (u > 1.0 - kLow) {
    const double q = std::sqrt(-2.0 * std::log1p(-u));
    return -(((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  const double q = u - 0.5;
  const double r = q * q;
  return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
         (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

// Values within kBoundaryTolerance of [0, 1] are snapped; anything further
// outside means the computation is broken.
double clamp_probability(double v, const char* what) {
  if (v >= 0.0 && v <= 1.0) return v;
  if (v < 0.0 && v >= -kBoundaryTolerance) return 0.0;
  if (v > 1.0 && v <= 1.0 + kBoundaryTolerance) return 1.0;
  throw InternalError(fmt::format("{} produced {} outside [0,1]", what, v));
}

void check_binomial_args(std::int64_t n, std::int64_t k, double p) {
  if (n < 0 || k < 0) throw DomainError("binomial: n and k must be nonnegative");
  if (k > n) throw DomainError(fmt::format("binomial: k = {} exceeds n = {}", k, n));
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("binomial: p = {} not in [0,1]", p));
}

long double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgammal(static_cast<long double>(n) + 1.0L) -
         std::lgammal(static_cast<long double>(k) + 1.0L) -
         std::lgammal(static_cast<long double>(n - k) + 1.0L);
}

double pmf_unchecked(std::int64_t n, std::int64_t k, double p, long double log_p,
                     long double log_q) {
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const long double lg = log_choose(n, k) + static_cast<long double>(k) * log_p +
                         static_cast<long double>(n - k) * log_q;
  return clamp_probability(static_cast<double>(std::exp(lg)), "binomial_pmf");
}

// Sum of pmf(j) for j in [lo, hi]: one log-space term, then the ratio recurrence.
long double tail_sum(std::int64_t n, std::int64_t lo, std::int64_t hi, double p) {
  if (p == 0.0) return lo == 0 ? 1.0L : 0.0L;
  if (p == 1.0) return hi == n ? 1.0L : 0.0L;
  const long double lp = static_cast<long double>(p);
  const long double log_p = std::log(lp);
  const long double log_q = std::log1p(-lp);
  const long double ratio = lp / (1.0L - lp);
  long double term = std::exp(log_choose(n, lo) + static_cast<long double>(lo) * log_p +
                              static_cast<long double>(n - lo) * log_q);
  if (term == 0.0L) {
    long double sum = 0.0L;
    for (std::int64_t j = lo; j <= hi; ++j) sum += pmf_unchecked(n, j, p, log_p, log_q);
    return sum;
  }
  long double sum = term;
  for (std::int64_t j = lo; j < hi; ++j) {
    term *= ratio * static_cast<long double>(n - j) / static_cast<long double>(j + 1);
    sum += term;
  }
  return sum;
}

}  // namespace

ConfidenceLevel::ConfidenceLevel(double level) : level_(level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError(fmt::format("confidence level {} not in (0,1)", level));
  }
  alpha_ = 1.0 - level;
  z_ = normal_inverse_cdf(1.0 - alpha_ / 2.0);
  kappa_ = z_ * z_;
}

ConfidenceLevel ConfidenceLevel::from_z(double z) {
  if (!(z > 0.0 && std::isfinite(z))) throw DomainError(fmt::format("z = {} must be positive", z));
  ConfidenceLevel lv;
  lv.level_ = std::erf(z / std::numbers::sqrt2);
  if (!(lv.level_ < 1.0)) throw DomainError(fmt::format("z = {} gives a level of 1", z));
  lv.alpha_ = 1.0 - lv.level_;
  lv.z_ = z;
  lv.kappa_ = z * z;
  return lv;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_inverse_cdf(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError(fmt::format("normal_inverse_cdf: u = {} not in (0,1)", u));
  }
  if (u == 0.5) return 0.0;
  double x = acklam(u);
  // One Halley step against the erfc-based CDF.
  const double e = normal_cdf(x) - u;
  const double t = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= t / (1.0 + 0.5 * x * t);
  return x;
}

double chi2_1_cdf(double t) {
  if (!(t >= 0.0)) throw DomainError(fmt::format("chi2_1_cdf: t = {} is negative", t));
  return std::erf(std::sqrt(0.5 * t));
}

double binomial_pmf(std::int64_t n, std::int64_t k, double p) {
  check_binomial_args(n, k, p);
  return pmf_unchecked(n, k, p, std::log(static_cast<long double>(p)),
                       std::log1p(-static_cast<long double>(p)));
}

std::vector<double> binomial_pmf_table(std::int64_t n, double p) {
  check_binomial_args(n, 0, p);
  const long double log_p = std::log(static_cast<long double>(p));
  const long double log_q = std::log1p(-static_cast<long double>(p));
  std::vector<double> out(static_cast<std::size_t>(n + 1));
  for (std::int64_t k = 0; k <= n; ++k) {
    out[static_cast<std::size_t>(k)] = pmf_unchecked(n, k, p, log_p, log_q);
  }
  return out;
}

double binomial_cdf(std::int64_t n, std::int64_t k, double p) {
  check_binomial_args(n, k, p);
  if (k == n) return 1.0;
  return clamp_probability(static_cast<double>(tail_sum(n, 0, k, p)), "binomial_cdf");
}

double binomial_upper_tail(std::int64_t n, std::int64_t k, double p) {
  check_binomial_args(n, k, p);
  if (k == 0) return 1.0;
  return clamp_probability(static_cast<double>(tail_sum(n, k, n, p)), "binomial_upper_tail");
}

}  // namespace propint

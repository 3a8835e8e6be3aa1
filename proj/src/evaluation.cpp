#include "propint/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include <fmt/format.h>

#include "propint/errors.hpp"

namespace propint {
namespace {

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("p = {} not in [0,1]", p));
}

void check_n(std::int64_t n) {
  if (n < 1) throw DomainError(fmt::format("n = {} must be >= 1", n));
}

std::int64_t table_n(const std::vector<Interval>& table) {
  return static_cast<std::int64_t>(table.size()) - 1;
}

}  // namespace

double coverage_from_table(const std::vector<Interval>& table, double p) {
  check_p(p);
  const auto pmf = binomial_pmf_table(table_n(table), p);
  double sum = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    if (table[k].contains(p)) sum += pmf[k];
  }
  return std::min(sum, 1.0);
}

double expected_margin_from_table(const std::vector<Interval>& table, double p) {
  check_p(p);
  const auto pmf = binomial_pmf_table(table_n(table), p);
  double sum = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) sum += table[k].half_width() * pmf[k];
  return sum;
}

double exact_coverage(Method m, std::int64_t n, double p, const ConfidenceLevel& lv,
                      const IntervalOptions& opts) {
  check_n(n);
  check_p(p);
  return coverage_from_table(interval_table(m, n, lv, opts), p);
}

double expected_margin(Method m, std::int64_t n, double p, const ConfidenceLevel& lv,
                       const IntervalOptions& opts) {
  check_n(n);
  check_p(p);
  return expected_margin_from_table(interval_table(m, n, lv, opts), p);
}

double margin_profile(Method m, std::int64_t n, double pq, const ConfidenceLevel& lv,
                      const IntervalOptions& opts) {
  check_n(n);
  if (!(pq >= 0.0 && pq <= 0.25)) {
    throw DomainError(fmt::format("p_hat q_hat = {} not in [0, 0.25]", pq));
  }
  const double nn = static_cast<double>(n);
  const double kappa = lv.kappa();
  switch (m) {
    case Method::wald:
      return lv.z() * std::sqrt(pq / nn);
    case Method::wald_cc:
      return opts.wald_cc_form == WaldCcForm::paper
                 ? lv.z() * std::sqrt(pq / nn + 1.0 / (2.0 * nn))
                 : lv.z() * std::sqrt(pq / nn) + 1.0 / (2.0 * nn);
    case Method::quadratic: {
      const double leading = nn + kappa - 2.0;
      if (!(leading > 0.0)) throw UnsupportedRegime("quadratic margin undefined: n + kappa - 2 <= 0");
      return std::sqrt(nn * kappa * pq + (kappa - 1.0) * (kappa - 1.0) / 4.0 - pq) / leading;
    }
    default:
      throw UnsupportedMethod(fmt::format(
          "margin profile undefined for '{}': its margin is not a function of p_hat q_hat",
          method_name(m)));
  }
}

void SweepGrid::validate() const {
  if (n_values.empty() || p_values.empty() || levels.empty() || methods.empty()) {
    throw DomainError("sweep grid lists must be nonempty");
  }
  for (auto n : n_values) check_n(n);
  for (auto p : p_values) check_p(p);
}

std::vector<EvaluationPoint> sweep(const SweepGrid& grid, unsigned threads,
                                   const IntervalOptions& opts) {
  grid.validate();
  struct Block {
    Method method;
    ConfidenceLevel level;
    std::int64_t n;
  };
  std::vector<Block> blocks;
  for (Method m : grid.methods)
    for (const auto& lv : grid.levels)
      for (auto n : grid.n_values) blocks.push_back({m, lv, n});

  const std::size_t np = grid.p_values.size();
  std::vector<EvaluationPoint> out(blocks.size() * np,
                                   EvaluationPoint{Method::wald, 0, 0.0, grid.levels[0], 0, 0});

  // Each block owns a disjoint slice of `out`, so the ordering is fixed
  // before any work is scheduled.
  auto run_block = [&](std::size_t b) {
    const auto& blk = blocks[b];
    const auto table = interval_table(blk.method, blk.n, blk.level, opts);
    for (std::size_t i = 0; i < np; ++i) {
      const double p = grid.p_values[i];
      const auto pmf = binomial_pmf_table(blk.n, p);
      double cov = 0.0;
      double me = 0.0;
      for (std::size_t k = 0; k < table.size(); ++k) {
        if (table[k].contains(p)) cov += pmf[k];
        me += table[k].half_width() * pmf[k];
      }
      out[b * np + i] = {blk.method, blk.n, p, blk.level, std::min(cov, 1.0), me};
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(blocks.size()));
  if (threads <= 1) {
    for (std::size_t b = 0; b < blocks.size(); ++b) run_block(b);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        try {
          for (std::size_t b = t; b < blocks.size(); b += threads) run_block(b);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw DomainError("invalid grid: need step > 0 and stop >= start");
  const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    // Round to 12 decimals so 0.001-step grids land on exact decimal values.
    const double v = start + static_cast<double>(i) * step;
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  if (std::abs(out.back() - stop) < step * 1e-6) out.back() = stop;
  return out;
}

}  // namespace propint

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "propint/errors.hpp"
#include "propint/evaluation.hpp"

using namespace propint;
using Catch::Approx;

namespace {

const ConfidenceLevel k95(0.95);

oracle::Bounds oracle_bounds(Method m, std::int64_t n, std::int64_t k, long double z) {
  switch (m) {
    case Method::wald: return oracle::wald(n, k, z);
    case Method::wilson: return oracle::wilson(n, k, z);
    case Method::agresti_coull: return oracle::agresti_coull(n, k, z);
    case Method::quadratic: return oracle::quadratic(n, k, z);
    default: break;
  }
  FAIL("no oracle for method");
  return {};
}

// Brute-force coverage: membership k by k against independently computed
// bounds, weighted by the recurrence pmf. At p in {0, 1} the k = 0 / k = n
// endpoints are exactly 0 / 1 analytically but the textbook formulas miss by
// an ulp, so membership there gets a 1e-15 slack.
long double brute_coverage(Method m, std::int64_t n, long double p, long double z) {
  const auto pmf = oracle::pmf_vector(n, p);
  const long double slack = (p == 0.0L || p == 1.0L) ? 1e-15L : 0.0L;
  long double sum = 0.0L;
  for (std::int64_t k = 0; k <= n; ++k) {
    const auto b = oracle_bounds(m, n, k, z);
    if (b.lower - slack <= p && p <= b.upper + slack) sum += pmf[static_cast<std::size_t>(k)];
  }
  return sum;
}

}  // namespace

TEST_CASE("exact coverage reference values") {
  // 1 - P(X=0) - P(X>=6) under Binomial(10, 0.2).
  CHECK(exact_coverage(Method::wald, 10, 0.2, k95) == Approx(0.8862564352).margin(1e-10));
  // Exactly k = 0..4 cover, i.e. P(X <= 4).
  CHECK(exact_coverage(Method::quadratic, 10, 0.2, k95) == Approx(0.9672065024).margin(1e-10));
  CHECK(exact_coverage(Method::agresti_coull, 10, 0.05, k95) ==
        Approx(0.988496442620703125).margin(1e-10));
}

TEST_CASE("coverage at p in {0, 1} is the point mass at k = 0 or k = n") {
  for (Method m : kAllMethods) {
    for (std::int64_t n : {5, 10, 33}) {
      const auto t = interval_table(m, n, k95);
      CHECK(exact_coverage(m, n, 0.0, k95) == (t.front().contains(0.0) ? 1.0 : 0.0));
      CHECK(exact_coverage(m, n, 1.0, k95) == (t.back().contains(1.0) ? 1.0 : 0.0));
    }
  }
  // Wald degenerates to [0, 0] at k = 0, which still contains p = 0.
  CHECK(exact_coverage(Method::wald, 10, 0.0, k95) == 1.0);
}

TEST_CASE("expected margin reference values") {
  CHECK(expected_margin(Method::wald, 10, 0.0, k95) == 0.0);
  CHECK(expected_margin(Method::quadratic, 10, 0.0, k95) ==
        Approx(0.11997925524718265).margin(1e-12));
  CHECK(expected_margin(Method::quadratic, 10, 0.2, k95) ==
        Approx(0.225036668932543).margin(1e-12));
}

TEST_CASE("expected margin is bounded by the largest half-width") {
  for (Method m : kAllMethods) {
    for (std::int64_t n : {3, 10, 40}) {
      const auto t = interval_table(m, n, k95);
      double max_half = 0.0;
      for (const auto& ci : t) max_half = std::max(max_half, ci.half_width());
      for (double p = 0.0; p <= 1.0; p += 0.05) {
        const double me = expected_margin(m, n, p, k95);
        CHECK(me >= 0.0);
        CHECK(me <= max_half + 1e-15);
      }
    }
  }
}

TEST_CASE("exact coverage matches the brute-force oracle") {
  for (Method m : {Method::wald, Method::wilson, Method::agresti_coull, Method::quadratic}) {
    for (double level : {0.90, 0.95, 0.99}) {
      const ConfidenceLevel lv(level);
      for (std::int64_t n : {1, 2, 5, 10, 23, 50, 100}) {
        if (m == Method::quadratic && n == 1 && lv.kappa() < 1.0) continue;
        for (int i = 0; i <= 200; ++i) {
          const double p = i / 200.0;
          INFO(method_name(m) << " level=" << level << " n=" << n << " p=" << p);
          const double got = exact_coverage(m, n, p, lv);
          const auto want = static_cast<double>(brute_coverage(m, n, p, lv.z()));
          CHECK(got == Approx(want).margin(1e-12));
        }
      }
    }
  }
}

TEST_CASE("coverage is a step function of the endpoint partition") {
  for (Method m : {Method::wald, Method::quadratic, Method::clopper_pearson}) {
    const std::int64_t n = 20;
    const auto table = interval_table(m, n, k95);
    std::vector<double> ends{0.0, 1.0};
    for (const auto& ci : table) {
      ends.push_back(std::clamp(ci.lower, 0.0, 1.0));
      ends.push_back(std::clamp(ci.upper, 0.0, 1.0));
    }
    std::sort(ends.begin(), ends.end());
    for (int i = 1; i < 1000; ++i) {
      const double p = i / 1000.0;
      if (std::binary_search(ends.begin(), ends.end(), p)) continue;
      const auto hi = std::upper_bound(ends.begin(), ends.end(), p);
      const double mid = 0.5 * (*(hi - 1) + *hi);
      // Covering set taken at the cell midpoint, weighted at p.
      const auto pmf = binomial_pmf_table(n, p);
      double partition = 0.0;
      for (std::size_t k = 0; k < table.size(); ++k) {
        if (table[k].contains(mid)) partition += pmf[k];
      }
      CHECK(coverage_from_table(table, p) == Approx(partition).margin(1e-14));
    }
  }
}

TEST_CASE("Clopper-Pearson coverage never falls below the level") {
  for (std::int64_t n = 1; n <= 30; ++n) {
    const auto table = interval_table(Method::clopper_pearson, n, k95);
    for (int i = 0; i <= 1000; ++i) {
      CHECK(coverage_from_table(table, i / 1000.0) >= 0.95 - 1e-9);
    }
  }
}

TEST_CASE("Wald coverage oscillates in n") {
  const double c30 = exact_coverage(Method::wald, 30, 0.1, k95);
  const double c31 = exact_coverage(Method::wald, 31, 0.1, k95);
  CHECK(c30 == Approx(0.8085213615694751).margin(1e-10));
  CHECK(c31 == Approx(0.820847430718815).margin(1e-10));
  CHECK(std::abs(c30 - c31) > 0.005);
}

TEST_CASE("margin profile") {
  CHECK(margin_profile(Method::wald, 10, 0.0, k95) == 0.0);
  CHECK(margin_profile(Method::quadratic, 10, 0.0, k95) ==
        Approx(0.11997925524718265).margin(1e-12));
  CHECK(margin_profile(Method::wald, 100, 0.25, k95) == Approx(0.0979981992270027).margin(1e-12));
  CHECK(margin_profile(Method::wald_cc, 10, 0.16, k95) ==
        Approx(ci_wald_cc(Counts(10, 2), k95).half_width()).margin(1e-14));
  // Matches the interval half-width when p_hat q_hat is attained.
  for (std::int64_t k = 0; k <= 10; ++k) {
    const Counts c(10, k);
    CHECK(margin_profile(Method::quadratic, 10, c.pq_hat(), k95) ==
          Approx(ci_quadratic(c, k95).half_width()).margin(1e-12));
  }
  for (Method m : {Method::wilson, Method::agresti_coull, Method::clopper_pearson}) {
    CHECK_THROWS_AS(margin_profile(m, 10, 0.1, k95), UnsupportedMethod);
  }
  CHECK_THROWS_AS(margin_profile(Method::wald, 10, 0.3, k95), DomainError);
}

TEST_CASE("evaluation domain errors") {
  CHECK_THROWS_AS(exact_coverage(Method::wald, 10, 1.5, k95), DomainError);
  CHECK_THROWS_AS(expected_margin(Method::wald, 10, -0.1, k95), DomainError);
  CHECK_THROWS_AS(exact_coverage(Method::wald, 0, 0.5, k95), DomainError);
}

TEST_CASE("sweep ordering and values") {
  const SweepGrid grid{{10}, {0.2}, {k95}, {Method::wald}};
  const auto pts = sweep(grid, 1);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].coverage == Approx(0.8862564352).margin(1e-10));

  const SweepGrid big{{10, 3}, {0.0, 0.5, 1.0}, {k95, ConfidenceLevel(0.9)},
                      {Method::quadratic, Method::wilson}};
  const auto out = sweep(big, 1);
  REQUIRE(out.size() == 2 * 2 * 2 * 3);
  std::size_t i = 0;
  for (Method m : big.methods)
    for (const auto& lv : big.levels)
      for (auto n : big.n_values)
        for (double p : big.p_values) {
          const auto& pt = out[i++];
          CHECK(pt.method == m);
          CHECK(pt.level == lv);
          CHECK(pt.n == n);
          CHECK(pt.p == p);
          CHECK(pt.coverage == exact_coverage(m, n, p, lv));
          CHECK(pt.expected_me == Approx(expected_margin(m, n, p, lv)).margin(1e-15));
          CHECK(std::isfinite(pt.expected_me));
        }
}

TEST_CASE("sweep is independent of the thread count") {
  const SweepGrid grid{{10, 20, 30, 100}, linear_grid(0.0, 1.0, 0.01), {k95},
                       {kFigureMethods.begin(), kFigureMethods.end()}};
  const auto one = sweep(grid, 1);
  for (unsigned threads : {2u, 3u, 8u, 0u}) {
    const auto many = sweep(grid, threads);
    REQUIRE(many.size() == one.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
      CHECK(many[i].coverage == one[i].coverage);
      CHECK(many[i].expected_me == one[i].expected_me);
      CHECK(many[i].p == one[i].p);
    }
  }
}

TEST_CASE("default figure grid size") {
  const SweepGrid grid{{10, 20, 30, 100}, linear_grid(0.0, 1.0, 0.001), {k95},
                       {kFigureMethods.begin(), kFigureMethods.end()}};
  CHECK(grid.p_values.size() == 1001);
  CHECK(grid.p_values.front() == 0.0);
  CHECK(grid.p_values.back() == 1.0);
  CHECK(grid.p_values[200] == 0.2);
  CHECK(sweep(grid).size() == 4 * 4 * 1001);
}

TEST_CASE("sweep grid validation") {
  CHECK_THROWS_AS(sweep(SweepGrid{{}, {0.5}, {k95}, {Method::wald}}), DomainError);
  CHECK_THROWS_AS(sweep(SweepGrid{{10}, {1.2}, {k95}, {Method::wald}}), DomainError);
  CHECK_THROWS_AS(sweep(SweepGrid{{0}, {0.5}, {k95}, {Method::wald}}), DomainError);
  CHECK_THROWS_AS(sweep(SweepGrid{{1}, {0.5}, {ConfidenceLevel(0.5)}, {Method::quadratic}}, 4),
                  UnsupportedRegime);
}

TEST_CASE("linear_grid") {
  const auto g = linear_grid(0.0, 0.25, 0.0025);
  CHECK(g.size() == 101);
  CHECK(g.back() == 0.25);
  CHECK_THROWS_AS(linear_grid(0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(linear_grid(1.0, 0.0, 0.1), DomainError);
}

#include "propint/figures.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "propint/errors.hpp"
#include "propint/evaluation.hpp"

namespace propint {
namespace {

std::vector<std::int64_t> n_range(std::int64_t first, std::int64_t last) {
  std::vector<std::int64_t> out;
  for (auto n = first; n <= last; ++n) out.push_back(n);
  return out;
}

RecordTable sweep_records(const SweepGrid& grid, unsigned threads) {
  RecordTable t{{"method", "level", "n", "p", "coverage", "expected_me"}, {}};
  for (const auto& pt : sweep(grid, threads)) {
    t.rows.push_back({std::string(method_name(pt.method)), pt.level.level(), pt.n, pt.p,
                      pt.coverage, pt.expected_me});
  }
  return t;
}

}  // namespace

FigureId parse_figure_id(std::string_view s) {
  for (auto id : {FigureId::margins_vs_n, FigureId::coverage_vs_p, FigureId::me_vs_p,
                  FigureId::coverage_vs_n, FigureId::me_vs_n}) {
    if (figure_name(id) == s) return id;
  }
  throw std::invalid_argument(fmt::format("unknown figure id '{}'", s));
}

std::string_view figure_name(FigureId id) {
  switch (id) {
    case FigureId::margins_vs_n: return "margins-vs-n";
    case FigureId::coverage_vs_p: return "coverage-vs-p";
    case FigureId::me_vs_p: return "me-vs-p";
    case FigureId::coverage_vs_n: return "coverage-vs-n";
    case FigureId::me_vs_n: return "me-vs-n";
  }
  return "unknown";
}

RecordTable figure_data(FigureId id, double level, unsigned threads) {
  if (level != 0.90 && level != 0.95 && level != 0.99) {
    throw DomainError(fmt::format("figure data is available at levels 0.9, 0.95, 0.99, not {}", level));
  }
  const ConfidenceLevel lv(level);
  const std::vector<Method> methods(kFigureMethods.begin(), kFigureMethods.end());

  switch (id) {
    case FigureId::margins_vs_n: {
      RecordTable t{{"method", "level", "n", "pq", "margin"}, {}};
      const auto pq_grid = linear_grid(0.0, 0.25, 0.0025);
      for (Method m : {Method::wald, Method::quadratic}) {
        for (std::int64_t n = 5; n <= 100; ++n) {
          for (double pq : pq_grid) {
            t.rows.push_back({std::string(method_name(m)), level, n, pq,
                              margin_profile(m, n, pq, lv)});
          }
        }
      }
      return t;
    }
    case FigureId::coverage_vs_p:
    case FigureId::me_vs_p:
      return sweep_records(SweepGrid{{10, 20, 30, 100}, linear_grid(0.0, 1.0, 0.001), {lv}, methods},
                           threads);
    case FigureId::coverage_vs_n:
    case FigureId::me_vs_n:
      return sweep_records(SweepGrid{n_range(5, 100), {0.01, 0.05, 0.1, 0.2}, {lv}, methods},
                           threads);
  }
  throw std::invalid_argument("unknown figure id");
}

std::string emit_figure_data(FigureId id, double level, unsigned threads) {
  return render(figure_data(id, level, threads), Format::csv);
}

}  // namespace propint

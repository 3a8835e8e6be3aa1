#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "propint/intervals.hpp"

namespace propint {

/// Column order of the published empirical-coverage table.
inline constexpr std::array<Method, 4> kTable1Methods = {Method::wald, Method::quadratic,
                                                         Method::agresti_coull, Method::wilson};

/// One published row: simulated coverage (3 significant figures) at levels
/// 0.95 and 0.99, columns in kTable1Methods order.
struct Table1Row {
  std::int64_t n;
  double p;
  std::array<double, 4> at95;
  std::array<double, 4> at99;
};

/// The 12 published (n, p) rows, n in {10, 30, 50, 100}, p in {0.05, 0.1, 0.2}.
const std::vector<Table1Row>& published_table1();

/// Printed value for (n, p, level, method), if the table has one.
std::optional<double> published_value(std::int64_t n, double p, double level, Method m);

/// (n, p) cells of the table grid and of the grid named in the surrounding
/// text (p in {0.01, 0.05, 0.09}).
std::vector<std::pair<std::int64_t, double>> table1_table_grid();
std::vector<std::pair<std::int64_t, double>> table1_text_grid();

}  // namespace propint

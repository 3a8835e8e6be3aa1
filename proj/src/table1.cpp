#include "propint/table1.hpp"

#include <algorithm>

namespace propint {

const std::vector<Table1Row>& published_table1() {
  static const std::vector<Table1Row> rows = {
      {10, 0.05, {0.402, 0.988, 0.988, 0.912}, {0.389, 0.989, 0.989, 0.989}},
      {10, 0.1, {0.647, 0.987, 0.927, 0.927}, {0.637, 0.987, 0.987, 0.987}},
      {10, 0.2, {0.884, 0.968, 0.968, 0.968}, {0.859, 0.994, 0.994, 0.994}},
      {30, 0.05, {0.783, 0.985, 0.985, 0.939}, {0.783, 0.997, 0.997, 0.997}},
      {30, 0.1, {0.81, 0.933, 0.975, 0.975}, {0.957, 0.993, 0.998, 0.998}},
      {30, 0.2, {0.946, 0.963, 0.963, 0.963}, {0.989, 0.997, 0.997, 0.997}},
      {50, 0.05, {0.92, 0.988, 0.962, 0.962}, {0.924, 0.997, 0.997, 0.997}},
      {50, 0.1, {0.877, 0.941, 0.971, 0.971}, {0.965, 0.997, 0.997, 0.997}},
      {50, 0.2, {0.939, 0.952, 0.952, 0.952}, {0.98, 0.998, 0.998, 0.998}},
      {100, 0.05, {0.878, 0.934, 0.965, 0.965}, {0.963, 0.996, 0.999, 0.999}},
      {100, 0.1, {0.933, 0.956, 0.972, 0.938}, {0.977, 0.998, 0.998, 0.998}},
      {100, 0.2, {0.933, 0.954, 0.94, 0.94}, {0.994, 0.997, 0.998, 0.998}},
  };
  return rows;
}

std::optional<double> published_value(std::int64_t n, double p, double level, Method m) {
  const auto col = std::find(kTable1Methods.begin(), kTable1Methods.end(), m);
  if (col == kTable1Methods.end()) return std::nullopt;
  const auto idx = static_cast<std::size_t>(col - kTable1Methods.begin());
  for (const auto& row : published_table1()) {
    if (row.n != n || row.p != p) continue;
    if (level == 0.95) return row.at95[idx];
    if (level == 0.99) return row.at99[idx];
  }
  return std::nullopt;
}

std::vector<std::pair<std::int64_t, double>> table1_table_grid() {
  std::vector<std::pair<std::int64_t, double>> out;
  for (const auto& row : published_table1()) out.emplace_back(row.n, row.p);
  return out;
}

std::vector<std::pair<std::int64_t, double>> table1_text_grid() {
  std::vector<std::pair<std::int64_t, double>> out;
  for (std::int64_t n : {10, 30, 50, 100}) {
    for (double p : {0.01, 0.05, 0.09}) out.emplace_back(n, p);
  }
  return out;
}

}  // namespace propint

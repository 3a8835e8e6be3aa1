#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace propint {

/// One cell of tabular output; monostate renders as an empty CSV field or
/// JSON null.
using Cell = std::variant<std::monostate, std::string, double, std::int64_t, bool>;

/// Column-named records shared by the table, CSV and JSON renderers.
struct RecordTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class Format { table, csv, json };

/// Throws std::invalid_argument for anything but "table", "csv" or "json".
Format parse_format(std::string_view s);

/// Tables print doubles with 7 significant digits; CSV and JSON use the
/// shortest representation that round-trips.
std::string render(const RecordTable& t, Format f);

}  // namespace propint

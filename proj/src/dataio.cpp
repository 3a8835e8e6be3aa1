#include "propint/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "propint/errors.hpp"

namespace propint {
namespace {

struct CsvRow {
  std::vector<std::string> fields;
  std::int64_t line;  // line on which the row starts
};

// Reads one CSV record; returns false at end of input. Quoted fields may
// span lines, so `line` is advanced by every newline consumed.
bool read_csv_row(std::istream& in, std::int64_t& line, CsvRow& row) {
  row.fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  row.line = line;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  char ch;
  while (in.get(ch)) {
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      row.fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (ch == '\r' && in.peek() == '\n') {
      // CRLF: handled by the '\n' branch.
    } else if (ch == '\n') {
      ++line;
      row.fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) throw DataError(fmt::format("line {}: unterminated quoted field", row.line));
  row.fields.push_back(std::move(field));
  ++line;
  return true;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<std::uint8_t> parse_outcome(std::string_view raw) {
  const auto v = lower(trim(raw));
  if (v == "1" || v == "true" || v == "yes") return 1;
  if (v == "0" || v == "false" || v == "no") return 0;
  return std::nullopt;
}

bool is_blank(const CsvRow& row) { return row.fields.size() == 1 && row.fields[0].empty(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool matches(const SubjectRecord& r, const Filter& f) {
  return std::all_of(f.begin(), f.end(), [&](const auto& clause) {
    const auto it = r.attributes.find(clause.first);
    return it != r.attributes.end() && it->second == clause.second;
  });
}

}  // namespace

Dataset load_dataset(std::istream& in) {
  std::int64_t line = 1;
  CsvRow header;
  if (!read_csv_row(in, line, header)) throw DataError("empty input: header row required");
  if (!header.fields.empty() && header.fields[0].starts_with("\xEF\xBB\xBF")) {
    header.fields[0].erase(0, 3);
  }
  for (auto& h : header.fields) h = trim(h);

  Dataset ds;
  std::optional<std::size_t> outcome_col;
  std::optional<std::size_t> id_col;
  std::set<std::string> seen_columns;
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    const auto& name = header.fields[i];
    if (!seen_columns.insert(name).second) {
      throw DataError(fmt::format("duplicate column '{}' in header", name));
    }
    if (name == kOutcomeColumn) {
      outcome_col = i;
    } else if (name == kSubjectIdColumn) {
      id_col = i;
    } else {
      ds.columns.push_back(name);
    }
  }
  if (!outcome_col) throw DataError("missing required 'outcome' column");

  std::set<std::string> ids;
  CsvRow row;
  while (read_csv_row(in, line, row)) {
    if (is_blank(row)) continue;
    if (row.fields.size() != header.fields.size()) {
      throw DataError(fmt::format("line {}: expected {} fields, found {}", row.line,
                                  header.fields.size(), row.fields.size()));
    }
    SubjectRecord rec;
    const auto outcome = parse_outcome(row.fields[*outcome_col]);
    if (!outcome) {
      throw DataError(fmt::format("line {}: invalid outcome value '{}'", row.line,
                                  row.fields[*outcome_col]));
    }
    rec.outcome = *outcome;
    rec.subject_id = id_col ? trim(row.fields[*id_col]) : fmt::format("row-{}", row.line);
    if (rec.subject_id.empty()) throw DataError(fmt::format("line {}: empty subject_id", row.line));
    if (!ids.insert(rec.subject_id).second) {
      throw DataError(fmt::format("line {}: duplicate subject_id '{}'", row.line, rec.subject_id));
    }
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
      if (i == *outcome_col || (id_col && i == *id_col)) continue;
      rec.attributes.emplace(header.fields[i], trim(row.fields[i]));
    }
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  return load_dataset(in);
}

void write_dataset(const Dataset& ds, std::ostream& out) {
  out << kSubjectIdColumn << ',' << kOutcomeColumn;
  for (const auto& c : ds.columns) out << ',' << csv_escape(c);
  out << '\n';
  for (const auto& r : ds.records) {
    out << csv_escape(r.subject_id) << ',' << static_cast<int>(r.outcome);
    for (const auto& c : ds.columns) {
      const auto it = r.attributes.find(c);
      out << ',' << csv_escape(it == r.attributes.end() ? std::string{} : it->second);
    }
    out << '\n';
  }
}

Filter parse_filter(std::string_view text) {
  Filter f;
  const auto t = trim(text);
  if (t.empty()) return f;
  std::string_view rest = t;
  while (true) {
    const auto comma = rest.find(',');
    const auto clause = rest.substr(0, comma);
    const auto eq = clause.find('=');
    if (eq == std::string_view::npos) {
      throw DataError(fmt::format("filter clause '{}' is not of the form column=value", clause));
    }
    auto col = trim(clause.substr(0, eq));
    if (col.empty()) throw DataError(fmt::format("filter clause '{}' has an empty column", clause));
    f.emplace_back(std::move(col), trim(clause.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return f;
}

std::string describe_filter(const Filter& f) {
  if (f.empty()) return "(all)";
  std::string out;
  for (const auto& [col, val] : f) {
    if (!out.empty()) out += ',';
    out += col + "=" + val;
  }
  return out;
}

SubgroupCounts aggregate(const Dataset& ds, const Filter& filter) {
  for (const auto& [col, val] : filter) {
    if (std::find(ds.columns.begin(), ds.columns.end(), col) == ds.columns.end()) {
      throw DataError(fmt::format("unknown filter column '{}'", col));
    }
  }
  std::int64_t n = 0;
  std::int64_t k = 0;
  for (const auto& r : ds.records) {
    if (!matches(r, filter)) continue;
    ++n;
    k += r.outcome;
  }
  return SubgroupCounts{filter, Counts(n, k)};
}

std::vector<AnalysisRow> analyze(const Dataset& ds, const std::vector<Filter>& filters,
                                 const std::vector<Method>& methods, const ConfidenceLevel& lv,
                                 const IntervalOptions& opts) {
  if (methods.empty()) throw DomainError("analyze: at least one method is required");
  std::vector<AnalysisRow> rows;
  for (const auto& f : filters) {
    const auto sub = aggregate(ds, f);
    for (Method m : methods) {
      AnalysisRow row{f, m, sub.counts, std::nullopt, {}};
      if (sub.counts.n == 0) {
        row.error = "empty subgroup";
      } else {
        try {
          row.interval = compute_interval(m, sub.counts, lv, opts);
        } catch (const std::exception& e) {
          row.error = e.what();
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

Dataset synthetic_dataset(const std::vector<SubgroupSpec>& specs) {
  Dataset ds;
  for (const auto& s : specs) {
    if (s.n < 0 || s.k < 0 || s.k > s.n) {
      throw DomainError(fmt::format("subgroup spec needs 0 <= k <= n, got n={}, k={}", s.n, s.k));
    }
    for (const auto& [col, val] : s.attributes) {
      if (std::find(ds.columns.begin(), ds.columns.end(), col) == ds.columns.end()) {
        ds.columns.push_back(col);
      }
    }
  }
  std::int64_t next_id = 1;
  for (const auto& s : specs) {
    for (std::int64_t i = 0; i < s.n; ++i) {
      ds.records.push_back(SubjectRecord{fmt::format("S{:05d}", next_id++),
                                         static_cast<std::uint8_t>(i < s.k ? 1 : 0),
                                         s.attributes});
    }
  }
  return ds;
}

std::vector<SubgroupSpec> heart_failure_fixture_specs() {
  auto g = [](const char* sex, const char* region, const char* arm, std::int64_t n,
              std::int64_t k) {
    return SubgroupSpec{{{"sex", sex}, {"region", region}, {"arm", arm}}, n, k};
  };
  return {
      g("female", "1", "control", 150, 27),   g("female", "1", "treatment", 150, 22),
      g("female", "2", "control", 140, 26),   g("female", "2", "treatment", 140, 21),
      g("female", "3", "control", 90, 10),    g("female", "3", "treatment", 90, 3),
      g("male", "1", "control", 210, 40),     g("male", "1", "treatment", 210, 35),
      g("male", "2", "control", 200, 38),     g("male", "2", "treatment", 200, 33),
      g("male", "3", "control", 210, 45),     g("male", "3", "treatment", 210, 38),
  };
}

}  // namespace propint

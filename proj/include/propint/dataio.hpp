#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "propint/intervals.hpp"
#include "propint/numerics.hpp"

namespace propint {

/// One subject: a binary outcome plus categorical attributes keyed by column.
struct SubjectRecord {
  std::string subject_id;
  std::uint8_t outcome;
  std::map<std::string, std::string> attributes;
};

struct Dataset {
  /// Attribute columns in header order (excludes subject_id and outcome).
  std::vector<std::string> columns;
  std::vector<SubjectRecord> records;
};

inline constexpr std::string_view kOutcomeColumn = "outcome";
inline constexpr std::string_view kSubjectIdColumn = "subject_id";

/// Parses comma-separated UTF-8 text with a header row. Fields may be quoted
/// with "..." and embedded quotes doubled. The `outcome` column is required;
/// values 0/1/true/false/yes/no are accepted case-insensitively. When no
/// `subject_id` column exists, ids are synthesized as "row-<line>".
///
/// Throws DataError on a missing outcome column, a bad outcome value or a
/// ragged row (message names the 1-based line), or a duplicate subject id.
Dataset load_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);

/// Serializes in the format load_dataset reads: subject_id, outcome, then
/// the attribute columns.
void write_dataset(const Dataset& ds, std::ostream& out);

/// Conjunction of column == category requirements, in the order given.
using Filter = std::vector<std::pair<std::string, std::string>>;

/// Parses "col=val[,col=val...]"; the empty string is the empty filter.
Filter parse_filter(std::string_view text);
/// Inverse of parse_filter; the empty filter renders as "(all)".
std::string describe_filter(const Filter& f);

struct SubgroupCounts {
  Filter filter;
  Counts counts;
};

/// Counts over records matching every clause of `filter`. n = 0 is allowed.
/// Throws DataError if a filter column is not in the dataset.
SubgroupCounts aggregate(const Dataset& ds, const Filter& filter);

struct AnalysisRow {
  Filter filter;
  Method method;
  Counts counts;
  std::optional<Interval> interval;
  /// Set instead of `interval` when construction failed (e.g. empty subgroup).
  std::string error;
};

/// Rows for filters x methods in that order. Per-row failures are reported
/// in AnalysisRow::error rather than thrown. Throws DomainError if `methods`
/// is empty and DataError for unknown filter columns.
std::vector<AnalysisRow> analyze(const Dataset& ds, const std::vector<Filter>& filters,
                                 const std::vector<Method>& methods, const ConfidenceLevel& lv,
                                 const IntervalOptions& opts = {});

struct SubgroupSpec {
  std::map<std::string, std::string> attributes;
  std::int64_t n;
  std::int64_t k;
};

/// Builds a dataset with exactly the requested (n, k) per subgroup. Subject
/// ids are sequential ("S00001", ...); within a subgroup the k events come first.
Dataset synthetic_dataset(const std::vector<SubgroupSpec>& specs);

/// Synthetic stand-in for a heart-failure trial: columns sex, region, arm;
/// 2000 subjects with 338 deaths overall, and female/region 3 subgroups of
/// (n=90, k=10) in the control arm and (n=90, k=3) in the treatment arm.
std::vector<SubgroupSpec> heart_failure_fixture_specs();

}  // namespace propint

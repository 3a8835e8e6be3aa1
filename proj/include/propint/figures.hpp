#pragma once

#include <string>
#include <string_view>

#include "propint/records.hpp"

namespace propint {

enum class FigureId { margins_vs_n, coverage_vs_p, me_vs_p, coverage_vs_n, me_vs_n };

/// Accepts "margins-vs-n", "coverage-vs-p", "me-vs-p", "coverage-vs-n",
/// "me-vs-n"; throws std::invalid_argument otherwise.
FigureId parse_figure_id(std::string_view s);
std::string_view figure_name(FigureId id);

/// Plot-ready records for one figure at level 0.90, 0.95 or 0.99.
///
///   margins-vs-n            method,level,n,pq,margin
///                           wald and quadratic, n = 5..100, pq = 0, 0.0025, ..., 0.25
///   coverage-vs-p, me-vs-p  method,level,n,p,coverage,expected_me
///                           four figure methods, n in {10, 20, 30, 100}, p = 0, 0.001, ..., 1
///   coverage-vs-n, me-vs-n  method,level,n,p,coverage,expected_me
///                           four figure methods, n = 5..100, p in {0.01, 0.05, 0.1, 0.2}
///
/// Throws DomainError for any other level.
RecordTable figure_data(FigureId id, double level, unsigned threads = 0);

/// figure_data rendered as CSV.
std::string emit_figure_data(FigureId id, double level, unsigned threads = 0);

}  // namespace propint

#include "propint/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "propint/dataio.hpp"
#include "propint/errors.hpp"
#include "propint/evaluation.hpp"
#include "propint/figures.hpp"
#include "propint/intervals.hpp"
#include "propint/records.hpp"
#include "propint/recommend.hpp"
#include "propint/simulation.hpp"
#include "propint/table1.hpp"

namespace propint::cli {
namespace {

/// Flag values that parse but do not make sense together.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

constexpr const char* kSeedEnv = "PROPINT_SEED";

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError(fmt::format("'{}' is not a number", s));
  }
  if (used != s.size()) throw UsageError(fmt::format("'{}' is not a number", s));
  return v;
}

std::int64_t to_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw UsageError(fmt::format("'{}' is not an integer", s));
  }
  if (used != s.size()) throw UsageError(fmt::format("'{}' is not an integer", s));
  return v;
}

// "start:stop:step"
std::vector<double> parse_real_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw UsageError(fmt::format("grid '{}' must be START:STOP:STEP", spec));
  return linear_grid(to_double(parts[0]), to_double(parts[1]), to_double(parts[2]));
}

// "first:last"
std::vector<std::int64_t> parse_int_range(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 2) throw UsageError(fmt::format("range '{}' must be FIRST:LAST", spec));
  const auto first = to_int(parts[0]);
  const auto last = to_int(parts[1]);
  if (last < first) throw UsageError(fmt::format("range '{}' is empty", spec));
  std::vector<std::int64_t> out;
  for (auto n = first; n <= last; ++n) out.push_back(n);
  return out;
}

std::vector<Method> to_methods(const std::vector<std::string>& names,
                               std::vector<Method> fallback) {
  if (names.empty()) return fallback;
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

std::vector<ConfidenceLevel> to_levels(const std::vector<double>& values) {
  std::vector<ConfidenceLevel> out;
  for (double v : values) out.emplace_back(v);
  return out;
}

std::string join_methods(const std::vector<Method>& ms) {
  std::string out;
  for (Method m : ms) {
    if (!out.empty()) out += ';';
    out += method_name(m);
  }
  return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw UsageError(fmt::format("{}='{}' is not an unsigned integer", kSeedEnv, env));
    return v;
  }
  return kDefaultSeed;
}

struct Settings {
  std::string format = "table";
  std::string output;
  unsigned threads = 0;

  std::int64_t n = 0;
  std::int64_t k = 0;
  double p = 0.0;
  double level = 0.95;
  std::vector<std::string> methods;
  std::string wald_cc_form = "paper";
  bool clip = false;
  std::string bits;

  std::vector<std::int64_t> n_list;
  std::string n_range;
  std::vector<double> p_list;
  std::string p_grid;
  std::vector<double> pq_list;
  std::string pq_grid;
  std::vector<double> levels{0.95};

  bool exact = false;
  bool simulate = false;
  std::int64_t reps = 10000;
  std::optional<std::uint64_t> seed;

  std::string input;
  std::vector<std::string> filters;

  std::string figure_id;
  std::string grid = "table";
  std::int64_t resolution = 1000;
  std::optional<double> p_planning;
};

IntervalOptions interval_options(const Settings& s) {
  IntervalOptions o;
  o.wald_cc_form = s.wald_cc_form == "classical" ? WaldCcForm::classical : WaldCcForm::paper;
  return o;
}

std::vector<std::int64_t> n_values(const Settings& s) {
  if (!s.n_range.empty()) {
    if (!s.n_list.empty()) throw UsageError("give either --n or --n-range, not both");
    return parse_int_range(s.n_range);
  }
  if (s.n_list.empty()) throw UsageError("--n or --n-range is required");
  return s.n_list;
}

std::vector<double> p_values(const Settings& s) {
  if (!s.p_grid.empty()) {
    if (!s.p_list.empty()) throw UsageError("give either --p or --p-grid, not both");
    return parse_real_grid(s.p_grid);
  }
  if (s.p_list.empty()) throw UsageError("--p or --p-grid is required");
  return s.p_list;
}

RecordTable run_ci(const Settings& s) {
  const ConfidenceLevel lv(s.level);
  const Counts c(s.n, s.k);
  const auto opts = interval_options(s);
  RecordTable t{{"method", "level", "n", "k", "lower", "upper", "half_width", "degenerate",
                 "overshoot"},
                {}};
  for (Method m : to_methods(s.methods, {kAllMethods.begin(), kAllMethods.end()})) {
    const auto ci = compute_interval(m, c, lv, opts);
    t.rows.push_back({std::string(method_name(m)), s.level, c.n, c.k,
                      s.clip ? ci.clipped_lower() : ci.lower,
                      s.clip ? ci.clipped_upper() : ci.upper, ci.half_width(), ci.degenerate,
                      ci.overshoot});
  }
  return t;
}

RecordTable run_stat(const Settings& s) {
  RecordTable t{{"n", "k", "p", "closed_form"}, {}};
  if (s.bits.empty()) {
    const Counts c(s.n, s.k);
    t.rows.push_back({c.n, c.k, s.p, stat_quadratic_closed(c, s.p)});
    return t;
  }
  std::vector<std::uint8_t> seq;
  for (const auto& b : split(s.bits, ',')) {
    if (b != "0" && b != "1") throw UsageError(fmt::format("--bits entry '{}' is not 0 or 1", b));
    seq.push_back(b == "1" ? 1 : 0);
  }
  std::int64_t k = 0;
  for (auto b : seq) k += b;
  const Counts c(static_cast<std::int64_t>(seq.size()), k);
  t.columns.push_back("pairwise_form");
  t.rows.push_back({c.n, c.k, s.p, stat_quadratic_closed(c, s.p), stat_quadratic_form(seq, s.p)});
  return t;
}

RecordTable run_grid(const Settings& s, bool coverage) {
  if (s.exact && s.simulate) throw UsageError("--exact and --simulate are mutually exclusive");
  const SweepGrid grid{n_values(s), p_values(s), to_levels(s.levels),
                       to_methods(s.methods, {kFigureMethods.begin(), kFigureMethods.end()})};
  grid.validate();
  const auto opts = interval_options(s);

  if (s.simulate) {
    if (!coverage) throw UsageError("--simulate applies to coverage only");
    const auto seed = resolve_seed(s.seed);
    RecordTable t{{"method", "level", "n", "p", "replications", "seed", "empirical_coverage",
                   "standard_error", "exact_coverage"},
                  {}};
    for (Method m : grid.methods)
      for (const auto& lv : grid.levels)
        for (auto n : grid.n_values)
          for (double p : grid.p_values) {
            const auto r = simulate_coverage(m, n, p, lv, s.reps, seed, s.threads, opts);
            t.rows.push_back({std::string(method_name(m)), lv.level(), n, p, r.replications,
                              static_cast<std::int64_t>(seed), r.empirical_coverage,
                              r.standard_error, exact_coverage(m, n, p, lv, opts)});
          }
    return t;
  }

  RecordTable t{{"method", "level", "n", "p", coverage ? "coverage" : "expected_me"}, {}};
  for (const auto& pt : sweep(grid, s.threads, opts)) {
    t.rows.push_back({std::string(method_name(pt.method)), pt.level.level(), pt.n, pt.p,
                      coverage ? pt.coverage : pt.expected_me});
  }
  return t;
}

RecordTable run_margin_profile(const Settings& s) {
  const ConfidenceLevel lv(s.level);
  std::vector<double> pqs;
  if (!s.pq_grid.empty()) {
    if (!s.pq_list.empty()) throw UsageError("give either --pq or --pq-grid, not both");
    pqs = parse_real_grid(s.pq_grid);
  } else if (!s.pq_list.empty()) {
    pqs = s.pq_list;
  } else {
    throw UsageError("--pq or --pq-grid is required");
  }
  const auto opts = interval_options(s);
  RecordTable t{{"method", "level", "n", "pq", "margin"}, {}};
  for (Method m : to_methods(s.methods, {Method::wald, Method::quadratic}))
    for (auto n : n_values(s))
      for (double pq : pqs)
        t.rows.push_back({std::string(method_name(m)), s.level, n, pq,
                          margin_profile(m, n, pq, lv, opts)});
  return t;
}

RecordTable run_recommend(const Settings& s) {
  const ConfidenceLevel lv(s.level);
  const auto r = recommend(s.n, s.p, lv);
  std::string note = "thresholds refer to the true proportion; applying them to an estimate is an extrapolation";
  if (r.level_snapped) note += fmt::format("; level {} mapped to studied level {}", s.level, r.studied_level);
  return RecordTable{{"n", "p_ref", "level", "preferred", "acceptable", "rule", "note"},
                     {{s.n, s.p, s.level, std::string(method_name(r.preferred)),
                       join_methods(r.acceptable), r.rationale, note}}};
}

RecordTable run_analyze(const Settings& s) {
  const ConfidenceLevel lv(s.level);
  const auto ds = load_dataset(std::filesystem::path(s.input));
  std::vector<Filter> filters;
  for (const auto& f : s.filters) filters.push_back(parse_filter(f));
  if (filters.empty()) filters.emplace_back();
  const auto rows = analyze(ds, filters, to_methods(s.methods, {Method::wald, Method::quadratic}),
                            lv, interval_options(s));
  RecordTable t{{"filter", "method", "level", "n", "k", "p_hat", "lower", "upper", "degenerate",
                 "overshoot", "error"},
                {}};
  for (const auto& r : rows) {
    std::vector<Cell> row{describe_filter(r.filter), std::string(method_name(r.method)), s.level,
                          r.counts.n, r.counts.k};
    if (r.interval) {
      row.insert(row.end(), {r.counts.p_hat(), r.interval->lower, r.interval->upper,
                             r.interval->degenerate, r.interval->overshoot, std::monostate{}});
    } else {
      row.insert(row.end(), {std::monostate{}, std::monostate{}, std::monostate{},
                             std::monostate{}, std::monostate{}, r.error});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// The six rule-of-thumb predicates: min(np, nq), min(n p_hat, n q_hat) and
// n p_hat q_hat, each against 5 and 10.
RecordTable run_rules(const Settings& s) {
  const Counts c(s.n, s.k);
  if (c.n == 0) throw DomainError("rules require n >= 1");
  const double n = static_cast<double>(c.n);
  const double p_true = s.p_planning.value_or(c.p_hat());
  if (!(p_true >= 0.0 && p_true <= 1.0)) throw DomainError("--p must lie in [0,1]");
  const std::string p_note = s.p_planning ? "planning p" : "p_hat substituted for p";
  const double min_np = std::min(n * p_true, n * (1.0 - p_true));
  const double min_nphat = std::min(n * c.p_hat(), n * c.q_hat());
  const double npq = n * c.pq_hat();

  RecordTable t{{"predicate", "value", "threshold", "holds", "note"}, {}};
  for (double threshold : {5.0, 10.0}) {
    t.rows.push_back({std::string("min(np,nq)"), min_np, threshold, min_np >= threshold, p_note});
  }
  for (double threshold : {5.0, 10.0}) {
    t.rows.push_back({std::string("min(np_hat,nq_hat)"), min_nphat, threshold,
                      min_nphat >= threshold, std::monostate{}});
  }
  for (double threshold : {5.0, 10.0}) {
    t.rows.push_back({std::string("np_hat*q_hat"), npq, threshold, npq >= threshold,
                      std::monostate{}});
  }
  return t;
}

RecordTable run_limit(const Settings& s) {
  const auto r = limit_check(s.n, s.p, s.resolution);
  return RecordTable{{"n", "p", "support_size", "sup_distance", "grid_sup_distance", "l1_diagnostic"},
                     {{r.n, r.p, static_cast<std::int64_t>(r.support.size()), r.sup_distance,
                       r.grid_sup_distance, r.l1_diagnostic}}};
}

RecordTable run_table1(const Settings& s) {
  if (s.grid != "table" && s.grid != "text") throw UsageError("--grid must be 'table' or 'text'");
  const auto cells = s.grid == "table" ? table1_table_grid() : table1_text_grid();
  const auto methods = to_methods(s.methods, {kTable1Methods.begin(), kTable1Methods.end()});
  const auto seed = resolve_seed(s.seed);
  std::vector<std::string> cols{"grid", "n", "p", "level", "method", "exact_coverage", "printed"};
  if (s.simulate) {
    cols.insert(cols.end(), {"empirical_coverage", "standard_error", "seed"});
  }
  RecordTable t{cols, {}};
  for (double level : s.levels) {
    const ConfidenceLevel lv(level);
    for (const auto& [n, p] : cells) {
      for (Method m : methods) {
        const auto printed = published_value(n, p, level, m);
        std::vector<Cell> row{s.grid, n, p, level, std::string(method_name(m)),
                              exact_coverage(m, n, p, lv)};
        row.push_back(printed ? Cell{*printed} : Cell{std::monostate{}});
        if (s.simulate) {
          const auto r = simulate_coverage(m, n, p, lv, s.reps, seed, s.threads);
          row.insert(row.end(), {r.empirical_coverage, r.standard_error,
                                 static_cast<std::int64_t>(seed)});
        }
        t.rows.push_back(std::move(row));
      }
    }
  }
  return t;
}

std::string run_fixture() {
  std::ostringstream out;
  write_dataset(synthetic_dataset(heart_failure_fixture_specs()), out);
  return out.str();
}

void add_interval_flags(CLI::App* sub, Settings& s) {
  sub->add_option("--method,--methods", s.methods, "Methods (comma separated)")->delimiter(',');
  sub->add_option("--wald-cc-form", s.wald_cc_form, "Wald-CC correction placement")
      ->check(CLI::IsMember({"paper", "classical"}));
}

void add_grid_flags(CLI::App* sub, Settings& s) {
  sub->add_option("--n", s.n_list, "Sample sizes (comma separated)")->delimiter(',');
  sub->add_option("--n-range", s.n_range, "Inclusive sample-size range FIRST:LAST");
  sub->add_option("--p", s.p_list, "True proportions (comma separated)")->delimiter(',');
  sub->add_option("--p-grid", s.p_grid, "Proportion grid START:STOP:STEP");
  sub->add_option("--level,--levels", s.levels, "Confidence levels (comma separated)")
      ->delimiter(',');
  sub->add_option("--threads", s.threads, "Worker threads (0 = all cores)");
  add_interval_flags(sub, s);
}

}  // namespace

CommandResult execute(const std::vector<std::string>& args) {
  Settings s;
  CLI::App app{"Binomial proportion confidence intervals and their exact evaluation", "propint"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", s.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--output", s.output, "Write output to FILE instead of stdout");

  auto* ci = app.add_subcommand("ci", "Confidence intervals for k successes in n trials");
  ci->add_option("--n", s.n, "Trials")->required();
  ci->add_option("--k", s.k, "Successes")->required();
  ci->add_option("--level", s.level, "Confidence level");
  ci->add_flag("--clip", s.clip, "Clip displayed bounds to [0,1] (flags stay unclipped)");
  add_interval_flags(ci, s);

  auto* stat = app.add_subcommand("stat", "Quadratic-form statistic at a hypothesized p");
  stat->add_option("--n", s.n, "Trials");
  stat->add_option("--k", s.k, "Successes");
  stat->add_option("--p", s.p, "Hypothesized proportion")->required();
  stat->add_option("--bits", s.bits, "Raw 0/1 sequence (comma separated); overrides --n/--k");

  auto* coverage = app.add_subcommand("coverage", "Coverage probability over a grid");
  add_grid_flags(coverage, s);
  coverage->add_flag("--exact", s.exact, "Exact binomial summation (default)");
  coverage->add_flag("--simulate", s.simulate, "Monte-Carlo estimate instead");
  coverage->add_option("--reps", s.reps, "Monte-Carlo replications");
  coverage->add_option("--seed", s.seed, "Monte-Carlo seed (default $PROPINT_SEED or 20240501)");

  auto* me = app.add_subcommand("expected-me", "Expected margin of error over a grid");
  add_grid_flags(me, s);
  me->add_flag("--exact", s.exact, "Exact binomial summation (default)");

  auto* profile = app.add_subcommand("margin-profile", "Margin of error as a function of p_hat*q_hat");
  profile->add_option("--method,--methods", s.methods, "wald, wald_cc and/or quadratic")
      ->delimiter(',');
  profile->add_option("--n", s.n_list, "Sample sizes")->delimiter(',');
  profile->add_option("--n-range", s.n_range, "Inclusive sample-size range FIRST:LAST");
  profile->add_option("--pq", s.pq_list, "Values of p_hat*q_hat")->delimiter(',');
  profile->add_option("--pq-grid", s.pq_grid, "Grid START:STOP:STEP of p_hat*q_hat");
  profile->add_option("--level", s.level, "Confidence level");

  auto* rec = app.add_subcommand("recommend", "Suggested interval method");
  rec->add_option("--n", s.n, "Trials")->required();
  rec->add_option("--p", s.p, "Reference proportion (planning value or estimate)")->required();
  rec->add_option("--level", s.level, "Confidence level");

  auto* an = app.add_subcommand("analyze", "Subgroup intervals from a subject-level CSV");
  an->add_option("--input", s.input, "CSV file")->required();
  an->add_option("--filter", s.filters, "Subgroup filter col=val[,col=val]; repeatable");
  an->add_option("--level", s.level, "Confidence level");
  add_interval_flags(an, s);

  auto* rules = app.add_subcommand("rules", "Rule-of-thumb predicates for the Wald interval");
  rules->add_option("--n", s.n, "Trials")->required();
  rules->add_option("--k", s.k, "Successes")->required();
  rules->add_option("--p", s.p_planning, "Planning value of the true proportion");

  auto* figure = app.add_subcommand("figure", "Plot data for the coverage and margin figures");
  figure->add_option("--id", s.figure_id, "Figure identifier")
      ->required()
      ->check(CLI::IsMember(
          {"margins-vs-n", "coverage-vs-p", "me-vs-p", "coverage-vs-n", "me-vs-n"}));
  figure->add_option("--level", s.level, "0.9, 0.95 or 0.99");
  figure->add_option("--threads", s.threads, "Worker threads (0 = all cores)");

  auto* limit = app.add_subcommand("limit", "Distance of the statistic's exact law from chi-square(1)");
  limit->add_option("--n", s.n, "Trials")->required();
  limit->add_option("--p", s.p, "True proportion")->required();
  limit->add_option("--resolution", s.resolution, "Extra t-grid points");

  auto* table1 = app.add_subcommand("table1", "Exact (and simulated) coverage on the published grid");
  table1->add_option("--grid", s.grid, "'table' or 'text'");
  table1->add_option("--level,--levels", s.levels, "Confidence levels")->delimiter(',');
  add_interval_flags(table1, s);
  table1->add_flag("--simulate", s.simulate, "Add Monte-Carlo estimates");
  table1->add_option("--reps", s.reps, "Monte-Carlo replications");
  table1->add_option("--seed", s.seed, "Monte-Carlo seed (default $PROPINT_SEED or 20240501)");
  table1->add_option("--threads", s.threads, "Worker threads (0 = all cores)");

  app.add_subcommand("fixture", "Write the synthetic heart-failure subgroup dataset as CSV");

  std::vector<std::string> argv_storage{"propint"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  CommandResult result;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    result.stdout_payload = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = kExitUsage;
    result.stderr_payload = fmt::format("error: {}\n\n{}", e.what(), app.help());
    return result;
  }

  if (table1->parsed() && s.levels == std::vector<double>{0.95} &&
      table1->count("--level") == 0) {
    s.levels = {0.95, 0.99};
  }

  try {
    std::string payload;
    const auto* sub = app.get_subcommands().front();
    const bool format_given = app.count("--format") > 0;
    auto rendered = [&](const RecordTable& t, Format fallback) {
      return render(t, format_given ? parse_format(s.format) : fallback);
    };
    const Format fmt_default = parse_format(s.format);
    if (sub == ci) payload = rendered(run_ci(s), fmt_default);
    else if (sub == stat) payload = rendered(run_stat(s), fmt_default);
    else if (sub == coverage) payload = rendered(run_grid(s, true), fmt_default);
    else if (sub == me) payload = rendered(run_grid(s, false), fmt_default);
    else if (sub == profile) payload = rendered(run_margin_profile(s), fmt_default);
    else if (sub == rec) payload = rendered(run_recommend(s), fmt_default);
    else if (sub == an) payload = rendered(run_analyze(s), fmt_default);
    else if (sub == rules) payload = rendered(run_rules(s), fmt_default);
    else if (sub == limit) payload = rendered(run_limit(s), fmt_default);
    else if (sub == table1) payload = rendered(run_table1(s), fmt_default);
    else if (sub == figure) {
      payload = rendered(figure_data(parse_figure_id(s.figure_id), s.level, s.threads), Format::csv);
    } else {
      payload = run_fixture();
    }

    if (!s.output.empty()) {
      std::ofstream out(s.output, std::ios::binary);
      if (!out) throw DataError(fmt::format("cannot write '{}'", s.output));
      out << payload;
      if (!out) throw DataError(fmt::format("error writing '{}'", s.output));
    } else {
      result.stdout_payload = std::move(payload);
    }
  } catch (const UsageError& e) {
    result.exit_code = kExitUsage;
    result.stderr_payload = fmt::format("error: {}\n", e.what());
  } catch (const std::exception& e) {
    result.exit_code = kExitDomain;
    result.stderr_payload = fmt::format("error: {}\n", e.what());
  }
  return result;
}

}  // namespace propint::cli

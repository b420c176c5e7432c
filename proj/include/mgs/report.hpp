#pragma once

// CSV and JSON serialization of experiment reports.
//
// CSV: '#' header lines carrying version, schema, config and config hash, then
// columns experiment,n,statistic,value,seed_count,config_hash with one row per
// (n, statistic); run-level statistics leave n empty.
// JSON: {"schema_version", "version", "config", "config_hash", "report"}.
// Neither format contains timestamps, so equal configs give equal bytes.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "experiments.hpp"
#include "version.hpp"

namespace mgs {

using Json = nlohmann::json;

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Keys are sorted by nlohmann::json, so dump() is canonical.
inline std::string config_hash(const Json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(config.dump()));
  return buf;
}

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const TheilSen& f) {
  return {{"slope", f.slope},       {"intercept", f.intercept},   {"slope_lo", f.slope_lo},
          {"slope_hi", f.slope_hi}, {"confidence", f.confidence}, {"points", f.points}};
}

inline Json to_json(const TrajectoryReport& r) {
  Json summary = Json::array();
  for (const auto& s : r.summary)
    summary.push_back({{"n", s.n}, {"median", s.median}, {"q1", s.q1}, {"q3", s.q3}, {"mean", s.mean},
                       {"min", s.min}, {"max", s.max}});
  Json trend = {{"verdict", to_string(r.trend.verdict)},
                {"from_n", r.trend.from_n},
                {"points", r.trend.points},
                {"fit", to_json(r.trend.fit)},
                {"forced", r.trend.forced},
                {"note", r.trend.note}};
  Json j = {{"experiment", r.experiment},
            {"measure", r.measure},
            {"gauge", r.gauge},
            {"n_grid", r.n_grid},
            {"seeds", r.seeds},
            {"series", r.series},
            {"summary", summary},
            {"trend", trend},
            {"all_admissible", r.all_admissible},
            {"zero_count_decomposition_holds", r.zero_count_decomposition_holds},
            {"epsilon", r.epsilon},
            {"deviation_event_frequency", r.deviation_event_frequency}};
  j["max_pmu_identity_gap"] = r.max_pmu_identity_gap ? Json(*r.max_pmu_identity_gap) : Json(nullptr);
  return j;
}

inline TrajectoryReport trajectory_from_json(const Json& j) {
  TrajectoryReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.measure = j.at("measure").get<std::string>();
  r.gauge = j.at("gauge").get<std::string>();
  r.n_grid = j.at("n_grid").get<std::vector<std::uint64_t>>();
  r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  r.series = j.at("series").get<std::vector<std::vector<double>>>();
  for (const auto& s : j.at("summary"))
    r.summary.push_back({s.at("n").get<std::uint64_t>(), s.at("median").get<double>(), s.at("q1").get<double>(),
                         s.at("q3").get<double>(), s.at("mean").get<double>(), s.at("min").get<double>(),
                         s.at("max").get<double>()});
  const Json& t = j.at("trend");
  r.trend.verdict = parse_trend(t.at("verdict").get<std::string>());
  r.trend.from_n = t.at("from_n").get<std::uint64_t>();
  r.trend.points = t.at("points").get<std::size_t>();
  r.trend.forced = t.at("forced").get<bool>();
  r.trend.note = t.at("note").get<std::string>();
  const Json& f = t.at("fit");
  r.trend.fit = {f.at("slope").get<double>(),    f.at("intercept").get<double>(),  f.at("slope_lo").get<double>(),
                 f.at("slope_hi").get<double>(), f.at("confidence").get<double>(), f.at("points").get<std::size_t>()};
  r.all_admissible = j.at("all_admissible").get<bool>();
  r.zero_count_decomposition_holds = j.at("zero_count_decomposition_holds").get<bool>();
  r.epsilon = j.at("epsilon").get<double>();
  r.deviation_event_frequency = j.at("deviation_event_frequency").get<std::vector<double>>();
  if (!j.at("max_pmu_identity_gap").is_null()) r.max_pmu_identity_gap = j.at("max_pmu_identity_gap").get<double>();
  return r;
}

// Recomputes summary and trend from the per-seed series alone.
inline Trend rederive_verdict(const TrajectoryReport& r) {
  if (r.trend.forced) return Trend::inconclusive;
  return median_trend(summarize(r.n_grid, r.series), r.trend.from_n).verdict;
}

inline Json to_json(const TelescopeReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"j", row.j},
                    {"n", row.n},
                    {"b", row.b},
                    {"partial_sum", row.partial_sum},
                    {"closed_form", row.closed_form},
                    {"gauge_sum", row.gauge_sum}});
  return {{"experiment", "telescope"},
          {"g", r.g_name},
          {"ell_max", r.ell_max},
          {"seed", r.seed},
          {"rows", rows},
          {"max_identity_gap", r.max_identity_gap},
          {"identity_holds", r.identity_holds},
          {"condensation_ratio", r.condensation_ratio},
          {"divergence", r.divergence}};
}

inline Json to_json(const DeviationReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"t", c.t},
                     {"n", c.n},
                     {"trials", c.trials},
                     {"exceedances", c.exceedances},
                     {"frequency", c.frequency},
                     {"bound", c.bound},
                     {"stderr", c.stderr_at_bound},
                     {"within", c.within}});
  Json j = {{"experiment", r.experiment}, {"distribution", r.distribution}, {"bound_constant", r.bound_constant},
            {"seed", r.seed},             {"cells", cells},                   {"all_within", r.all_within}};
  if (r.fit.available)
    j["fit"] = {{"cells", r.fit.cells},     {"c2", r.fit.c2},
                {"c3", r.fit.c3},           {"c3_lo", r.fit.c3_lo},
                {"c3_hi", r.fit.c3_hi},     {"r_squared", r.fit.r_squared},
                {"c3_positive", r.fit.c3_positive}};
  else
    j["fit"] = nullptr;
  return j;
}

inline Json to_json(const CoveringReport& r, const std::string& experiment) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n},
                    {"log2_count", row.log2_count},
                    {"box_estimate", row.box_estimate},
                    {"log2_covering_sum", row.log2_covering_sum}});
  return {{"experiment", experiment}, {"gauge", r.gauge}, {"rows", rows}, {"fitted_constant", r.fitted_constant}};
}

inline Json json_document(const Json& config, const Json& report) {
  return {{"schema_version", kReportSchemaVersion},
          {"version", kVersion},
          {"config", config},
          {"config_hash", config_hash(config)},
          {"report", report}};
}

inline void write_json(std::ostream& out, const Json& config, const Json& report) {
  out << json_document(config, report).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// CSV

struct CsvRow {
  std::optional<std::uint64_t> n;
  std::string statistic;
  double value = 0;
};

inline std::vector<CsvRow> csv_rows(const TrajectoryReport& r) {
  std::vector<CsvRow> rows;
  for (std::size_t g = 0; g < r.summary.size(); ++g) {
    const auto& s = r.summary[g];
    rows.push_back({s.n, "median", s.median});
    rows.push_back({s.n, "q1", s.q1});
    rows.push_back({s.n, "q3", s.q3});
    rows.push_back({s.n, "mean", s.mean});
    rows.push_back({s.n, "min", s.min});
    rows.push_back({s.n, "max", s.max});
    if (g < r.deviation_event_frequency.size())
      rows.push_back({s.n, "deviation_event_frequency", r.deviation_event_frequency[g]});
  }
  rows.push_back({std::nullopt, "trend_slope", r.trend.fit.slope});
  rows.push_back({std::nullopt, "trend_slope_lo", r.trend.fit.slope_lo});
  rows.push_back({std::nullopt, "trend_slope_hi", r.trend.fit.slope_hi});
  if (r.max_pmu_identity_gap) rows.push_back({std::nullopt, "max_pmu_identity_gap", *r.max_pmu_identity_gap});
  return rows;
}

inline std::vector<CsvRow> csv_rows(const TelescopeReport& r) {
  std::vector<CsvRow> rows;
  for (const auto& row : r.rows) {
    rows.push_back({row.n, "b", row.b});
    rows.push_back({row.n, "partial_sum", row.partial_sum});
    rows.push_back({row.n, "closed_form", row.closed_form});
    rows.push_back({row.n, "gauge_sum", row.gauge_sum});
  }
  rows.push_back({std::nullopt, "max_identity_gap", r.max_identity_gap});
  rows.push_back({std::nullopt, "condensation_ratio", r.condensation_ratio});
  return rows;
}

inline std::vector<CsvRow> csv_rows(const DeviationReport& r) {
  std::vector<CsvRow> rows;
  for (const auto& c : r.cells) {
    const std::string tag = "[t=" + format_real(c.t) + "]";
    rows.push_back({c.n, "frequency" + tag, c.frequency});
    rows.push_back({c.n, "bound" + tag, c.bound});
    rows.push_back({c.n, "stderr" + tag, c.stderr_at_bound});
  }
  if (r.fit.available) {
    rows.push_back({std::nullopt, "fit_c2", r.fit.c2});
    rows.push_back({std::nullopt, "fit_c3", r.fit.c3});
    rows.push_back({std::nullopt, "fit_c3_lo", r.fit.c3_lo});
    rows.push_back({std::nullopt, "fit_c3_hi", r.fit.c3_hi});
    rows.push_back({std::nullopt, "fit_r_squared", r.fit.r_squared});
  }
  return rows;
}

inline std::vector<CsvRow> csv_rows(const CoveringReport& r) {
  std::vector<CsvRow> rows;
  for (const auto& row : r.rows) {
    rows.push_back({row.n, "log2_count", row.log2_count});
    rows.push_back({row.n, "box_estimate", row.box_estimate});
    rows.push_back({row.n, "log2_covering_sum", row.log2_covering_sum});
  }
  rows.push_back({std::nullopt, "fitted_constant", r.fitted_constant});
  return rows;
}

inline void write_csv(std::ostream& out, const Json& config, const std::string& experiment,
                      const std::vector<CsvRow>& rows, std::size_t seed_count,
                      const std::vector<std::string>& notes = {}) {
  const std::string hash = config_hash(config);
  out << "# mgs " << kVersion << '\n';
  out << "# schema_version: " << kReportSchemaVersion << '\n';
  out << "# config: " << config.dump() << '\n';
  out << "# config_hash: " << hash << '\n';
  for (const auto& note : notes) out << "# " << note << '\n';
  out << "experiment,n,statistic,value,seed_count,config_hash\n";
  for (const auto& row : rows) {
    out << experiment << ',' << (row.n ? std::to_string(*row.n) : std::string()) << ',' << row.statistic << ','
        << format_real(row.value) << ',' << seed_count << ',' << hash << '\n';
  }
}

}  // namespace mgs

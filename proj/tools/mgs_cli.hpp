#pragma once

// Command-line front end. run() is separate from main() so tests can drive it.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mgs/mgs.hpp"

namespace mgs::cli {

enum ExitCode : int { kSuccess = 0, kCertificationFailure = 1, kUsageError = 2 };

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<std::uint64_t> seed;
  std::string format;
  std::string out_path;
  double tol = 1e-6;

  // measure
  std::optional<double> mu;
  bool pmu = false;
  std::optional<double> pdelta;
  std::string word;

  // experiment
  std::string kind;
  double delta = 0.05;
  double c = 0.002;
  double theta = 1.0;
  double gamma = 1.0;
  std::string measure = "pmu";
  std::string gauge = "psi";
  std::optional<double> exponent;
  std::optional<std::size_t> seeds;
  unsigned from = 4;
  unsigned to = 20;
  std::uint64_t trend_from = kDefaultTrendFrom;
  double epsilon = kDefaultEpsilon;
  std::string g = "t";
  unsigned ell = 20;
  std::uint64_t trials = 100000;
  std::vector<double> t_grid;
  std::vector<std::uint64_t> n_grid;
  std::string distribution = "rademacher";
  std::optional<double> chain_r;
  unsigned chain_k = 4;
};

// Everything a command produces before it is written out.
struct Output {
  std::string experiment;
  Json config;
  Json report;
  std::vector<CsvRow> rows;
  std::size_t seed_count = 0;
  std::string plain;    // human-readable body
  std::string verdict;  // one-line summary
};

inline std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

inline std::string real(double x) { return fmt("%.10g", x); }

inline Json interval_json(const CertifiedInterval& x) {
  return {{"lo", x.lo_string()},
          {"hi", x.hi_string()},
          {"lo_decimal", x.lo_double()},
          {"hi_decimal", x.hi_double()},
          {"width", x.width_double()}};
}

inline std::string interval_plain(const std::string& name, const CertifiedInterval& x) {
  std::ostringstream os;
  os << name << " in " << x.to_decimal(12) << "  width " << fmt("%.3e", x.width_double()) << '\n'
     << "  lo = " << x.lo_string() << '\n'
     << "  hi = " << x.hi_string() << '\n';
  return os.str();
}

inline Json base_config(const std::string& command, const Options& o) {
  Json config = {{"command", command}};
  config["seed"] = o.seed ? Json(*o.seed) : Json(nullptr);
  return config;
}

// ---------------------------------------------------------------------------
// dims, tau, measure

inline Output cmd_dims(const Options& o) {
  if (!(o.tol > 0 && o.tol < 1)) throw UsageError("--tol must lie in (0, 1)");
  const unsigned width_exponent = static_cast<unsigned>(std::ceil(-std::log2(o.tol))) + 2;
  const CertifiedInterval p = solve_p(width_exponent);
  const CertifiedInterval s = -log2(p);
  const MinkowskiDimension dm = dim_minkowski(o.tol);
  if (!(s.hi() < dm.enclosure.lo())) throw CertificationFailure("dim_H < dim_M could not be certified");

  Output r;
  r.experiment = "dims";
  r.config = base_config("dims", o);
  r.config["tol"] = o.tol;
  r.report = {{"p", interval_json(p)},
              {"s", interval_json(s)},
              {"dim_minkowski", interval_json(dm.enclosure)},
              {"dim_minkowski_terms", dm.terms},
              {"dim_h_below_dim_m", true}};
  for (const auto& [name, x] : {std::pair{"p", &p}, std::pair{"s", &s}, std::pair{"dim_minkowski", &dm.enclosure}}) {
    r.rows.push_back({std::nullopt, std::string(name) + "_lo", x->lo_double()});
    r.rows.push_back({std::nullopt, std::string(name) + "_hi", x->hi_double()});
    r.rows.push_back({std::nullopt, std::string(name) + "_width", x->width_double()});
  }
  r.plain = interval_plain("p", p) + interval_plain("s = dim_H", s) + interval_plain("dim_M", dm.enclosure) +
            "dim_M terms: " + std::to_string(dm.terms) + '\n';
  r.verdict = "dim_H < dim_M CERTIFIED";
  return r;
}

inline Output cmd_tau(const Options& o) {
  const TauCertificate t = tau_certify();
  const CertifiedInterval lower(t.lower_bound);
  const CertifiedInterval lower_bits = lower / ln2_enclosure();
  Output r;
  r.experiment = "tau";
  r.config = base_config("tau", o);
  r.report = {{"unit", "nats"},
              {"partial_12", interval_json(t.partial_12)},
              {"tail_bound", interval_json(t.tail_bound)},
              {"lower_bound", interval_json(lower)},
              {"lower_bound_bits", interval_json(lower_bits)},
              {"entropy_at_p", interval_json(t.entropy_at_p)},
              {"entropy_derivative_at_p", interval_json(t.entropy_derivative_at_p)},
              {"sign", to_string(t.sign)}};
  r.rows = {{std::nullopt, "partial_12_lo", t.partial_12.lo_double()},
            {std::nullopt, "partial_12_hi", t.partial_12.hi_double()},
            {std::nullopt, "tail_bound", t.tail_bound.hi_double()},
            {std::nullopt, "lower_bound", lower.lo_double()},
            {std::nullopt, "lower_bound_bits", lower_bits.lo_double()}};
  std::ostringstream os;
  os << "units: nats\n"
     << interval_plain("partial sum k<=12", t.partial_12) << "tail bound k>=13: " << t.tail_bound.hi_string()
     << " = " << fmt("%.7f", t.tail_bound.hi_double()) << " (< 0.1)\n"
     << "tau >= " << fmt("%.7f", lower.lo_double()) << " nats = " << fmt("%.7f", lower_bits.lo_double())
     << " bits\n  lower bound = " << lower.lo_string() << '\n';
  r.plain = os.str();
  r.verdict = "tau > 0 CERTIFIED (margin " + fmt("%.6f", lower.lo_double()) + ")";
  return r;
}

inline BinaryWord parse_word(const std::string& text) {
  if (text.empty()) throw UsageError("word must be a nonempty 0/1 string");
  for (char ch : text)
    if (ch != '0' && ch != '1') throw UsageError("word must be a 0/1 string, got '" + text + "'");
  return BinaryWord(text);
}

inline std::string logprob_text(const LogProb& lp) { return lp.is_zero() ? "ZERO" : real(lp.value()); }

inline Json logprob_json(const LogProb& lp) { return lp.is_zero() ? Json("ZERO") : Json(lp.value()); }

inline Output cmd_measure(const Options& o) {
  const int chosen = (o.mu ? 1 : 0) + (o.pmu ? 1 : 0) + (o.pdelta ? 1 : 0);
  if (chosen != 1) throw UsageError("measure: give exactly one of --mu R, --pmu, --pdelta DELTA");
  const BinaryWord u = parse_word(o.word);
  Output r;
  r.experiment = "measure";
  r.config = base_config("measure", o);
  r.config["word"] = o.word;
  std::ostringstream os;

  if (o.mu) {
    if (!(*o.mu > 0 && *o.mu < 1)) throw UsageError("--mu: r must lie in (0, 1)");
    const MarkovParams params(*o.mu);
    const LogProb lp = markov_cylinder_logprob(params, u);
    r.config["measure"] = {{"kind", "mu"}, {"r", *o.mu}};
    Json steps = Json::array();
    os << "measure: mu(r=" << real(*o.mu) << ")\nword: " << o.word << "\nlog2 P = " << logprob_text(lp) << '\n'
       << "position  symbol  factor\n";
    bool previous = false;
    for (std::size_t k = 1; k <= u.size(); ++k) {
      const bool x = u[k];
      const double factor = previous ? (x ? 0.0 : 1.0) : (x ? 1 - params.r : params.r);
      steps.push_back({{"position", k}, {"symbol", x ? 1 : 0}, {"factor", factor}});
      os << k << "  " << (x ? 1 : 0) << "  " << real(factor) << '\n';
      previous = x;
    }
    r.report = {{"measure", "mu(r=" + real(*o.mu) + ")"}, {"word", o.word}, {"log2_prob", logprob_json(lp)},
                {"steps", steps}};
    r.rows.push_back({std::nullopt, "log2_prob", lp.value()});
    r.plain = os.str();
    r.verdict = "log2 P = " + logprob_text(lp);
    return r;
  }

  const double p = golden_p();
  BlockAssignment assign = BlockAssignment::uniform(p);
  if (o.pdelta) {
    if (!(*o.pdelta >= 0 && p + *o.pdelta < 1)) throw UsageError("--pdelta: need delta >= 0 and p + delta < 1");
    assign = BlockAssignment::harmonic(p, *o.pdelta);
    r.config["measure"] = {{"kind", "pdelta"}, {"delta", *o.pdelta}};
  } else {
    r.config["measure"] = {{"kind", "pmu"}};
  }
  const LogProb lp = pdelta_logprob(assign, u);
  Json chains = Json::array();
  os << "measure: " << assign.describe() << "\nword: " << o.word << "\nlog2 P = " << logprob_text(lp) << '\n'
     << "chain  restriction  block  parameter  log2 contribution\n";
  for (const auto& c : chain_breakdown(assign, u)) {
    chains.push_back({{"start", c.start},
                      {"restriction", c.restriction.to_string()},
                      {"block", c.block},
                      {"parameter", c.parameter},
                      {"contribution", logprob_json(c.contribution)}});
    os << c.start << "  " << c.restriction.to_string() << "  " << c.block << "  " << real(c.parameter) << "  "
       << logprob_text(c.contribution) << '\n';
  }
  r.report = {{"measure", assign.describe()}, {"word", o.word}, {"log2_prob", logprob_json(lp)}, {"chains", chains}};
  r.rows.push_back({std::nullopt, "log2_prob", lp.value()});
  r.plain = os.str();
  r.verdict = "log2 P = " + logprob_text(lp);
  return r;
}

// ---------------------------------------------------------------------------
// experiments

inline bool is_stochastic(const std::string& kind) {
  return kind == "density" || kind == "lower" || kind == "telescope" || kind == "hoeffding" || kind == "ldev2";
}

inline std::vector<std::uint64_t> resolve_grid(const Options& o, std::uint64_t min_n) {
  if (!o.n_grid.empty()) {
    for (std::size_t j = 0; j < o.n_grid.size(); ++j) {
      if (o.n_grid[j] < min_n) throw UsageError("--n values must be at least " + std::to_string(min_n));
      if (j > 0 && o.n_grid[j] <= o.n_grid[j - 1]) throw UsageError("--n values must be strictly ascending");
    }
    return o.n_grid;
  }
  if (o.from > o.to || o.to > 28) throw UsageError("--from/--to: need from <= to <= 28");
  const auto grid = dyadic_grid(o.from, o.to);
  if (grid.front() < min_n) throw UsageError("--from too small for this experiment");
  return grid;
}

inline Gauge resolve_gauge(const Options& o, double default_exponent) {
  const double s = o.exponent.value_or(default_exponent);
  if (o.gauge == "pure") return Gauge::pure(s);
  if (o.gauge == "phi") {
    if (!(o.c > 0)) throw UsageError("--c must be positive for the phi gauge");
    return Gauge::phi(s, o.c);
  }
  if (o.gauge == "psi") return Gauge::psi_theta(s, o.theta);
  if (o.gauge == "phi_gamma") {
    if (!(o.c > 0 && o.gamma > 0)) throw UsageError("--c and --gamma must be positive for phi_gamma");
    return Gauge::phi_gamma(s, o.c, o.gamma);
  }
  if (o.gauge == "psi_g") {
    const NamedFunction g = named_g(o.g);
    return Gauge::psi_g(s, g.f, g.name);
  }
  throw UsageError("--gauge must be one of pure, phi, psi, phi_gamma, psi_g");
}

inline std::string trend_line(const TrajectoryReport& rep) {
  std::string line = std::string("verdict: ") + to_string(rep.trend.verdict);
  if (rep.trend.forced) return line + " (" + rep.trend.note + ")";
  return line + " (Theil-Sen slope " + fmt("%.4g", rep.trend.fit.slope) + " per doubling, 95% CI [" +
         fmt("%.4g", rep.trend.fit.slope_lo) + ", " + fmt("%.4g", rep.trend.fit.slope_hi) +
         "], n >= " + std::to_string(rep.trend.from_n) + ", " + std::to_string(rep.seeds.size()) + " seeds)";
}

inline std::string trajectory_plain(const TrajectoryReport& rep) {
  std::ostringstream os;
  os << "experiment: " << rep.experiment << "\nmeasure: " << rep.measure << "\ngauge: " << rep.gauge
     << "\nseeds: " << rep.seeds.size() << "\nn  median  q1  q3  mean\n";
  for (const auto& s : rep.summary)
    os << s.n << "  " << fmt("%.4f", s.median) << "  " << fmt("%.4f", s.q1) << "  " << fmt("%.4f", s.q3) << "  "
       << fmt("%.4f", s.mean) << '\n';
  if (!rep.deviation_event_frequency.empty()) {
    os << "deviation event frequency (epsilon " << real(rep.epsilon) << "):";
    for (double f : rep.deviation_event_frequency) os << ' ' << real(f);
    os << '\n';
  }
  if (rep.max_pmu_identity_gap) os << "max P_mu identity gap: " << fmt("%.3e", *rep.max_pmu_identity_gap) << '\n';
  os << "all prefixes admissible: " << (rep.all_admissible ? "yes" : "NO") << '\n';
  return os.str();
}

inline Output finish_trajectory(const TrajectoryReport& rep, Json config) {
  Output r;
  r.experiment = rep.experiment;
  r.config = std::move(config);
  r.report = to_json(rep);
  r.rows = csv_rows(rep);
  r.seed_count = rep.seeds.size();
  r.verdict = trend_line(rep);
  r.plain = trajectory_plain(rep);
  return r;
}

inline std::string deviation_plain(const DeviationReport& rep) {
  std::ostringstream os;
  os << "experiment: " << rep.experiment << "\ndistribution: " << rep.distribution << '\n';
  if (rep.bound_constant > 0) os << "|X| <= " << real(rep.bound_constant) << '\n';
  os << "t  n  trials  exceed  freq  bound  within\n";
  for (const auto& c : rep.cells)
    os << real(c.t) << "  " << c.n << "  " << c.trials << "  " << c.exceedances << "  " << fmt("%.3e", c.frequency)
       << "  " << fmt("%.3e", c.bound) << "  " << (c.within ? "yes" : "NO") << '\n';
  if (rep.fit.available)
    os << "fit ln freq = ln c2 - c3 t^2 n over " << rep.fit.cells << " cells: c2 = " << fmt("%.4g", rep.fit.c2)
       << ", c3 = " << fmt("%.4g", rep.fit.c3) << " [" << fmt("%.4g", rep.fit.c3_lo) << ", "
       << fmt("%.4g", rep.fit.c3_hi) << "], R^2 = " << fmt("%.4f", rep.fit.r_squared) << '\n';
  return os.str();
}

inline Output cmd_experiment(const Options& o) {
  if (is_stochastic(o.kind) && !o.seed) throw UsageError("experiment " + o.kind + " is stochastic: --seed is required");
  Json config = base_config("experiment", o);
  config["kind"] = o.kind;
  Json& params = config["params"];
  const std::uint64_t seed = o.seed.value_or(0);

  if (o.kind == "density" || o.kind == "lower") {
    const auto grid = resolve_grid(o, 4);
    const std::size_t count = o.seeds.value_or(o.kind == "lower" ? kDefaultLowerSeeds : kDefaultSeeds);
    if (count == 0) throw UsageError("--seeds must be positive");
    const auto seeds = seed_list(seed, count);
    params["n_grid"] = grid;
    params["seeds"] = count;
    params["trend_from"] = o.trend_from;
    if (o.kind == "lower") {
      if (!(o.delta >= 0 && golden_p() + o.delta < 1)) throw UsageError("--delta: need delta >= 0 and p + delta < 1");
      if (!(o.c >= 0)) throw UsageError("--c must be nonnegative");
      if (!(o.epsilon > 0 && o.epsilon < 0.5)) throw UsageError("--epsilon must lie in (0, 1/2)");
      params["delta"] = o.delta;
      params["c"] = o.c;
      params["epsilon"] = o.epsilon;
      return finish_trajectory(lower_bound_trajectory(o.delta, o.c, grid, seeds, o.trend_from, o.epsilon), config);
    }
    BlockAssignment measure = BlockAssignment::uniform(golden_p());
    if (o.measure == "pdelta") {
      if (!(o.delta >= 0 && golden_p() + o.delta < 1)) throw UsageError("--delta: need delta >= 0 and p + delta < 1");
      measure = BlockAssignment::harmonic(golden_p(), o.delta);
      params["delta"] = o.delta;
    } else if (o.measure != "pmu") {
      throw UsageError("--measure must be one of pmu, pdelta");
    }
    const Gauge gauge = resolve_gauge(o, golden_s());
    params["measure"] = measure.describe();
    params["gauge"] = gauge.describe();
    return finish_trajectory(density_trajectory(measure, gauge, grid, seeds, o.trend_from), config);
  }

  if (o.kind == "telescope") {
    if (o.ell < 2 || o.ell > 28) throw UsageError("--ell must lie in [2, 28]");
    const NamedFunction g = named_g(o.g);
    params["g"] = g.name;
    params["ell"] = o.ell;
    const TelescopeReport rep = upper_bound_telescoping(g, o.ell, seed);
    Output r;
    r.experiment = "telescope";
    r.config = config;
    r.report = to_json(rep);
    r.rows = csv_rows(rep);
    r.seed_count = 1;
    std::ostringstream os;
    os << "g(t) = " << g.name << ", ell = " << o.ell << "\nj  n  b_j  partial  closed form  sum 1/((ln 2) g(i))\n";
    for (const auto& row : rep.rows)
      os << row.j << "  " << row.n << "  " << fmt("%.6g", row.b) << "  " << fmt("%.8f", row.partial_sum) << "  "
         << fmt("%.8f", row.closed_form) << "  " << fmt("%.6f", row.gauge_sum) << '\n';
    r.plain = os.str();
    r.verdict = std::string("identity: ") + (rep.identity_holds ? "HOLDS" : "FAILS") + " (max gap " +
                fmt("%.2e", rep.max_identity_gap) + "); sum 1/g(j): " + rep.divergence;
    return r;
  }

  if (o.kind == "hoeffding" || o.kind == "ldev2") {
    if (o.trials == 0) throw UsageError("--trials must be positive");
    params["trials"] = o.trials;
    DeviationReport rep;
    if (o.kind == "hoeffding") {
      const std::vector<double> t_grid = o.t_grid.empty() ? kHoeffdingTGrid : o.t_grid;
      const auto n_grid = o.n_grid.empty() ? kHoeffdingNGrid : resolve_grid(o, 1);
      BoundedDistribution dist = rademacher();
      if (o.distribution == "chain") {
        const double r = o.chain_r.value_or(golden_p());
        if (!(r > 0 && r < 1)) throw UsageError("--chain-r must lie in (0, 1)");
        if (o.chain_k < 1 || o.chain_k > 20) throw UsageError("--chain-k must lie in [1, 20]");
        dist = centered_chain_logprob(r, o.chain_k);
        params["chain_r"] = r;
        params["chain_k"] = o.chain_k;
      } else if (o.distribution != "rademacher") {
        throw UsageError("--distribution must be one of rademacher, chain");
      }
      params["distribution"] = o.distribution;
      params["t_grid"] = t_grid;
      params["n_grid"] = n_grid;
      for (double t : t_grid)
        if (!(t >= 0)) throw UsageError("--t values must be nonnegative");
      rep = hoeffding_check(dist, t_grid, n_grid, o.trials, seed);
    } else {
      const std::vector<double> t_grid = o.t_grid.empty() ? kLdevTGrid : o.t_grid;
      const auto n_grid = o.n_grid.empty() ? kLdevNGrid : resolve_grid(o, 1);
      for (double t : t_grid)
        if (!(t >= 0)) throw UsageError("--t values must be nonnegative");
      params["t_grid"] = t_grid;
      params["n_grid"] = n_grid;
      rep = zero_count_deviation_check(t_grid, n_grid, o.trials, seed);
    }
    Output r;
    r.experiment = o.kind;
    r.config = config;
    r.report = to_json(rep);
    r.rows = csv_rows(rep);
    r.seed_count = o.trials;
    r.plain = deviation_plain(rep);
    r.verdict = std::string("bounds: ") + (rep.all_within ? "RESPECTED" : "VIOLATED") + " in " +
                std::to_string(rep.cells.size()) + " cells";
    if (o.kind == "ldev2")
      r.verdict += rep.fit.available ? std::string("; fitted c3 ") + fmt("%.4g", rep.fit.c3) +
                                           (rep.fit.c3_positive ? " > 0 at 95%" : " not positive at 95%")
                                     : std::string("; too few cells to fit");
    return r;
  }

  if (o.kind == "cover" || o.kind == "boxdim") {
    const auto grid = resolve_grid(o, 4);
    params["n_grid"] = grid;
    const double dim_m = dim_minkowski(1e-12).value;
    Gauge gauge = Gauge::pure(dim_m);
    if (o.kind == "cover") {
      gauge = resolve_gauge(o, dim_m);
      params["gauge"] = gauge.describe();
    }
    const CoveringReport rep = covering_series(gauge, grid);
    Output r;
    r.experiment = o.kind;
    r.config = config;
    r.report = to_json(rep, o.kind);
    r.rows = csv_rows(rep);
    std::ostringstream os;
    os << "gauge: " << rep.gauge << "\nn  log2 count  box estimate  log2 covering sum\n";
    for (const auto& row : rep.rows)
      os << row.n << "  " << fmt("%.6f", row.log2_count) << "  " << fmt("%.8f", row.box_estimate) << "  "
         << fmt("%.6f", row.log2_covering_sum) << '\n';
    r.plain = os.str();
    const auto& last = rep.rows.back();
    if (o.kind == "boxdim")
      r.verdict = "box dimension estimate at n=" + std::to_string(last.n) + ": " + fmt("%.6f", last.box_estimate) +
                  " (dim_M = " + fmt("%.6f", dim_m) + ", gap " + fmt("%.2e", last.box_estimate - dim_m) + ")";
    else
      r.verdict = "log2 covering sum at n=" + std::to_string(last.n) + ": " + fmt("%.6g", last.log2_covering_sum) +
                  "; fitted C = " + fmt("%.4g", rep.fitted_constant) + " in |sum| <= C (log2 n)^2";
    return r;
  }
  throw UsageError("unknown experiment kind '" + o.kind + "'");
}

// ---------------------------------------------------------------------------
// Driver

inline void emit(const Output& r, const Options& o, std::ostream& out, std::ostream& err) {
  const std::string format = o.format.empty() ? (r.experiment == "dims" || r.experiment == "tau" ||
                                                         r.experiment == "measure"
                                                     ? "plain"
                                                     : "csv")
                                              : o.format;
  std::ostringstream body;
  if (format == "json") {
    write_json(body, r.config, r.report);
  } else if (format == "csv") {
    write_csv(body, r.config, r.experiment, r.rows, r.seed_count, {"summary: " + r.verdict});
  } else {
    body << "# mgs " << kVersion << "\n# config: " << r.config.dump() << '\n' << r.plain << r.verdict << '\n';
  }
  if (!o.out_path.empty()) {
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + o.out_path + "'");
    file << body.str();
    if (!file) throw std::runtime_error("failed writing output file '" + o.out_path + "'");
    out << r.verdict << '\n';
  } else {
    out << body.str();
    if (format != "plain") err << r.verdict << '\n';
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiplicative golden mean shift: certified constants, measures and experiments", "mgs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--seed", o.seed, "Base seed (required for stochastic commands)");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json", "plain"}));
  app.add_option("--out", o.out_path, "Write the report to PATH");
  app.add_option("--tol", o.tol, "Tolerance for certified enclosures")->capture_default_str();

  app.add_subcommand("dims", "Certified enclosures of p, s = dim_H and dim_M");
  app.add_subcommand("tau", "Certify tau > 0");

  auto* measure = app.add_subcommand("measure", "log2 probability of a cylinder with per-chain breakdown");
  measure->add_option("--mu", o.mu, "Markov measure mu(r)");
  measure->add_flag("--pmu", o.pmu, "Product measure P_mu");
  measure->add_option("--pdelta", o.pdelta, "Perturbed product measure P_delta");
  measure->add_option("word", o.word, "0/1 word")->required();

  auto* exp = app.add_subcommand("experiment", "Run an experiment and write its report");
  exp->add_option("kind", o.kind, "Experiment kind")
      ->required()
      ->check(CLI::IsMember({"density", "lower", "telescope", "hoeffding", "ldev2", "cover", "boxdim"}));
  exp->add_option("--delta", o.delta, "Perturbation size delta")->capture_default_str();
  exp->add_option("--c", o.c, "Gauge constant c")->capture_default_str();
  exp->add_option("--theta", o.theta, "psi gauge exponent theta")->capture_default_str();
  exp->add_option("--gamma", o.gamma, "phi_gamma gauge exponent gamma")->capture_default_str();
  exp->add_option("--measure", o.measure, "density: pmu or pdelta")->capture_default_str();
  exp->add_option("--gauge", o.gauge, "pure, phi, psi, phi_gamma or psi_g")->capture_default_str();
  exp->add_option("--exponent", o.exponent, "Gauge exponent (default s, or dim_M for cover)");
  exp->add_option("--seeds", o.seeds, "Number of seeds (density/lower)");
  exp->add_option("--from", o.from, "Smallest grid exponent")->capture_default_str();
  exp->add_option("--to", o.to, "Largest grid exponent")->capture_default_str();
  exp->add_option("--trend-from", o.trend_from, "Trend uses grid points n >= this")->capture_default_str();
  exp->add_option("--epsilon", o.epsilon, "Deviation event exponent (lower)")->capture_default_str();
  exp->add_option("--g", o.g, "telescope: t, t2 or tlogt")->capture_default_str();
  exp->add_option("--ell", o.ell, "telescope: largest dyadic scale")->capture_default_str();
  exp->add_option("--trials", o.trials, "Trials for deviation checks")->capture_default_str();
  exp->add_option("--t", o.t_grid, "Deviation levels t")->delimiter(',');
  exp->add_option("--n", o.n_grid, "Prefix lengths (overrides --from/--to)")->delimiter(',');
  exp->add_option("--distribution", o.distribution, "hoeffding: rademacher or chain")->capture_default_str();
  exp->add_option("--chain-r", o.chain_r, "hoeffding chain parameter r (default p)");
  exp->add_option("--chain-k", o.chain_k, "hoeffding chain length k")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kUsageError;
  }

  try {
    Output result;
    if (app.got_subcommand("dims")) result = cmd_dims(o);
    else if (app.got_subcommand("tau")) result = cmd_tau(o);
    else if (app.got_subcommand("measure")) result = cmd_measure(o);
    else result = cmd_experiment(o);
    emit(result, o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const CertificationFailure& e) {
    err << "certification failed: " << e.what() << '\n';
    return kCertificationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCertificationFailure;
  }
  return kSuccess;
}

}  // namespace mgs::cli

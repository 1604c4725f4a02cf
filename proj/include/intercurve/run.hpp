#pragma once

// Command dispatch shared by the CLI binary and the test suites.
//
// Exit code contract:
//   0  all checks passed
//   1  usage or configuration error
//   2  a theorem hypothesis was violated (flagged run; results informational)
//   3  a numerical check failed

#include "intercurve/config.hpp"
#include "intercurve/cone.hpp"
#include "intercurve/doubling.hpp"
#include "intercurve/gluing.hpp"
#include "intercurve/metric.hpp"
#include "intercurve/presets.hpp"
#include "intercurve/report.hpp"
#include "intercurve/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace intercurve {

constexpr const char* kVersion = "0.1.0";

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> lambdas;
  std::optional<std::vector<double>> epsilons;
  std::optional<std::string> out;
};

struct RunResult {
  int exit_code = 0;
  std::string report;
};

namespace runner {

inline std::vector<long> axis_counts(const Config& cfg, int dim) {
  std::vector<long> counts;
  if (cfg.has("grid.samples")) counts = cfg.get_ints("grid.samples");
  while (static_cast<int>(counts.size()) < dim) counts.push_back(counts.empty() ? 4 : counts.back());
  counts.resize(dim);
  return counts;
}

inline GlueGridOptions glue_grid(const Config& cfg) {
  GlueGridOptions g;
  if (cfg.has("grid.tangential")) {
    g.tangential.clear();
    for (long v : cfg.get_ints("grid.tangential")) g.tangential.push_back(static_cast<int>(v));
  }
  g.rho_linear = static_cast<int>(cfg.get_int_or("grid.rho-linear", g.rho_linear));
  g.rho_log = static_cast<int>(cfg.get_int_or("grid.rho-log", g.rho_log));
  return g;
}

inline ConeOptions cone_options(const Config& cfg, std::uint64_t seed) {
  ConeOptions o;
  o.seed = seed;
  o.restarts = static_cast<int>(cfg.get_int_or("cone.restarts", o.restarts));
  o.samples = cfg.get_int_or("cone.samples", o.samples);
  o.sweep_tol = cfg.get_double_or("cone.sweep-tol", o.sweep_tol);
  o.max_sweeps = static_cast<int>(cfg.get_int_or("cone.max-sweeps", o.max_sweeps));
  o.strictness_tol = cfg.get_double_or("strictness-tol", o.strictness_tol);
  return o;
}

inline std::vector<int> m_list(const Config& cfg, int dim) {
  std::vector<int> ms;
  for (long v : cfg.get_ints("m")) {
    if (v < 1 || v >= dim) throw ConfigError("m = " + std::to_string(v) + " out of range for dim");
    ms.push_back(static_cast<int>(v));
  }
  return ms;
}

// [metric.<name>] block: dim, domain = lo:hi per axis, components c_i_j
// (1-based upper triangle, off-diagonal defaults to 0), collar-axis (1-based).
inline ChartMetric chart_from_config(const Config& cfg, const std::string& block) {
  const Config* sec = cfg.section(block);
  if (!sec) throw ConfigError("missing config section [" + block + "]");
  const int dim = static_cast<int>(sec->get_int("dim"));
  if (dim < 2 || dim > 8) throw ConfigError(block + ".dim: expected 2..8");

  Box box;
  box.lo.resize(dim);
  box.hi.resize(dim);
  std::vector<std::string> axes;
  {
    std::string dom = sec->get("domain");
    std::string cur;
    for (char c : dom) {
      if (c == ',') {
        axes.push_back(cur);
        cur.clear();
      } else
        cur += c;
    }
    axes.push_back(cur);
  }
  if (static_cast<int>(axes.size()) != dim)
    throw ConfigError(block + ".domain: expected " + std::to_string(dim) + " axis ranges");
  for (int i = 0; i < dim; ++i) {
    const size_t colon = axes[i].find(':');
    if (colon == std::string::npos) throw ConfigError(block + ".domain: expected lo:hi ranges");
    box.lo[i] = std::strtod(axes[i].substr(0, colon).c_str(), nullptr);
    box.hi[i] = std::strtod(axes[i].substr(colon + 1).c_str(), nullptr);
    if (!(box.hi[i] >= box.lo[i])) throw ConfigError(block + ".domain: hi < lo");
  }

  std::vector<std::vector<std::string>> upper(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      const std::string key = "c_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
      std::string src = sec->get_or(key, i == j ? "" : "0");
      if (src.empty()) throw ConfigError(block + "." + key + ": diagonal component required");
      upper[i].push_back(src);
    }

  std::optional<int> collar;
  if (sec->has("collar-axis")) {
    const long axis = sec->get_int("collar-axis");
    if (axis < 1 || axis > dim) throw ConfigError(block + ".collar-axis out of range");
    collar = static_cast<int>(axis - 1);
  }
  ChartMetric chart = ChartMetric::from_expressions(dim, box, upper, collar);
  const ChartValidation v = validate_chart(chart, std::vector<int>(dim, 3));
  if (!v.spd_ok)
    throw ConfigError(block + ": metric not positive definite on the validation grid");
  if (collar && !v.fermi_ok)
    throw ConfigError(block + ": collar chart is not in Fermi form (drho row must be (1,0,..))");
  return chart;
}

struct Inputs {
  std::optional<Preset> preset;
  std::optional<ChartMetric> chart;
  std::optional<GlueFamily> family;
  double collar_trim = 0.0;
};

inline Inputs resolve_inputs(const Config& cfg) {
  Inputs in;
  if (cfg.has("preset")) in.preset = get_preset(cfg.get("preset"));
  if (cfg.section("metric.g"))
    in.chart = chart_from_config(cfg, "metric.g");
  else if (in.preset)
    in.chart = in.preset->chart;
  if (cfg.section("metric.g") && cfg.section("metric.gt")) {
    const double width = cfg.get_double("glue.collar-width");
    in.family = glue_family_from_metrics(*in.chart, chart_from_config(cfg, "metric.gt"), width);
  } else if (in.preset && in.preset->family) {
    in.family = in.preset->family;
  }
  in.collar_trim = cfg.get_double_or("glue.collar-trim", in.preset ? in.preset->collar_trim : 0.0);
  return in;
}

inline int combine_exit(bool hypothesis_failed, bool check_failed) {
  if (hypothesis_failed) return 2;
  if (check_failed) return 3;
  return 0;
}

inline void finish(ReportWriter& w, int code) {
  w.section("result");
  w.kv("status", std::string(code == 0 ? "pass" : code == 2 ? "flagged" : "fail"));
  w.kv("exit-code", code);
}

// ---------------------------------------------------------------- commands

inline int cmd_cone_check(const Config& cfg, const Inputs& in, std::uint64_t seed,
                          ReportWriter& w) {
  if (!in.chart) throw ConfigError("cone-check: need a preset or a [metric.g] block");
  const ChartMetric& g = *in.chart;
  const ConeOptions copts = cone_options(cfg, seed);
  const std::vector<long> counts = axis_counts(cfg, g.dim());
  std::vector<int> ci(counts.begin(), counts.end());
  const auto points = domain_grid(g.domain(), ci);

  bool fail = false;
  for (int m : m_list(cfg, g.dim())) {
    double min_value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd argmin;
    std::vector<double> vals(points.size());
    parallel_blocks(static_cast<long>(points.size()), [&](long lo, long hi) {
      for (long k = lo; k < hi; ++k) vals[k] = m_intermediate_min(g, points[k], m, copts).min_value;
    });
    for (size_t k = 0; k < points.size(); ++k)
      if (vals[k] < min_value) {
        min_value = vals[k];
        argmin = points[k];
      }
    w.section("cone-check m=" + std::to_string(m));
    w.kv("samples", static_cast<long>(points.size()));
    w.kv("min_value", min_value);
    w.kv("argmin", format_point_list(argmin));
    const bool interior = min_value > copts.strictness_tol;
    w.kv("interior", interior);
    fail = fail || !interior;
  }
  return combine_exit(false, fail);
}

inline int cmd_curvature(const Config& cfg, const Inputs& in, std::uint64_t seed, ReportWriter& w) {
  if (!in.chart) throw ConfigError("curvature: need a preset or a [metric.g] block");
  (void)seed;
  const ChartMetric& g = *in.chart;
  const double tol = cfg.get_double_or("tolerance", 1e-8);
  const std::vector<long> counts = axis_counts(cfg, g.dim());
  std::vector<int> ci(counts.begin(), counts.end());
  CurvatureSymmetryReport worst;
  for (const auto& p : domain_grid(g.domain(), ci)) {
    const auto rep = validate_curvature(riemann(g, p), tol);
    worst.antisymmetry = std::max(worst.antisymmetry, rep.antisymmetry);
    worst.pair_symmetry = std::max(worst.pair_symmetry, rep.pair_symmetry);
    worst.first_bianchi = std::max(worst.first_bianchi, rep.first_bianchi);
  }
  w.section("curvature-symmetries");
  w.kv("tolerance", tol);
  w.kv("max-antisymmetry-violation", worst.antisymmetry);
  w.kv("max-pair-symmetry-violation", worst.pair_symmetry);
  w.kv("max-first-bianchi-violation", worst.first_bianchi);
  const bool pass = worst.max_violation() <= tol;
  w.kv("passed", pass);
  return combine_exit(false, !pass);
}

inline int cmd_prop31(const Config& cfg, const Inputs&, std::uint64_t seed, ReportWriter& w) {
  const long trials = cfg.get_int_or("trials", 500);
  std::vector<long> dims = cfg.has("dims") ? cfg.get_ints("dims") : std::vector<long>{3, 4};
  const double band = cfg.get_double_or("margin-band", 1e-6);
  ConeOptions copts = cone_options(cfg, seed);

  struct TrialResult {
    bool agree = true;
    int n = 0, m = 0;
    long resamples = 0;
    double restriction_margin = 0.0, cone_margin = 0.0;
  };
  std::vector<TrialResult> results(trials);
  parallel_blocks(trials, [&](long lo, long hi) {
    for (long t = lo; t < hi; ++t) {
      const int n = static_cast<int>(dims[t % dims.size()]);
      TrialResult res;
      res.n = n;
      for (long attempt = 0;; ++attempt) {
        Rng rng(substream_seed(seed, static_cast<std::uint64_t>(t * 1000 + attempt)));
        const int m = rng.uniform_int(1, n - 1);
        Eigen::MatrixXd a = rng.gaussian_matrix(n, n);
        const SymmetricForm s(Eigen::MatrixXd(0.5 * (a + a.transpose())));
        const Eigen::VectorXd nu = rng.unit_vector(n);
        ConeOptions local = copts;
        local.seed = substream_seed(seed, 0xb0b0 + static_cast<std::uint64_t>(t));
        if (local.samples == 0) local.samples = (n <= 3) ? 100000 : 1000000;
        local.method = ConeMethod::brute_force;
        const Prop31Report rep = check_prop31(s, nu, m, local);
        if (std::fabs(rep.restriction_margin) < band || std::fabs(rep.cone.min_value) < band) {
          res.resamples++;
          continue;  // boundary-ambiguous input: resample
        }
        res.m = m;
        res.agree = rep.agree;
        res.restriction_margin = rep.restriction_margin;
        res.cone_margin = rep.cone.min_value;
        break;
      }
      results[t] = res;
    }
  });

  long disagreements = 0, resamples = 0;
  for (const auto& r : results) {
    if (!r.agree) ++disagreements;
    resamples += r.resamples;
  }
  w.section("prop31");
  w.kv("trials", trials);
  w.kv("dims", cfg.get_or("dims", "3 4"));
  w.kv("margin-band", band);
  w.kv("resamples", resamples);
  w.kv("disagreements", disagreements);
  if (disagreements > 0) {
    w.section("disagreeing-trials");
    for (long t = 0; t < trials; ++t)
      if (!results[t].agree)
        w.line("trial " + std::to_string(t) + " n=" + std::to_string(results[t].n) +
               " m=" + std::to_string(results[t].m) +
               " restriction=" + format_double(results[t].restriction_margin) +
               " cone=" + format_double(results[t].cone_margin));
  }
  return combine_exit(false, disagreements > 0);
}

inline void report_hypotheses(ReportWriter& w, const ScanHypotheses& hy) {
  w.section("hypotheses");
  w.kv("h-difference-m-positive", hy.h_difference_m_positive);
  w.kv("h-difference-margin", hy.h_difference_margin);
  w.kv("g-positive", hy.g_positive);
  w.kv("g-min", hy.g_min);
  w.kv("gt-positive", hy.g_tilde_positive);
  w.kv("gt-min", hy.g_tilde_min);
}

inline int cmd_glue_scan(const Config& cfg, const Inputs& in, std::uint64_t seed, ReportWriter& w,
                         const RunOverrides& over) {
  if (!in.family) throw ConfigError("glue-scan: need a glue preset or [metric.g]/[metric.gt]");
  const std::vector<double> lambdas = over.lambdas ? *over.lambdas : cfg.get_doubles("lambda");
  const GlueGridOptions grid = glue_grid(cfg);
  const ConeOptions copts = cone_options(cfg, seed);

  bool flagged = false, fail = false;
  for (int m : m_list(cfg, in.family->dim())) {
    const PositivityScanReport rep = positivity_scan(*in.family, m, lambdas, grid, copts);
    if (m == m_list(cfg, in.family->dim()).front()) report_hypotheses(w, rep.hypotheses);
    flagged = flagged || !rep.hypotheses.all_met();
    w.section("scan m=" + std::to_string(m));
    for (const auto& row : rep.rows) {
      std::string line = "lambda=" + format_double(row.lambda);
      if (!row.metric_ok)
        line += " indefinite";
      else
        line += " min=" + format_double(row.min_value) +
                " min-inner=" + format_double(row.min_inner) + " at=" +
                format_point_list(row.argmin);
      w.line(line);
    }
    if (rep.empirical_lambda0)
      w.kv("empirical-lambda0", *rep.empirical_lambda0);
    else
      w.kv("empirical-lambda0", std::string("none"));
    fail = fail || !rep.empirical_lambda0;
  }
  return combine_exit(flagged, fail);
}

inline int cmd_corollary43(const Config& cfg, const Inputs& in, std::uint64_t seed,
                           ReportWriter& w, const RunOverrides& over) {
  if (!in.family) throw ConfigError("corollary43: need a glue preset or [metric.g]/[metric.gt]");
  const std::vector<double> lambdas = over.lambdas ? *over.lambdas : cfg.get_doubles("lambda");
  const std::vector<double> epsilons = over.epsilons ? *over.epsilons : cfg.get_doubles("epsilon");
  const double lambda = *std::max_element(lambdas.begin(), lambdas.end());
  const double epsilon = epsilons.front();
  const GlueGridOptions grid = glue_grid(cfg);
  const ConeOptions copts = cone_options(cfg, seed);

  bool flagged = false, fail = false;
  bool first = true;
  for (int m : m_list(cfg, in.family->dim())) {
    const Corollary43Report rep = check_corollary43(*in.family, m, lambda, epsilon, grid, copts);
    if (first) {
      report_hypotheses(w, rep.hypotheses);
      first = false;
    }
    flagged = flagged || !rep.hypotheses.all_met();
    w.section("corollary43 m=" + std::to_string(m));
    w.kv("lambda", lambda);
    w.kv("epsilon", epsilon);
    w.kv("samples", static_cast<long>(rep.rows.size()));
    w.kv("worst-slack", rep.worst_slack);
    w.kv("passed", rep.passed);
    if (!rep.passed) {
      w.section("failing-points m=" + std::to_string(m));
      for (const auto& row : rep.rows)
        if (row.slack < -epsilon)
          w.line("at=" + format_point_list(row.point) + " slack=" + format_double(row.slack));
    }
    fail = fail || !rep.passed;
  }
  return combine_exit(flagged, fail);
}

inline int cmd_holder(const Config& cfg, const Inputs& in, std::uint64_t seed, ReportWriter& w,
                      const RunOverrides& over) {
  if (!in.family) throw ConfigError("holder: need a glue preset or [metric.g]/[metric.gt]");
  (void)seed;
  std::vector<double> lambdas = over.lambdas ? *over.lambdas : cfg.get_doubles("lambda");
  std::sort(lambdas.begin(), lambdas.end());
  const double alpha = cfg.get_double_or("alpha", 0.5);
  const HolderReport rep = holder_convergence(*in.family, alpha, lambdas, glue_grid(cfg));

  w.section("holder");
  w.kv("alpha", alpha);
  bool decreasing = true, bounded = true;
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    w.line("lambda=" + format_double(row.lambda) + " sup=" + format_double(row.sup) +
           " seminorm=" + format_double(row.seminorm) + " total=" + format_double(row.total) +
           " sup-bound=" + format_double(row.sup_bound));
    if (i > 0 && !(row.total < rep.rows[i - 1].total)) decreasing = false;
    if (row.lambda >= 1.0 && row.sup > row.sup_bound + 1e-15) bounded = false;
  }
  w.kv("strictly-decreasing", decreasing);
  w.kv("sup-within-bound", bounded);
  return combine_exit(false, !(decreasing && bounded));
}

inline int cmd_double_sweep(const Config& cfg, const Inputs& in, std::uint64_t seed,
                            ReportWriter& w, const RunOverrides& over) {
  if (!in.chart || !in.chart->collar_axis())
    throw ConfigError("double-sweep: need a collar preset or [metric.g] with collar-axis");
  const std::vector<double> epsilons = over.epsilons ? *over.epsilons : cfg.get_doubles("epsilon");
  const int theta_count = static_cast<int>(cfg.get_int_or("grid.theta-count", 32));
  const GlueGridOptions grid = glue_grid(cfg);
  const ConeOptions copts = cone_options(cfg, seed);
  const double trim = in.collar_trim;

  std::vector<int> tcounts = grid.tangential;
  const auto samples = edge_samples_from_collar(*in.chart, trim, tcounts);

  bool flagged = false, fail = false;
  for (int m : m_list(cfg, in.chart->dim())) {
    const DoublingSweepReport rep = doubling_sweep(samples, m, epsilons, theta_count, copts);
    w.section("double-sweep m=" + std::to_string(m));
    w.kv("collar-trim", trim);
    w.kv("boundary-samples", static_cast<long>(samples.size()));
    w.kv("theta-count", theta_count);
    w.kv("hypothesis-m-convex", rep.hypothesis_m_convex);
    w.kv("hypothesis-margin", rep.hypothesis_margin);
    for (const auto& row : rep.rows)
      w.line("epsilon=" + format_double(row.epsilon) + " worst-margin=" +
             format_double(row.worst_margin) + " worst-theta=" + format_double(row.worst_theta) +
             " all-positive=" + (row.all_positive ? "true" : "false"));
    if (rep.largest_passing_epsilon)
      w.kv("largest-passing-epsilon", *rep.largest_passing_epsilon);
    else
      w.kv("largest-passing-epsilon", std::string("none"));
    w.kv("margins-improve-as-epsilon-decreases", rep.margins_improve_as_epsilon_decreases);
    flagged = flagged || !rep.hypothesis_m_convex;
    fail = fail || !rep.largest_passing_epsilon;
  }
  return combine_exit(flagged, fail);
}

}  // namespace runner

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"cone-check", "prop31",  "curvature", "glue-scan",
                                              "corollary43", "holder", "double-sweep"};
  return names;
}

// Execute a command against parsed configuration text. The report is returned
// and, when an output path is configured, also written to disk.
inline RunResult run_command(const std::string& command, const std::string& config_text,
                             const RunOverrides& overrides = {}) {
  RunResult result;
  try {
    Config cfg = Config::parse(config_text);
    if (cfg.has("command") && cfg.get("command") != command)
      throw ConfigError("config command '" + cfg.get("command") +
                        "' does not match requested command '" + command + "'");
    if (std::find(command_names().begin(), command_names().end(), command) ==
        command_names().end())
      throw ConfigError("unknown command '" + command + "'");
    if (cfg.has("preset")) {
      const Preset preset = get_preset(cfg.get("preset"));  // validates the name
      cfg.merge_defaults(preset.defaults);
    }

    const std::uint64_t seed =
        overrides.seed ? *overrides.seed
                       : static_cast<std::uint64_t>(cfg.get_int_or("seed", 20260801));
    ReportWriter w(command, seed, fnv1a(config_text), kVersion);
    const runner::Inputs inputs = runner::resolve_inputs(cfg);

    int code = 0;
    if (command == "cone-check")
      code = runner::cmd_cone_check(cfg, inputs, seed, w);
    else if (command == "curvature")
      code = runner::cmd_curvature(cfg, inputs, seed, w);
    else if (command == "prop31")
      code = runner::cmd_prop31(cfg, inputs, seed, w);
    else if (command == "glue-scan")
      code = runner::cmd_glue_scan(cfg, inputs, seed, w, overrides);
    else if (command == "corollary43")
      code = runner::cmd_corollary43(cfg, inputs, seed, w, overrides);
    else if (command == "holder")
      code = runner::cmd_holder(cfg, inputs, seed, w, overrides);
    else if (command == "double-sweep")
      code = runner::cmd_double_sweep(cfg, inputs, seed, w, overrides);

    runner::finish(w, code);
    result.exit_code = code;
    result.report = w.str();

    const std::string out = overrides.out ? *overrides.out : cfg.get_or("out", "");
    if (!out.empty()) {
      std::ofstream f(out);
      if (!f) throw ConfigError("cannot write report to '" + out + "'");
      f << result.report;
    }
  } catch (const ConfigError& e) {
    result.exit_code = 1;
    result.report = std::string("error: ") + e.what() + "\n";
  } catch (const ParseError& e) {
    result.exit_code = 1;
    result.report = std::string("error: ") + e.what() + "\n";
  } catch (const std::invalid_argument& e) {
    result.exit_code = 1;
    result.report = std::string("error: ") + e.what() + "\n";
  }
  return result;
}

inline RunResult run_config_file(const std::string& command, const std::string& path,
                                 const RunOverrides& overrides = {}) {
  std::ifstream in(path);
  if (!in) {
    RunResult r;
    r.exit_code = 1;
    r.report = "error: cannot open config file '" + path + "'\n";
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_command(command, buf.str(), overrides);
}

}  // namespace intercurve

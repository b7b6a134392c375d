#include "wright_poisson/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wright_poisson/checks.hpp"
#include "wright_poisson/distribution.hpp"
#include "wright_poisson/errors.hpp"
#include "wright_poisson/estimation.hpp"

namespace wright_poisson::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kTableDigits = 12;
constexpr int kCsvDigits = 17;

struct Globals {
  std::optional<double> rel_tol;
  int max_terms = SeriesControl{}.max_terms;
  std::string format = "table";
  std::string out_path;
};

struct Shape {
  double alpha = 0.0;
  double beta = 0.0;
  double m = 0.0;
};

std::string num(double v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

std::string table_num(double v) { return num(v, kTableDigits); }
std::string csv_num(double v) { return num(v, kCsvDigits); }

void add_globals(CLI::App* cmd, Globals& g) {
  cmd->add_option("--rel-tol", g.rel_tol,
                  "Series relative tolerance (default 1e-15, or $WRIGHT_POISSON_REL_TOL)");
  cmd->add_option("--max-terms", g.max_terms, "Series term cap")->capture_default_str();
  cmd->add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", g.out_path, "Write output to this file instead of stdout");
}

void add_shape(CLI::App* cmd, Shape& s) {
  cmd->add_option("--alpha", s.alpha, "Shape alpha > 0")->required();
  cmd->add_option("--beta", s.beta, "Shape beta > 0")->required();
  cmd->add_option("--m", s.m, "Rate-like parameter m > 0")->required();
}

SeriesControl make_control(const Globals& g) {
  SeriesControl ctrl;
  if (g.rel_tol) {
    ctrl.rel_tol = *g.rel_tol;
  } else if (const char* env = std::getenv("WRIGHT_POISSON_REL_TOL"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0') {
      throw DomainError(std::string("WRIGHT_POISSON_REL_TOL is not a number: ") + env);
    }
    ctrl.rel_tol = v;
  }
  ctrl.max_terms = g.max_terms;
  ctrl.validate();
  return ctrl;
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- commands

int cmd_pmf(const Shape& s, std::uint64_t r_max, const Globals& g, std::ostream& out) {
  const WrightPoisson d(s.alpha, s.beta, s.m, make_control(g));
  std::vector<std::pair<double, double>> rows;  // pmf, cdf
  double cumulative = 0.0;
  for (std::uint64_t r = 0; r <= r_max; ++r) {
    cumulative = d.cdf(r);
    rows.emplace_back(d.pmf(r), cumulative);
  }
  if (g.format == "json") {
    Json arr = Json::array();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      arr.push_back({{"r", r}, {"pmf", rows[r].first}, {"cdf", rows[r].second}});
    }
    out << json_text(arr);
  } else if (g.format == "csv") {
    out << "r,pmf,cdf\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out << r << ',' << csv_num(rows[r].first) << ',' << csv_num(rows[r].second) << '\n';
    }
  } else {
    out << std::left << std::setw(8) << "r" << std::setw(22) << "pmf" << "cdf\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out << std::left << std::setw(8) << r << std::setw(22) << table_num(rows[r].first)
          << table_num(rows[r].second) << '\n';
    }
    out << "final cdf: " << table_num(cumulative) << '\n';
  }
  return kSuccess;
}

int cmd_moments(const Shape& s, double spread_tol, const Globals& g, std::ostream& out,
                std::ostream& err) {
  const WrightPoisson d(s.alpha, s.beta, s.m, make_control(g));
  const MomentReport rep = d.moment_report();
  const bool consistent = rep.max_method_spread <= spread_tol;
  if (g.format == "json") {
    Json j;
    j["alpha"] = s.alpha;
    j["beta"] = s.beta;
    j["m"] = s.m;
    j["mean"] = {{"series", rep.mean_series},
                 {"closed_i", rep.mean_closed_i},
                 {"closed_ii", rep.mean_closed_ii}};
    j["second_moment"] = {
        {"series", rep.m2_series}, {"closed_i", rep.m2_closed_i}, {"closed_ii", rep.m2_closed_ii}};
    j["variance"] = rep.variance;
    j["max_method_spread"] = rep.max_method_spread;
    j["consistent"] = consistent;
    out << json_text(j);
  } else if (g.format == "csv") {
    out << "quantity,method,value\n";
    out << "mean,series," << csv_num(rep.mean_series) << '\n'
        << "mean,closed_i," << csv_num(rep.mean_closed_i) << '\n'
        << "mean,closed_ii," << csv_num(rep.mean_closed_ii) << '\n'
        << "second_moment,series," << csv_num(rep.m2_series) << '\n'
        << "second_moment,closed_i," << csv_num(rep.m2_closed_i) << '\n'
        << "second_moment,closed_ii," << csv_num(rep.m2_closed_ii) << '\n'
        << "variance,derived," << csv_num(rep.variance) << '\n'
        << "max_method_spread,all," << csv_num(rep.max_method_spread) << '\n';
  } else {
    out << std::left << std::setw(12) << "method" << std::setw(22) << "mean"
        << "second_moment\n";
    out << std::setw(12) << "series" << std::setw(22) << table_num(rep.mean_series)
        << table_num(rep.m2_series) << '\n';
    out << std::setw(12) << "closed_i" << std::setw(22) << table_num(rep.mean_closed_i)
        << table_num(rep.m2_closed_i) << '\n';
    out << std::setw(12) << "closed_ii" << std::setw(22) << table_num(rep.mean_closed_ii)
        << table_num(rep.m2_closed_ii) << '\n';
    out << "variance: " << table_num(rep.variance) << '\n';
    out << "max_method_spread: " << table_num(rep.max_method_spread)
        << (consistent ? " (consistent)" : " (INCONSISTENT)") << '\n';
  }
  if (!consistent) {
    err << "moment methods disagree: spread " << rep.max_method_spread << " > " << spread_tol
        << '\n';
    return kMethodDisagreement;
  }
  return kSuccess;
}

int cmd_mgf(const Shape& s, const std::vector<double>& ts, const Globals& g, std::ostream& out) {
  const WrightPoisson d(s.alpha, s.beta, s.m, make_control(g));
  std::vector<double> values;
  for (const double t : ts) values.push_back(d.mgf(t));
  if (g.format == "json") {
    Json arr = Json::array();
    for (std::size_t i = 0; i < ts.size(); ++i) arr.push_back({{"t", ts[i]}, {"mgf", values[i]}});
    out << json_text(arr);
  } else if (g.format == "csv") {
    out << "t,mgf\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      out << csv_num(ts[i]) << ',' << csv_num(values[i]) << '\n';
    }
  } else {
    out << std::left << std::setw(22) << "t" << "mgf\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      out << std::left << std::setw(22) << table_num(ts[i]) << table_num(values[i]) << '\n';
    }
  }
  return kSuccess;
}

int cmd_sample(const Shape& s, std::size_t n, std::uint64_t seed, const Globals& g,
               std::ostream& out, std::ostream& err) {
  const WrightPoisson d(s.alpha, s.beta, s.m, make_control(g));
  const SampleBatch batch = d.sample(n, seed);
  double mean = 0.0;
  for (const auto v : batch.values) mean += static_cast<double>(v);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const auto v : batch.values) ss += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
  const double variance = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;

  if (g.format == "json") {
    Json j;
    j["alpha"] = s.alpha;
    j["beta"] = s.beta;
    j["m"] = s.m;
    j["seed"] = seed;
    j["n"] = n;
    j["values"] = batch.values;
    j["mean"] = mean;
    j["variance"] = variance;
    out << json_text(j);
    return kSuccess;
  }
  std::ostringstream summary;
  summary << "n=" << n << " seed=" << seed << " mean=" << table_num(mean)
          << " variance=" << table_num(variance);
  if (g.format == "csv") {
    out << "value\n";
    for (const auto v : batch.values) out << v << '\n';
    err << summary.str() << '\n';
  } else {
    for (const auto v : batch.values) out << v << '\n';
    out << "# " << summary.str() << '\n';
  }
  return kSuccess;
}

int cmd_fit(const std::string& path, const std::optional<std::string>& column,
            const std::string& mode, std::optional<double> alpha, std::optional<double> beta,
            const Globals& g, std::ostream& out, std::ostream& err) {
  const SeriesControl ctrl = make_control(g);
  const CountData data = load_counts(path, column);
  FitResult fit;
  if (mode == "m-only") {
    if (!alpha || !beta) throw DomainError("--mode m-only requires --alpha and --beta");
    fit = fit_m(data, *alpha, *beta, ctrl);
  } else {
    fit = fit_full(data, ctrl);
  }

  if (g.format == "json") {
    Json j;
    j["alpha"] = fit.alpha;
    j["beta"] = fit.beta;
    j["m"] = fit.m;
    j["log_likelihood"] = fit.log_likelihood;
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    j["at_boundary"] = fit.at_boundary;
    j["profile"] = to_string(fit.profile);
    j["n"] = data.n;
    out << json_text(j);
  } else if (g.format == "csv") {
    out << "alpha,beta,m,log_likelihood,iterations,converged,at_boundary,profile\n";
    out << csv_num(fit.alpha) << ',' << csv_num(fit.beta) << ',' << csv_num(fit.m) << ','
        << csv_num(fit.log_likelihood) << ',' << fit.iterations << ','
        << (fit.converged ? "true" : "false") << ',' << (fit.at_boundary ? "true" : "false") << ','
        << to_string(fit.profile) << '\n';
  } else {
    out << "profile:        " << to_string(fit.profile) << '\n'
        << "n:              " << data.n << '\n'
        << "alpha:          " << table_num(fit.alpha) << '\n'
        << "beta:           " << table_num(fit.beta) << '\n'
        << "m:              " << table_num(fit.m) << (fit.at_boundary ? " (lower bound)" : "")
        << '\n'
        << "log_likelihood: " << table_num(fit.log_likelihood) << '\n'
        << "iterations:     " << fit.iterations << '\n'
        << "converged:      " << (fit.converged ? "yes" : "no") << '\n';
  }
  if (!fit.converged) {
    err << "fit did not converge\n";
    return kNonConvergence;
  }
  return kSuccess;
}

int cmd_check(int grid_size, std::optional<double> tolerance, const Globals& g, std::ostream& out,
              std::ostream& err) {
  CheckOptions opts;
  opts.grid_size = grid_size;
  opts.tolerance = tolerance;
  opts.ctrl = make_control(g);
  const std::vector<CheckRow> rows = run_checks(opts);

  if (g.format == "json") {
    Json arr = Json::array();
    for (const auto& row : rows) {
      arr.push_back({{"check", row.name},
                     {"status", row.passed ? "pass" : "fail"},
                     {"max_error", row.max_error},
                     {"threshold", row.threshold},
                     {"worst_case", row.worst_case}});
    }
    out << json_text(arr);
  } else if (g.format == "csv") {
    out << "check,status,max_error,threshold,worst_case\n";
    for (const auto& row : rows) {
      out << row.name << ',' << (row.passed ? "pass" : "fail") << ',' << csv_num(row.max_error)
          << ',' << csv_num(row.threshold) << ',' << row.worst_case << '\n';
    }
  } else {
    out << std::left << std::setw(24) << "check" << std::setw(8) << "status" << std::setw(20)
        << "max_error" << std::setw(12) << "threshold" << "worst_case\n";
    for (const auto& row : rows) {
      out << std::left << std::setw(24) << row.name << std::setw(8)
          << (row.passed ? "pass" : "FAIL") << std::setw(20) << table_num(row.max_error)
          << std::setw(12) << table_num(row.threshold) << row.worst_case << '\n';
    }
  }
  bool ok = true;
  for (const auto& row : rows) {
    if (!row.passed) {
      ok = false;
      err << "FAILED: " << row.name << " (max error " << row.max_error << " > " << row.threshold
          << " at " << row.worst_case << ")\n";
    }
  }
  return ok ? kSuccess : kCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wright-type Poisson distribution: evaluation, moments, sampling and fitting"};
  app.require_subcommand(1);

  Globals g;
  Shape shape;

  auto* pmf = app.add_subcommand("pmf", "Tabulate pmf and cdf for r = 0..r_max");
  add_shape(pmf, shape);
  add_globals(pmf, g);
  std::uint64_t r_max = 10;
  pmf->add_option("--r-max", r_max, "Largest r to tabulate")->capture_default_str();

  auto* moments = app.add_subcommand("moments", "Mean and second moment by every method");
  add_shape(moments, shape);
  add_globals(moments, g);
  double spread_tol = kConsistencyThreshold;
  moments->add_option("--spread-tol", spread_tol, "Largest acceptable method spread")
      ->capture_default_str();

  auto* mgf = app.add_subcommand("mgf", "Moment generating function at the given t values");
  add_shape(mgf, shape);
  add_globals(mgf, g);
  std::vector<double> ts;
  mgf->add_option("--t", ts, "t values (comma separated or repeated)")
      ->required()
      ->delimiter(',');

  auto* sample = app.add_subcommand("sample", "Draw random variates by CDF inversion");
  add_shape(sample, shape);
  add_globals(sample, g);
  std::size_t n = 1;
  std::uint64_t seed = 0;
  sample->add_option("--n", n, "Number of draws")->capture_default_str();
  sample->add_option("--seed", seed, "Generator seed")->capture_default_str();

  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit to count data");
  add_globals(fit, g);
  std::string data_path;
  std::optional<std::string> column;
  std::string mode = "full";
  std::optional<double> fit_alpha;
  std::optional<double> fit_beta;
  fit->add_option("--data,data", data_path, "Count data file")->required();
  fit->add_option("--column", column, "Column name or 0-based index");
  fit->add_option("--mode", mode, "m-only or full")
      ->check(CLI::IsMember({"m-only", "full"}))
      ->capture_default_str();
  fit->add_option("--alpha", fit_alpha, "Fixed alpha (m-only)");
  fit->add_option("--beta", fit_beta, "Fixed beta (m-only)");

  auto* check = app.add_subcommand("check", "Run the invariant suite over the parameter grid");
  add_globals(check, g);
  int grid_size = 5;
  std::optional<double> tolerance;
  check->add_option("--grid-size", grid_size, "Leading values per grid axis (1-5)")
      ->check(CLI::Range(1, 5))
      ->capture_default_str();
  check->add_option("--tolerance", tolerance, "Override every check threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
    return kBadInput;
  }

  std::ostringstream buffer;
  int code = kSuccess;
  try {
    if (pmf->parsed()) {
      code = cmd_pmf(shape, r_max, g, buffer);
    } else if (moments->parsed()) {
      code = cmd_moments(shape, spread_tol, g, buffer, err);
    } else if (mgf->parsed()) {
      code = cmd_mgf(shape, ts, g, buffer);
    } else if (sample->parsed()) {
      code = cmd_sample(shape, n, seed, g, buffer, err);
    } else if (fit->parsed()) {
      code = cmd_fit(data_path, column, mode, fit_alpha, fit_beta, g, buffer, err);
    } else if (check->parsed()) {
      code = cmd_check(grid_size, tolerance, g, buffer, err);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const DegenerateDataError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergence;
  }

  if (g.out_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(g.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << g.out_path << "'\n";
      return kBadInput;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace wright_poisson::cli

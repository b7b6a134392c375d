#include "wright_poisson/estimation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "wright_poisson/distribution.hpp"
#include "wright_poisson/errors.hpp"

namespace wright_poisson {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

bool looks_numeric(const std::string& field) {
  if (field.empty()) return false;
  char* end = nullptr;
  std::strtod(field.c_str(), &end);
  return end == field.c_str() + field.size();
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::uint64_t parse_count(const std::string& field, std::size_t line) {
  std::string digits = field;
  if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
  std::uint64_t value = 0;
  if (all_digits(digits)) {
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return value;
    throw ParseError("line " + std::to_string(line) + ": count '" + field + "' is out of range", line);
  }
  if (looks_numeric(field) && std::strtod(field.c_str(), nullptr) < 0.0) {
    throw ParseError("line " + std::to_string(line) + ": negative count '" + field + "'", line);
  }
  throw ParseError("line " + std::to_string(line) + ": '" + field + "' is not a nonnegative integer",
                   line);
}

double evaluate_log_likelihood(const CountData& data, double alpha, double beta, double m,
                               const SeriesControl& ctrl) {
  try {
    return log_likelihood(data, alpha, beta, m, ctrl);
  } catch (const NonConvergenceError&) {
    return kNegInf;
  }
}

// Higher likelihood wins; ties go to the lexicographically smallest (α, β, m).
bool better(const FitResult& a, const FitResult& b) {
  if (a.log_likelihood != b.log_likelihood) return a.log_likelihood > b.log_likelihood;
  return std::tie(a.alpha, a.beta, a.m) < std::tie(b.alpha, b.beta, b.m);
}

}  // namespace

const char* to_string(FitProfile profile) {
  return profile == FitProfile::full ? "full" : "m_only";
}

CountData CountData::from_counts(std::vector<std::uint64_t> counts) {
  if (counts.empty()) throw DegenerateDataError("no count data");
  CountData data;
  data.counts = std::move(counts);
  data.n = data.counts.size();
  std::map<std::uint64_t, std::uint64_t> hist;
  for (const auto c : data.counts) {
    data.sum += c;
    data.sum_sq += c * c;
    ++hist[c];
  }
  data.histogram.assign(hist.begin(), hist.end());
  return data;
}

CountData parse_counts(const std::string& text, const std::optional<std::string>& column) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool first = true;
  char delim = ',';
  std::size_t col = 0;
  std::vector<std::uint64_t> counts;

  while (std::getline(in, raw)) {
    ++line_no;
    if (line_no == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) raw.erase(0, 3);
    if (trim(raw).empty()) continue;

    if (first) {
      first = false;
      delim = raw.find('\t') != std::string::npos ? '\t' : ',';
      const auto fields = split(raw, delim);
      const bool header = std::any_of(fields.begin(), fields.end(),
                                      [](const std::string& f) { return !looks_numeric(f); });
      if (column) {
        const auto named = header ? std::find(fields.begin(), fields.end(), *column) : fields.end();
        if (named != fields.end()) {
          col = static_cast<std::size_t>(named - fields.begin());
        } else if (all_digits(*column)) {
          col = std::stoul(*column);
        } else {
          throw ParseError("line " + std::to_string(line_no) + ": no column named '" + *column + "'",
                           line_no);
        }
      }
      if (col >= fields.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": column " + std::to_string(col) +
                             " out of range",
                         line_no);
      }
      if (header) continue;
    }

    const auto fields = split(raw, delim);
    if (col >= fields.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": missing column " + std::to_string(col),
                       line_no);
    }
    counts.push_back(parse_count(fields[col], line_no));
  }
  if (counts.empty()) throw DegenerateDataError("no count data");
  return CountData::from_counts(std::move(counts));
}

CountData load_counts(const std::string& path, const std::optional<std::string>& column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_counts(buf.str(), column);
}

double log_likelihood(const CountData& data, double alpha, double beta, double m,
                      const SeriesControl& ctrl) {
  const WrightPoisson d(alpha, beta, m, ctrl);
  double gamma_sum = 0.0;
  for (const auto& [value, mult] : data.histogram) {
    gamma_sum += static_cast<double>(mult) * log_gamma(alpha * static_cast<double>(value) + beta);
  }
  return static_cast<double>(data.sum) * std::log(m) - gamma_sum -
         static_cast<double>(data.n) * d.log_normalizer();
}

FitResult fit_m(const CountData& data, double alpha, double beta, const SeriesControl& ctrl,
                const FitOptions& opts) {
  if (data.n == 0) throw DegenerateDataError("no count data");
  // Parameter checks up front so bad α, β surface as DomainError, not -inf.
  (void)WrightPoisson(alpha, beta, 1.0, ctrl);

  std::size_t evals = 0;
  auto f = [&](double m) {
    if (++evals > opts.max_iterations) {
      throw NonConvergenceError("fit_m: iteration cap of " + std::to_string(opts.max_iterations) +
                                " reached");
    }
    return evaluate_log_likelihood(data, alpha, beta, m, ctrl);
  };
  const double floor = opts.m_floor;

  double mid = std::max(data.mean(), floor);
  double f_mid = f(mid);
  while (f_mid == kNegInf && mid > floor) {
    mid = std::max(floor, mid / 4.0);
    f_mid = f(mid);
  }
  if (f_mid == kNegInf) {
    throw NonConvergenceError("fit_m: likelihood is not finite for any tried m");
  }

  // Geometric bracketing: f(lo) <= f(mid) >= f(hi), or mid pinned at the floor.
  double lo = std::max(floor, mid / 2.0);
  double f_lo = lo == mid ? f_mid : f(lo);
  double hi = mid * 2.0;
  double f_hi = 0.0;
  if (f_lo > f_mid) {
    hi = mid;
    f_hi = f_mid;
    mid = lo;
    f_mid = f_lo;
    while (mid > floor) {
      lo = std::max(floor, mid / 2.0);
      f_lo = f(lo);
      if (f_lo <= f_mid) break;
      hi = mid;
      f_hi = f_mid;
      mid = lo;
      f_mid = f_lo;
    }
    if (mid == floor) lo = floor;
  } else {
    f_hi = f(hi);
    while (f_hi > f_mid) {
      lo = mid;
      mid = hi;
      f_mid = f_hi;
      hi = mid * 2.0;
      f_hi = f(hi);
    }
  }

  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > opts.m_rel_tol * (1.0 + 0.5 * (a + b))) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }

  FitResult out;
  out.alpha = alpha;
  out.beta = beta;
  out.profile = FitProfile::m_only;
  out.m = 0.5 * (a + b);
  out.log_likelihood = f(out.m);
  if (lo == floor) {
    const double f_floor = f(floor);
    if (f_floor >= out.log_likelihood) {
      out.m = floor;
      out.log_likelihood = f_floor;
      out.at_boundary = true;
    }
  }
  out.iterations = evals;
  out.converged = std::isfinite(out.log_likelihood);
  return out;
}

FitResult fit_full(const CountData& data, const SeriesControl& ctrl, const FitOptions& opts) {
  if (data.histogram.size() < 2) {
    throw DegenerateDataError("full fit needs at least two distinct count values");
  }
  const double lo = std::log10(opts.shape_min);
  const double hi = std::log10(opts.shape_max);

  std::map<std::pair<double, double>, std::optional<FitResult>> cache;
  auto evaluate = [&](double u, double v) -> const std::optional<FitResult>& {
    const auto key = std::make_pair(u, v);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::optional<FitResult> fit;
    try {
      fit = fit_m(data, std::pow(10.0, u), std::pow(10.0, v), ctrl, opts);
    } catch (const NonConvergenceError&) {
      fit.reset();
    }
    return cache.emplace(key, fit).first->second;
  };

  std::optional<FitResult> best;
  std::pair<double, double> centre{0.0, 0.0};
  auto consider = [&](double u, double v) {
    const auto& fit = evaluate(u, v);
    if (fit && (!best || better(*fit, *best))) {
      best = fit;
      centre = {u, v};
    }
  };

  double step = (hi - lo) / (opts.initial_grid - 1);
  for (int i = 0; i < opts.initial_grid; ++i) {
    for (int j = 0; j < opts.initial_grid; ++j) consider(lo + i * step, lo + j * step);
  }
  if (!best) throw NonConvergenceError("fit_full: no grid point produced a finite likelihood");

  std::size_t rounds = 0;
  while (true) {
    if (rounds >= opts.max_rounds) {
      throw NonConvergenceError("fit_full: refinement did not settle within " +
                                std::to_string(opts.max_rounds) + " rounds");
    }
    const double before = best->log_likelihood;
    const auto old_centre = centre;
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        const double u = std::clamp(old_centre.first + i * step, lo, hi);
        const double v = std::clamp(old_centre.second + j * step, lo, hi);
        consider(u, v);
      }
    }
    ++rounds;
    const double improvement = best->log_likelihood - before;
    if (centre == old_centre) step *= 0.5;
    if (static_cast<int>(rounds) >= opts.min_rounds && improvement < opts.round_improvement_tol &&
        step < opts.step_tol) {
      break;
    }
  }

  FitResult out = *best;
  out.profile = FitProfile::full;
  out.iterations = rounds;
  out.converged = true;
  return out;
}

}  // namespace wright_poisson

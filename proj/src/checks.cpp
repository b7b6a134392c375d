#include "wright_poisson/checks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "wright_poisson/distribution.hpp"

namespace wright_poisson {
namespace {

constexpr double kShapeAxis[] = {0.5, 1.0, 1.5, 2.0, 3.0};
constexpr double kRateAxis[] = {0.1, 1.0, 5.0};
constexpr double kMgfTimes[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
constexpr double kFiniteDifferenceStep = 1e-5;
constexpr std::uint64_t kRecurrenceDepth = 200;

std::string describe(double alpha, double beta, double m) {
  std::ostringstream os;
  os << "alpha=" << alpha << " beta=" << beta << " m=" << m;
  return os.str();
}

class Report {
 public:
  explicit Report(std::optional<double> override) : override_(override) {}

  void add(const std::string& name, double threshold, double error, const std::string& where) {
    auto [it, inserted] = rows_.try_emplace(name);
    CheckRow& row = it->second;
    if (inserted) {
      row.name = name;
      row.threshold = override_.value_or(threshold);
      row.passed = true;
    }
    if (inserted || error > row.max_error || std::isnan(error)) {
      row.max_error = error;
      row.worst_case = where;
    }
    if (!(error <= row.threshold)) row.passed = false;
  }

  std::vector<CheckRow> rows() const {
    std::vector<CheckRow> out;
    for (const auto& [name, row] : rows_) out.push_back(row);
    return out;  // std::map keeps them sorted by name
  }

 private:
  std::optional<double> override_;
  std::map<std::string, CheckRow> rows_;
};

// Largest relative error of the chained recurrence against log_pmf. The
// chain is renormalized by powers of two so it never underflows.
double recurrence_error(const WrightPoisson& d) {
  int exp2 = 0;
  double p = std::frexp(d.pmf(0), &exp2);
  double worst = 0.0;
  for (std::uint64_t r = 0; r < kRecurrenceDepth; ++r) {
    int e = 0;
    p = std::frexp(d.pmf_recurrence_step(r, p), &e);
    exp2 += e;
    const long double log_chain =
        std::log(static_cast<long double>(p)) + exp2 * std::numbers::ln2_v<long double>;
    const long double diff = log_chain - static_cast<long double>(d.log_pmf(r + 1));
    worst = std::max(worst, static_cast<double>(std::abs(std::expm1(diff))));
  }
  return worst;
}

}  // namespace

double tilted_pmf_sum(const WrightPoisson& d, double t) {
  const std::uint64_t cutoff = d.mass_cutoff();
  long double sum = 0.0L;
  for (std::uint64_t r = 0;; ++r) {
    const double term = std::exp(t * static_cast<double>(r) + d.log_pmf(r));
    sum += term;
    if (r < cutoff || term > 1e-17L * sum) continue;
    long double window = 0.0L;
    for (std::uint64_t j = 1; j <= 16; ++j) {
      window += std::exp(t * static_cast<double>(r + j) + d.log_pmf(r + j));
    }
    if (window <= 1e-17L * sum) return static_cast<double>(sum);
    if (r > kSupportCap) return static_cast<double>(sum);
  }
}

std::vector<CheckRow> run_checks(const CheckOptions& opts) {
  Report report(opts.tolerance);
  const int n_shape = std::clamp(opts.grid_size, 1, 5);
  const int n_rate = std::clamp(opts.grid_size, 1, 3);

  for (const double m : {0.1, 1.0, 5.0, 20.0}) {
    const WrightPoisson d(1.0, 1.0, m, opts.ctrl);
    long double poisson = std::exp(-static_cast<long double>(m));
    double worst = 0.0;
    for (std::uint64_t r = 0; r <= 50; ++r) {
      if (r > 0) poisson *= static_cast<long double>(m) / static_cast<long double>(r);
      const long double rel = std::abs((static_cast<long double>(d.pmf(r)) - poisson) / poisson);
      worst = std::max(worst, static_cast<double>(rel));
    }
    report.add("classical-reduction", 1e-12, worst, describe(1.0, 1.0, m));
  }

  for (int ia = 0; ia < n_shape; ++ia) {
    for (int ib = 0; ib < n_shape; ++ib) {
      for (int im = 0; im < n_rate; ++im) {
        const double alpha = kShapeAxis[ia];
        const double beta = kShapeAxis[ib];
        const double m = kRateAxis[im];
        const std::string where = describe(alpha, beta, m);
        const WrightPoisson d(alpha, beta, m, opts.ctrl);

        const std::uint64_t cutoff = d.mass_cutoff();
        double total = 0.0;
        for (std::uint64_t r = 0; r <= cutoff; ++r) total += d.pmf(r);
        report.add("normalization", 1e-10, std::abs(total - 1.0), where);
        report.add("normalization-excess", 1e-12, std::max(0.0, total - 1.0), where);

        const MomentReport rep = d.moment_report();
        report.add("mean-methods", 1e-9,
                   std::max({method_discrepancy(rep.mean_series, rep.mean_closed_i),
                             method_discrepancy(rep.mean_series, rep.mean_closed_ii),
                             method_discrepancy(rep.mean_closed_i, rep.mean_closed_ii)}),
                   where);
        report.add("second-moment-methods", 1e-9,
                   std::max({method_discrepancy(rep.m2_series, rep.m2_closed_i),
                             method_discrepancy(rep.m2_series, rep.m2_closed_ii),
                             method_discrepancy(rep.m2_closed_i, rep.m2_closed_ii)}),
                   where);
        report.add("variance-nonnegative", 0.0,
                   std::max(0.0, -(rep.m2_series - rep.mean_series * rep.mean_series)), where);

        const WrightSpec f2 = d.second_factorial_spec();
        report.add("pole-zero", 0.0,
                   std::abs(wright_series_term(f2, 0)) + std::abs(wright_series_term(f2, 1)), where);

        report.add("recurrence", 1e-12, recurrence_error(d), where);

        double mgf_worst = 0.0;
        for (const double t : kMgfTimes) {
          const double closed = d.mgf(t);
          const double summed = tilted_pmf_sum(d, t);
          mgf_worst = std::max(mgf_worst, std::abs(closed - summed) / std::abs(summed));
        }
        report.add("mgf-series", 1e-10, mgf_worst, where);
        report.add("mgf-zero", 1e-12, std::abs(d.mgf(0.0) - 1.0), where);

        const double h = kFiniteDifferenceStep;
        const double slope = (d.mgf(h) - d.mgf(-h)) / (2.0 * h);
        report.add("mgf-derivative", 1e-6,
                   std::abs(slope - rep.mean_series) / std::max(1.0, std::abs(rep.mean_series)),
                   where);

        double violations = 0.0;
        double previous = -1.0;
        for (std::uint64_t r = 0; r <= cutoff; ++r) {
          const double c = d.cdf(r);
          if (c < previous) violations += 1.0;
          previous = c;
          if (d.quantile(std::clamp(c - 1e-15, 0.0, std::nextafter(1.0, 0.0))) > r) violations += 1.0;
        }
        report.add("cdf-quantile", 0.0, violations, where);
      }
    }
  }
  return report.rows();
}

}  // namespace wright_poisson

#include "wright_poisson/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "wright_poisson/errors.hpp"

namespace wright_poisson {
namespace {

constexpr int kLookahead = 16;
constexpr double kLookaheadMass = 1e-15;
// Below this a pmf value is too close to underflow to be carried by the
// recurrence; the walk re-seeds from log_pmf instead.
constexpr double kRecurrenceFloor = 1e-290;

void require_positive(double value, const char* name) {
  if (std::isnan(value) || !(value > 0.0)) {
    throw DomainError(std::string(name) + " must be > 0");
  }
  if (!std::isfinite(value)) throw DomainError(std::string(name) + " must be finite");
}

double ratio(const SeriesResult& num, const SeriesResult& den) {
  return (num.scaled_value / den.scaled_value) * std::exp(num.log_scale - den.log_scale);
}

// Cumulative walk over the support: pmf(0) from log_pmf, then the
// recurrence. Shared by cdf, quantile and sample so that all three see the
// same partial sums.
class CdfWalker {
 public:
  explicit CdfWalker(const WrightPoisson& d)
      : d_(d), pmf_(d.pmf(0)), cumulative_(pmf_) {}

  std::uint64_t r() const noexcept { return r_; }
  double cumulative() const noexcept { return cumulative_; }

  void advance() {
    if (r_ >= kSupportCap) {
      std::ostringstream msg;
      msg << "support walk exceeded " << kSupportCap << " terms";
      throw NonConvergenceError(msg.str());
    }
    previous_ = pmf_;
    pmf_ = pmf_ >= kRecurrenceFloor ? d_.pmf_recurrence_step(r_, pmf_) : d_.pmf(r_ + 1);
    ++r_;
    cumulative_ += pmf_;
  }

  // Past the mode, and further terms can no longer move the partial sum.
  bool tail_exhausted() const noexcept {
    return r_ > 0 && pmf_ < previous_ &&
           pmf_ <= 1e-3 * std::numeric_limits<double>::epsilon() * cumulative_;
  }

 private:
  const WrightPoisson& d_;
  std::uint64_t r_ = 0;
  double pmf_;
  double previous_ = 0.0;
  double cumulative_;
};

}  // namespace

double method_discrepancy(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

WrightPoisson::WrightPoisson(double alpha, double beta, double m, SeriesControl ctrl)
    : alpha_(alpha), beta_(beta), m_(m), ctrl_(ctrl) {
  require_positive(alpha, "alpha");
  require_positive(beta, "beta");
  require_positive(m, "m");
  ctrl_.validate();
  normalizer_ = wright_series(normalizer_spec(), ctrl_);
  log_normalizer_ = normalizer_.log_value;
  if (!std::isfinite(log_normalizer_)) {
    throw NonConvergenceError("normalizer is not a finite positive number");
  }
}

WrightSpec WrightPoisson::normalizer_spec() const {
  return WrightSpec{{{1.0, 1.0}}, {{beta_, alpha_}}, m_};
}

WrightSpec WrightPoisson::second_factorial_spec() const {
  return WrightSpec{{{1.0, 1.0}, {1.0, 1.0}}, {{-1.0, 1.0}, {beta_, alpha_}}, m_};
}

double WrightPoisson::log_pmf(std::uint64_t r) const {
  const double rd = static_cast<double>(r);
  return rd * std::log(m_) - log_gamma(alpha_ * rd + beta_) - log_normalizer_;
}

double WrightPoisson::pmf(std::uint64_t r) const { return std::exp(log_pmf(r)); }

double WrightPoisson::pmf_recurrence_step(std::uint64_t r, double pmf_r) const {
  const double x = alpha_ * static_cast<double>(r) + beta_;
  return m_ * gamma_ratio(x, alpha_) * pmf_r;
}

double WrightPoisson::cdf(std::uint64_t r) const {
  CdfWalker walk(*this);
  while (walk.r() < r) walk.advance();
  return walk.cumulative();
}

std::uint64_t WrightPoisson::quantile(double p) const {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("p must lie in [0, 1)");
  CdfWalker walk(*this);
  while (walk.cumulative() < p && !walk.tail_exhausted()) walk.advance();
  return walk.r();
}

std::uint64_t WrightPoisson::mass_cutoff() const {
  double cumulative = 0.0;
  for (std::uint64_t r = 0; r < kSupportCap; ++r) {
    const double p = pmf(r);
    cumulative += p;
    const bool reached = cumulative >= kMassCutoff;
    // Fallback for a normalizer a few ulps too large: the cumulative sum may
    // top out just short of the cutoff.
    const bool negligible = p < 1e-17 && pmf(r + 1) <= p;
    if (!reached && !negligible) continue;
    double lookahead = 0.0;
    for (int j = 1; j <= kLookahead; ++j) lookahead += pmf(r + static_cast<std::uint64_t>(j));
    if ((reached && lookahead < kLookaheadMass) || (negligible && lookahead < 1e-17)) {
      return r;
    }
  }
  std::ostringstream msg;
  msg << "mass cutoff not reached within " << kSupportCap << " terms";
  throw NonConvergenceError(msg.str());
}

template <typename Weight>
double WrightPoisson::expectation_series(Weight&& weight, const char* what) const {
  double partial = 0.0;
  for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(ctrl_.max_terms); ++r) {
    const double term = weight(r) * pmf(r);
    partial += term;
    if (term > ctrl_.rel_tol * partial) continue;
    double window = 0.0;
    for (int j = 1; j <= kLookahead; ++j) {
      const std::uint64_t s = r + static_cast<std::uint64_t>(j);
      window += weight(s) * pmf(s);
    }
    if (window < ctrl_.rel_tol * partial) return partial;
  }
  throw NonConvergenceError(std::string(what) + ": expectation series did not converge");
}

double WrightPoisson::mean_series() const {
  return expectation_series([](std::uint64_t r) { return static_cast<double>(r); },
                            "mean_series");
}

double WrightPoisson::second_moment_series() const {
  return expectation_series(
      [](std::uint64_t r) {
        const double rd = static_cast<double>(r);
        return rd * rd;
      },
      "second_moment_series");
}

double WrightPoisson::mean_closed_i() const {
  const SeriesResult shifted = wright_series(WrightSpec{{{2.0, 1.0}}, {{beta_, alpha_}}, m_}, ctrl_);
  return ratio(shifted, normalizer_) - 1.0;
}

double WrightPoisson::mean_closed_ii() const {
  const SeriesResult base = mittag_leffler3(alpha_, beta_, 1.0, m_, ctrl_);
  const SeriesResult down1 = mittag_leffler3(alpha_, beta_ - 1.0, 1.0, m_, ctrl_);
  return (ratio(down1, normalizer_) + (1.0 - beta_) * ratio(base, normalizer_)) / alpha_;
}

double WrightPoisson::second_moment_closed_i() const {
  const SeriesResult factorial2 = wright_series(second_factorial_spec(), ctrl_);
  const SeriesResult shifted = wright_series(WrightSpec{{{2.0, 1.0}}, {{beta_, alpha_}}, m_}, ctrl_);
  return ratio(factorial2, normalizer_) + ratio(shifted, normalizer_) - 1.0;
}

double WrightPoisson::second_moment_closed_ii() const {
  const SeriesResult base = mittag_leffler3(alpha_, beta_, 1.0, m_, ctrl_);
  const SeriesResult down1 = mittag_leffler3(alpha_, beta_ - 1.0, 1.0, m_, ctrl_);
  const SeriesResult down2 = mittag_leffler3(alpha_, beta_ - 2.0, 1.0, m_, ctrl_);
  const double one_minus_beta = 1.0 - beta_;
  const double bracket = ratio(down2, normalizer_) + (3.0 - 2.0 * beta_) * ratio(down1, normalizer_) +
                         one_minus_beta * one_minus_beta * ratio(base, normalizer_);
  return bracket / (alpha_ * alpha_);
}

MomentReport WrightPoisson::moment_report() const {
  MomentReport rep;
  rep.mean_series = mean_series();
  rep.mean_closed_i = mean_closed_i();
  rep.mean_closed_ii = mean_closed_ii();
  rep.m2_series = second_moment_series();
  rep.m2_closed_i = second_moment_closed_i();
  rep.m2_closed_ii = second_moment_closed_ii();
  rep.variance = std::max(0.0, rep.m2_series - rep.mean_series * rep.mean_series);

  const double means[] = {rep.mean_series, rep.mean_closed_i, rep.mean_closed_ii};
  const double seconds[] = {rep.m2_series, rep.m2_closed_i, rep.m2_closed_ii};
  double spread = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      spread = std::max(spread, method_discrepancy(means[i], means[j]));
      spread = std::max(spread, method_discrepancy(seconds[i], seconds[j]));
    }
  }
  rep.max_method_spread = spread;
  rep.consistent = spread <= kConsistencyThreshold;
  return rep;
}

double WrightPoisson::mgf(double t) const {
  if (!std::isfinite(t)) throw DomainError("t must be finite");
  const SeriesResult shifted = mittag_leffler2(alpha_, beta_, std::exp(t) * m_, ctrl_);
  return ratio(shifted, normalizer_);
}

SampleBatch WrightPoisson::sample(std::size_t n, std::uint64_t seed) const {
  if (n < 1) throw DomainError("n must be >= 1");

  std::vector<double> table;
  CdfWalker walk(*this);
  table.push_back(walk.cumulative());
  while (walk.cumulative() < kMassCutoff && !walk.tail_exhausted()) {
    walk.advance();
    table.push_back(walk.cumulative());
  }

  SampleBatch batch;
  batch.seed = seed;
  batch.n = n;
  batch.values.reserve(n);
  std::mt19937_64 gen(seed);
  const auto r_max = static_cast<std::uint64_t>(table.size() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    // 53 random bits -> uniform on [0, 1), independent of the library's
    // distribution implementations.
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const auto it = std::lower_bound(table.begin(), table.end(), u);
    batch.values.push_back(it == table.end() ? r_max
                                             : static_cast<std::uint64_t>(it - table.begin()));
  }
  return batch;
}

}  // namespace wright_poisson

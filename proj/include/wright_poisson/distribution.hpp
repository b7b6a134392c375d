#pragma once

#include <cstdint>
#include <vector>

#include "wright_poisson/special_functions.hpp"

namespace wright_poisson {

/// Mean and second raw moment by every available route, side by side.
struct MomentReport {
  double mean_series = 0.0;
  double mean_closed_i = 0.0;
  double mean_closed_ii = 0.0;
  double m2_series = 0.0;
  double m2_closed_i = 0.0;
  double m2_closed_ii = 0.0;
  double variance = 0.0;
  double max_method_spread = 0.0;
  bool consistent = false;  // max_method_spread <= kConsistencyThreshold
};

/// Spread above which moment routes are considered to disagree.
inline constexpr double kConsistencyThreshold = 1e-9;

/// Discrepancy used for max_method_spread: absolute below magnitude 1,
/// relative above it.
double method_discrepancy(double a, double b);

struct SampleBatch {
  std::vector<std::uint64_t> values;
  std::uint64_t seed = 0;
  std::size_t n = 0;
};

/// Probability mass kept by every "infinite" sum over the support.
inline constexpr double kMassCutoff = 1.0 - 1e-13;
/// Hard cap on the support walk for CDF tables and mass cutoffs.
inline constexpr std::uint64_t kSupportCap = 1'000'000;

/// Wright-type Poisson distribution
///
///   P(X = r) = m^r / (Γ(αr + β) · E^1_{α,β}(m)),   r = 0, 1, 2, ...
///
/// with α, β, m > 0. The normalizer E^1_{α,β}(m) = 1Ψ1[m | (1,1); (β,α)] is
/// evaluated once at construction and kept as a logarithm. α = β = 1 gives
/// the classical Poisson distribution with mean m.
///
/// Instances are immutable and may be shared between threads.
class WrightPoisson {
 public:
  /// Throws DomainError naming the violated bound, or NonConvergenceError if
  /// the normalizer series does not converge under `ctrl`.
  WrightPoisson(double alpha, double beta, double m, SeriesControl ctrl = {});

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double m() const noexcept { return m_; }
  double log_normalizer() const noexcept { return log_normalizer_; }
  const SeriesControl& control() const noexcept { return ctrl_; }

  /// r ln m − ln Γ(αr + β) − ln E^1_{α,β}(m).
  double log_pmf(std::uint64_t r) const;
  double pmf(std::uint64_t r) const;

  /// pmf(r + 1) from pmf(r): multiplies by m Γ(αr + β) / Γ(αr + α + β).
  double pmf_recurrence_step(std::uint64_t r, double pmf_r) const;

  double cdf(std::uint64_t r) const;

  /// Smallest r with cdf(r) >= p, for p in [0, 1).
  std::uint64_t quantile(double p) const;

  /// Smallest r whose cumulative mass reaches kMassCutoff with a negligible
  /// 16-term lookahead.
  std::uint64_t mass_cutoff() const;

  double mean_series() const;
  double second_moment_series() const;

  /// [1Ψ1[m|(2,1);(β,α)] − 1Ψ1[m|(1,1);(β,α)]] / 1Ψ1[m|(1,1);(β,α)]
  double mean_closed_i() const;
  /// (1/α) [E^1_{α,β−1}(m) + (1−β) E^1_{α,β}(m)] / E^1_{α,β}(m)
  double mean_closed_ii() const;
  /// [2Ψ2[m|(1,1),(1,1);(−1,1),(β,α)] + 1Ψ1[m|(2,1);(β,α)] − 1Ψ1[m|(1,1);(β,α)]]
  /// / 1Ψ1[m|(1,1);(β,α)]
  double second_moment_closed_i() const;
  /// (1/α²) [E^1_{α,β−2}(m) + (3−2β) E^1_{α,β−1}(m) + (1−β)² E^1_{α,β}(m)]
  /// / E^1_{α,β}(m)
  double second_moment_closed_ii() const;

  MomentReport moment_report() const;

  /// E[e^{tX}] = E_{α,β}(e^t m) / E^1_{α,β}(m).
  double mgf(double t) const;

  /// n i.i.d. draws by CDF inversion; identical output for identical seed.
  SampleBatch sample(std::size_t n, std::uint64_t seed) const;

  /// The Wright specs behind the closed-form moments, exposed for checks.
  WrightSpec normalizer_spec() const;
  WrightSpec second_factorial_spec() const;

 private:
  template <typename Weight>
  double expectation_series(Weight&& weight, const char* what) const;

  double alpha_;
  double beta_;
  double m_;
  SeriesControl ctrl_;
  SeriesResult normalizer_;
  double log_normalizer_;
};

}  // namespace wright_poisson

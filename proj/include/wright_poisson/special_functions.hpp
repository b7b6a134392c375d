#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wright_poisson {

/// One gamma factor Γ(shift + weight·k) of a Wright series coefficient.
struct GammaArg {
  double shift = 0.0;
  double weight = 1.0;
};

/// Parameters of the generalized Wright series
///
///   pΨq(z) = Σ_k [Π_i Γ(a_i + α_i k) / Π_j Γ(b_j + β_j k)] z^k / k!
///
/// `upper` holds the (a_i, α_i) pairs, `lower` the (b_j, β_j) pairs. Either
/// list may be empty.
struct WrightSpec {
  std::vector<GammaArg> upper;
  std::vector<GammaArg> lower;
  double z = 0.0;
};

/// Truncation policy shared by every infinite sum in the library.
struct SeriesControl {
  double rel_tol = 1e-15;
  int min_terms = 8;
  int max_terms = 10000;
  int consecutive_small = 3;

  /// Throws DomainError unless 0 < rel_tol < 1, 1 <= min_terms <= max_terms
  /// and consecutive_small >= 1.
  void validate() const;
};

/// Outcome of a truncated series.
///
/// The sum is carried as scaled_value · exp(log_scale) so that sums far
/// beyond the double range keep a usable log_value; `value` is the plain
/// product and may be ±inf in that case.
struct SeriesResult {
  double value = 0.0;
  double log_value = 0.0;  // ln(value) when value > 0, NaN otherwise
  int terms_used = 0;
  bool converged = false;
  double scaled_value = 0.0;
  double log_scale = 0.0;
  std::optional<std::string> warning;
};

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// 1/Γ(x); exactly 0 at nonpositive integers (absolute tolerance 1e-12).
double reciprocal_gamma(double x);

/// Rising factorial (γ)_n by the product form.
double pochhammer(double gamma, std::uint64_t n);

/// Γ(x) / Γ(x + delta) for x > 0, x + delta > 0, without forming either gamma.
double gamma_ratio(double x, double delta);

/// True when x lies within 1e-12 of 0, -1, -2, ...
bool is_gamma_pole(double x);

/// Δ = Σ_j β_j − Σ_i α_i.
double wright_convergence_index(const WrightSpec& spec);

/// k-th term of the Wright series as a plain double (0 exactly when a lower
/// gamma argument is a pole). Throws DomainError on an upper-gamma pole.
double wright_series_term(const WrightSpec& spec, std::uint64_t k);

SeriesResult wright_series(const WrightSpec& spec, const SeriesControl& ctrl = {});

/// E_α(z) = Σ z^k / Γ(1 + αk).
SeriesResult mittag_leffler(double alpha, double z, const SeriesControl& ctrl = {});

/// E_{α,β}(z) = Σ z^k / Γ(αk + β). β may be any finite real; pole terms vanish.
SeriesResult mittag_leffler2(double alpha, double beta, double z,
                             const SeriesControl& ctrl = {});

/// E^γ_{α,β}(z) = Σ (γ)_k z^k / (Γ(αk + β) k!).
SeriesResult mittag_leffler3(double alpha, double beta, double gamma, double z,
                             const SeriesControl& ctrl = {});

}  // namespace wright_poisson

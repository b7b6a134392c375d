#include "wright_poisson/special_functions.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "wright_poisson/errors.hpp"

namespace wright_poisson {
namespace {

constexpr double kPoleTolerance = 1e-12;
constexpr double kRescaleThreshold = 1e280;
const double kRescaleLog = std::log(kRescaleThreshold);

// A series term as sign · exp(log_mag); sign == 0 is an exact zero.
struct LogTerm {
  int sign = 0;
  double log_mag = 0.0;
};

constexpr LogTerm kZeroTerm{0, 0.0};

double signed_lgamma(double x, int& sign) {
  return boost::math::lgamma(x, &sign);
}

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(name) + " must be finite");
  }
}

// Accumulates terms produced by next(k), k = 0, 1, ... The running sum is
// linear but measured in units of exp(scale); scale grows whenever a term or
// the partial sum would leave the comfortable double range.
template <typename NextTerm>
SeriesResult sum_terms(NextTerm&& next, const SeriesControl& ctrl, const char* what) {
  ctrl.validate();
  double sum = 0.0;
  double scale = 0.0;
  int small_run = 0;
  for (int k = 0; k < ctrl.max_terms; ++k) {
    const LogTerm term = next(static_cast<std::uint64_t>(k));
    double contrib = 0.0;
    if (term.sign != 0) {
      if (term.log_mag - scale > kRescaleLog) {
        sum *= std::exp(scale - term.log_mag);
        scale = term.log_mag;
      }
      contrib = term.sign * std::exp(term.log_mag - scale);
    }
    sum += contrib;
    if (std::abs(sum) > kRescaleThreshold) {
      int exponent = 0;
      sum = std::frexp(sum, &exponent);
      scale += exponent * std::numbers::ln2;
    }

    if (std::abs(contrib) <= ctrl.rel_tol * std::abs(sum)) {
      ++small_run;
    } else {
      small_run = 0;
    }
    if (k + 1 >= ctrl.min_terms && small_run >= ctrl.consecutive_small) {
      SeriesResult out;
      out.terms_used = k + 1;
      out.converged = true;
      out.scaled_value = sum;
      out.log_scale = scale;
      out.value = scale == 0.0 ? sum : sum * std::exp(scale);
      out.log_value = sum > 0.0 ? std::log(sum) + scale
                                : std::numeric_limits<double>::quiet_NaN();
      return out;
    }
  }
  std::ostringstream msg;
  msg << what << ": series did not converge within " << ctrl.max_terms << " terms";
  throw NonConvergenceError(msg.str());
}

// Contribution of z^k. Returns false when the term is an exact zero (z = 0, k > 0).
bool apply_power(double z, double log_abs_z, std::uint64_t k, LogTerm& t) {
  if (k == 0) return true;
  if (z == 0.0) return false;
  t.log_mag += static_cast<double>(k) * log_abs_z;
  if (z < 0.0 && (k & 1U)) t.sign = -t.sign;
  return true;
}

// Divides by Γ(x). Returns false when x is a pole, i.e. the term is exactly 0.
bool apply_lower_gamma(double x, LogTerm& t) {
  if (is_gamma_pole(x)) return false;
  int s = 1;
  t.log_mag -= signed_lgamma(x, s);
  t.sign *= s;
  return true;
}

// Term layout shared by every series below, in this floating-point order:
// weight (upper gammas − ln k!), then + k ln|z|, then − lower gammas. Keeping
// one order makes E^1_{α,β}, E_{α,β} and 1Ψ1[(1,1);(β,α)] agree bit for bit.
LogTerm wright_log_term(const WrightSpec& spec, double log_abs_z, std::uint64_t k) {
  const double kd = static_cast<double>(k);
  LogTerm t{1, 0.0};
  for (const auto& g : spec.upper) {
    const double x = g.shift + g.weight * kd;
    if (is_gamma_pole(x)) {
      std::ostringstream msg;
      msg << "wright_series: upper gamma argument " << x << " is a pole at k = " << k;
      throw DomainError(msg.str());
    }
    int s = 1;
    t.log_mag += signed_lgamma(x, s);
    t.sign *= s;
  }
  t.log_mag -= boost::math::lgamma(kd + 1.0);
  if (!apply_power(spec.z, log_abs_z, k, t)) return kZeroTerm;
  for (const auto& g : spec.lower) {
    if (!apply_lower_gamma(g.shift + g.weight * kd, t)) return kZeroTerm;
  }
  return t;
}

void validate_spec(const WrightSpec& spec) {
  for (const auto& g : spec.upper) {
    require_finite(g.shift, "upper shift");
    require_finite(g.weight, "upper weight");
  }
  for (const auto& g : spec.lower) {
    require_finite(g.shift, "lower shift");
    require_finite(g.weight, "lower weight");
    if (!(g.weight > 0.0)) throw DomainError("lower weights must be > 0");
  }
  require_finite(spec.z, "z");
}

double safe_log_abs(double z) { return z == 0.0 ? 0.0 : std::log(std::abs(z)); }

void require_positive_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha must be > 0");
  }
}

}  // namespace

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw DomainError("rel_tol must lie in (0, 1)");
  }
  if (min_terms < 1 || min_terms > max_terms) {
    throw DomainError("need 1 <= min_terms <= max_terms");
  }
  if (consecutive_small < 1) throw DomainError("consecutive_small must be >= 1");
}

bool is_gamma_pole(double x) {
  if (x > kPoleTolerance) return false;
  return std::abs(x - std::round(x)) <= kPoleTolerance;
}

double log_gamma(double x) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw DomainError("log_gamma: argument must be finite and > 0");
  }
  return boost::math::lgamma(x);
}

double reciprocal_gamma(double x) {
  require_finite(x, "reciprocal_gamma argument");
  if (is_gamma_pole(x)) return 0.0;
  if (std::abs(x) > 170.0) {
    int s = 1;
    const double lg = signed_lgamma(x, s);
    return s * std::exp(-lg);
  }
  return 1.0 / boost::math::tgamma(x);
}

double pochhammer(double gamma, std::uint64_t n) {
  double out = 1.0;
  for (std::uint64_t i = 0; i < n; ++i) out *= gamma + static_cast<double>(i);
  return out;
}

double gamma_ratio(double x, double delta) {
  if (!(x > 0.0) || !(x + delta > 0.0) || !std::isfinite(x) || !std::isfinite(delta)) {
    throw DomainError("gamma_ratio: need x > 0 and x + delta > 0");
  }
  if (delta == 0.0) return 1.0;
  return boost::math::tgamma_delta_ratio(x, delta);
}

double wright_convergence_index(const WrightSpec& spec) {
  double lower = 0.0;
  for (const auto& g : spec.lower) lower += g.weight;
  double upper = 0.0;
  for (const auto& g : spec.upper) upper += g.weight;
  return lower - upper;
}

double wright_series_term(const WrightSpec& spec, std::uint64_t k) {
  validate_spec(spec);
  const LogTerm t = wright_log_term(spec, safe_log_abs(spec.z), k);
  if (t.sign == 0) return 0.0;
  return t.sign * std::exp(t.log_mag);
}

SeriesResult wright_series(const WrightSpec& spec, const SeriesControl& ctrl) {
  validate_spec(spec);
  const double log_abs_z = safe_log_abs(spec.z);
  SeriesResult out = sum_terms(
      [&](std::uint64_t k) { return wright_log_term(spec, log_abs_z, k); }, ctrl,
      "wright_series");
  const double delta = wright_convergence_index(spec);
  if (delta <= -1.0) {
    std::ostringstream msg;
    msg << "convergence index " << delta << " <= -1: the series is not entire";
    out.warning = msg.str();
  }
  return out;
}

SeriesResult mittag_leffler(double alpha, double z, const SeriesControl& ctrl) {
  require_positive_alpha(alpha);
  require_finite(z, "z");
  const double log_abs_z = safe_log_abs(z);
  return sum_terms(
      [&](std::uint64_t k) {
        LogTerm t{1, 0.0};
        if (!apply_power(z, log_abs_z, k, t)) return kZeroTerm;
        t.log_mag -= boost::math::lgamma(1.0 + alpha * static_cast<double>(k));
        return t;
      },
      ctrl, "mittag_leffler");
}

SeriesResult mittag_leffler2(double alpha, double beta, double z, const SeriesControl& ctrl) {
  require_positive_alpha(alpha);
  require_finite(beta, "beta");
  require_finite(z, "z");
  const double log_abs_z = safe_log_abs(z);
  return sum_terms(
      [&](std::uint64_t k) {
        LogTerm t{1, 0.0};
        if (!apply_power(z, log_abs_z, k, t)) return kZeroTerm;
        if (!apply_lower_gamma(beta + alpha * static_cast<double>(k), t)) return kZeroTerm;
        return t;
      },
      ctrl, "mittag_leffler2");
}

SeriesResult mittag_leffler3(double alpha, double beta, double gamma, double z,
                             const SeriesControl& ctrl) {
  require_positive_alpha(alpha);
  require_finite(beta, "beta");
  require_finite(gamma, "gamma");
  require_finite(z, "z");
  const double log_abs_z = safe_log_abs(z);

  // For γ ∈ {0, -1, -2, ...} the weights (γ)_k vanish past k = -γ and the
  // series is a polynomial; carry the exact product there. Elsewhere use
  // ln|Γ(γ + k)| − ln|Γ(γ)|.
  const bool terminating = is_gamma_pole(gamma);
  const double gamma_int = std::round(gamma);
  int sign0 = 1;
  const double lg0 = terminating ? 0.0 : signed_lgamma(gamma, sign0);
  double running = 1.0;

  return sum_terms(
      [&](std::uint64_t k) {
        const double kd = static_cast<double>(k);
        LogTerm t{1, 0.0};
        if (terminating) {
          if (k > 0) running *= gamma_int + (kd - 1.0);
          if (running == 0.0) return kZeroTerm;
          t.sign = running < 0.0 ? -1 : 1;
          t.log_mag = std::log(std::abs(running));
        } else {
          int s = 1;
          t.log_mag = signed_lgamma(gamma + kd, s) - lg0;
          t.sign = s * sign0;
        }
        t.log_mag -= boost::math::lgamma(kd + 1.0);
        if (!apply_power(z, log_abs_z, k, t)) return kZeroTerm;
        if (!apply_lower_gamma(beta + alpha * kd, t)) return kZeroTerm;
        return t;
      },
      ctrl, "mittag_leffler3");
}

}  // namespace wright_poisson

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wright_poisson/special_functions.hpp"

namespace wright_poisson {

/// Observed counts plus the sufficient statistics the likelihood needs.
struct CountData {
  std::vector<std::uint64_t> counts;
  std::size_t n = 0;
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  /// (value, multiplicity), sorted by value. Makes the likelihood independent
  /// of observation order.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> histogram;

  /// Throws DegenerateDataError for an empty input.
  static CountData from_counts(std::vector<std::uint64_t> counts);

  double mean() const { return static_cast<double>(sum) / static_cast<double>(n); }
};

/// Reads counts from plain text (one integer per line) or delimited text with
/// a header row. The delimiter is detected from the first line (tab if it
/// contains a tab, otherwise comma). `column` selects a header name or a
/// 0-based index; the first column is used when omitted.
///
/// Throws ParseError (with a 1-based line number) on unreadable files,
/// negative or non-integer values and unknown columns; DegenerateDataError
/// when no data rows remain.
CountData load_counts(const std::string& path, const std::optional<std::string>& column = {});

/// Same rules as load_counts, reading from an in-memory buffer.
CountData parse_counts(const std::string& text, const std::optional<std::string>& column = {});

/// Σ_i log_pmf(r_i) computed from sufficient statistics.
double log_likelihood(const CountData& data, double alpha, double beta, double m,
                      const SeriesControl& ctrl = {});

enum class FitProfile { m_only, full };

struct FitResult {
  double alpha = 1.0;
  double beta = 1.0;
  double m = 1.0;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool at_boundary = false;  // m̂ sits on the lower bound m_floor
  FitProfile profile = FitProfile::m_only;
};

/// Search settings for fit_m / fit_full. Defaults are the documented ones.
struct FitOptions {
  double m_floor = 1e-8;
  double m_rel_tol = 1e-8;        // golden section stops at |Δm| <= tol·(1 + m)
  std::size_t max_iterations = 200;
  double shape_min = 0.1;         // (α, β) search box
  double shape_max = 10.0;
  int initial_grid = 9;           // points per axis, log-spaced over the box
  int min_rounds = 3;
  std::size_t max_rounds = 200;
  double round_improvement_tol = 1e-6;
  double step_tol = 1e-7;         // log10 step below which refinement stops
};

/// Maximizes the likelihood over m with α, β held fixed: geometric bracketing
/// from the sample mean, then golden-section search.
FitResult fit_m(const CountData& data, double alpha, double beta,
                const SeriesControl& ctrl = {}, const FitOptions& opts = {});

/// Maximizes over (α, β, m): a log-spaced (α, β) grid over the search box with
/// fit_m inside, then 5×5 pattern refinements that halve the step whenever the
/// centre survives. Throws DegenerateDataError when all counts are equal.
FitResult fit_full(const CountData& data, const SeriesControl& ctrl = {},
                   const FitOptions& opts = {});

const char* to_string(FitProfile profile);

}  // namespace wright_poisson

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wright_poisson/distribution.hpp"
#include "wright_poisson/special_functions.hpp"

namespace wright_poisson {

/// One line of the self-check report: the worst error seen for a named
/// invariant over the whole parameter grid.
struct CheckRow {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double threshold = 0.0;
  std::string worst_case;  // parameters at which max_error was observed
};

struct CheckOptions {
  /// Number of leading values taken from each grid axis:
  /// α, β ∈ {0.5, 1, 1.5, 2, 3}, m ∈ {0.1, 1, 5}.
  int grid_size = 5;
  /// Replaces every per-check threshold when set.
  std::optional<double> tolerance;
  SeriesControl ctrl;
};

/// Runs the invariant suite; rows are sorted by check name.
std::vector<CheckRow> run_checks(const CheckOptions& opts = {});

/// Σ e^{tr} pmf(r), continued past the mass cutoff until the tilted terms
/// are negligible. Independent of the closed-form mgf.
double tilted_pmf_sum(const WrightPoisson& d, double t);

}  // namespace wright_poisson

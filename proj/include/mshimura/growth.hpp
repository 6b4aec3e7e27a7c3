#pragma once

// Least-squares growth exponents on log-log data.

#include "mshimura/theta.hpp"

#include <vector>

namespace mshimura {

struct GrowthFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  std::vector<double> schedule;
};

/// Ordinary least squares of log y against log x. Requires at least four
/// points, x strictly increasing and positive, y positive.
GrowthFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// log(count) against log(M).
GrowthFit fit_growth(const std::vector<ThetaRecord>& records);

}  // namespace mshimura

#include "mshimura/growth.hpp"

#include <cmath>
#include <stdexcept>

namespace mshimura {

GrowthFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  if (x.size() < 4) throw std::invalid_argument("fit_loglog: at least four points required");
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw std::invalid_argument("fit_loglog: values must be positive and finite");
    if (i > 0 && !(x[i] > x[i - 1])) throw std::invalid_argument("fit_loglog: schedule must be strictly increasing");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx, dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  GrowthFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double residual = syy - fit.slope * sxy;
  fit.r2 = syy > 0 ? 1 - std::max(0.0, residual) / syy : 1.0;
  fit.schedule = x;
  return fit;
}

GrowthFit fit_growth(const std::vector<ThetaRecord>& records) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (r.count == 0) throw std::invalid_argument("fit_growth: zero count");
    x.push_back(static_cast<double>(r.M));
    y.push_back(static_cast<double>(r.count));
  }
  return fit_loglog(x, y);
}

}  // namespace mshimura

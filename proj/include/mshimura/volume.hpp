#pragma once

// Area of a holomorphic curve for the pulled-back form sum_i |p_i'(t)|^2
// dx dy over {t : ||p(t)|| <= M}, optionally restricted to the open cube F.

#include "mshimura/curve.hpp"

namespace mshimura {

struct VolumeResult {
  double value = 0;
  /// Upper bound on |error| / value reached by the refinement.
  double achieved_tolerance = 0;
  bool converged = false;
};

/// The norm and F are those of theta_count. Parameter cells entirely
/// inside the region are integrated exactly (tensor Gauss-Legendre, the
/// integrand being a polynomial); cells meeting the boundary are refined
/// largest-error first until the boundary error bound drops below
/// `rel_tol` times the value or `max_cells` cells were examined.
/// Requires a complex parameter and a torus or abelian ambient.
VolumeResult curve_volume(const ParamCurve& curve, double M, bool truncate_to_F, double rel_tol = 1e-2,
                          long max_cells = 4000000);

}  // namespace mshimura

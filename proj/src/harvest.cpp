#include "mshimura/harvest.hpp"

#include "mshimura/weakly_special.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mshimura {

Lattice harvest_stabilizer(const ParamCurve& curve, const std::vector<LatticeVector>& gammas) {
  const auto dim = static_cast<Eigen::Index>(curve.observation_dim());
  for (const auto& g : gammas)
    if (static_cast<Eigen::Index>(g.size()) != dim) throw std::invalid_argument("harvest_stabilizer: dimension mismatch");
  const TranslationStabilizer stab(curve);

  // Distinct differences up to sign.
  std::set<LatticeVector> deltas;
  for (size_t i = 0; i < gammas.size(); ++i)
    for (size_t j = i + 1; j < gammas.size(); ++j) {
      LatticeVector d(gammas[i].size());
      for (size_t k = 0; k < d.size(); ++k) d[k] = gammas[j][k] - gammas[i][k];
      // Normalize so that the first non-zero entry is positive.
      auto nz = std::find_if(d.begin(), d.end(), [](long long x) { return x != 0; });
      if (nz == d.end()) continue;
      if (*nz < 0)
        for (auto& x : d) x = -x;
      deltas.insert(std::move(d));
    }

  Lattice accepted(dim);
  RatMat span(0, dim);
  for (const auto& d : deltas) {
    IntVec v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v(k) = d[static_cast<size_t>(k)];
    const RatVec rv = to_rational(v);
    // Saturation makes anything in the accepted span redundant.
    if ((span.rows() > 0 && in_row_space(span, rv)) || !stab.contains(d)) continue;
    accepted = accepted + Lattice::from_generators(std::vector<IntVec>{v}, dim);
    span = row_space_basis(to_rational(accepted.basis()));
  }
  return saturate(accepted);
}

}  // namespace mshimura

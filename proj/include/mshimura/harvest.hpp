#pragma once

// Stabilizer candidates harvested from counted lattice vectors.

#include "mshimura/lattice.hpp"
#include "mshimura/theta.hpp"

#include <vector>

namespace mshimura {

/// Saturation of the lattice generated by the pairwise differences of
/// `gammas` that translate the curve into itself (exact test for graph
/// curves). Differences already in the accepted span are skipped.
Lattice harvest_stabilizer(const ParamCurve& curve, const std::vector<LatticeVector>& gammas);

}  // namespace mshimura

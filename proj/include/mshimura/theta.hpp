#pragma once

// Counting Theta(C, M): lattice vectors gamma of height <= M whose
// translated fundamental set F - gamma meets C_M = {z in C : ||z|| <= M}.
//
// F is the open cube (-1, 1)^D in the lattice coordinates (all real and
// imaginary parts for an abelian ambient, the real parts for a torus).
// ||z|| is the max of |real coordinates| for an abelian ambient and the
// max of the complex moduli |z_i| for a torus.

#include "mshimura/curve.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace mshimura {

using LatticeVector = std::vector<long long>;

struct ThetaConfig {
  /// Parameter cells are refined until every lattice coordinate varies by
  /// at most this much over a cell; one sample per such cell.
  double initial_step = 0.5;
  /// Further bisection levels used to decide the remaining candidates.
  int max_depth = 10;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// A run is low-confidence when uncertain > ratio * count.
  double low_confidence_ratio = 0.10;
};

struct ThetaRecord {
  long long M = 0;
  std::uint64_t count = 0;
  std::uint64_t uncertain = 0;
  double volume = std::numeric_limits<double>::quiet_NaN();
  bool low_confidence = false;
};

struct ThetaRun {
  ThetaRecord record;
  /// Certified members of Theta, lexicographically sorted.
  std::vector<LatticeVector> gammas;
  /// Undecided lattice vectors (not counted), sorted.
  std::vector<LatticeVector> undecided;
};

/// Requires a torus or abelian ambient, 1 <= M <= 32767 and at most 8
/// lattice coordinates. Deterministic for any thread count.
ThetaRun theta_count(const ParamCurve& curve, long long M, const ThetaConfig& cfg = {});

/// Closed parameter box [-T, T] (real) or [-T, T]^2 (complex) containing
/// every t with ||p(t)|| <= M.
double parameter_bound(const ParamCurve& curve, double M);

/// Constraint polynomials n(s) >= 0 cutting out {t : ||p(t)|| <= M}.
std::vector<Poly2> norm_constraints(const ParamCurve& curve, const Rat& M);

}  // namespace mshimura

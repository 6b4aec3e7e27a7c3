#pragma once

// Weakly special data in a fiber: translation stabilizers of parametrized
// curves, smallest subtori and abelian subvarieties containing monodromy
// data, and the Psi-orthogonality criterion.

#include "mshimura/curve.hpp"
#include "mshimura/heisenberg.hpp"
#include "mshimura/lattice.hpp"
#include "mshimura/theta.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mshimura {

/// The group {b : C + b = C} of translations of the ambient C^k.
/// For a graph curve (t, p_2(t), ...) this is {(a, p_2(t + a) - p_2(t), ...)}
/// with the differences constant in t: a line {a (1, c_2, ..., c_k)} when
/// every p_i is linear, zero otherwise. Other curves get a numeric
/// membership test and are flagged approximate.
class TranslationStabilizer {
 public:
  explicit TranslationStabilizer(const ParamCurve& curve);

  bool exact() const { return exact_; }
  bool is_trivial() const { return !direction_.has_value(); }
  /// (1, c_2, ..., c_k); a ranges over C (complex parameter) or R.
  const std::optional<std::vector<GaussRat>>& direction() const { return direction_; }

  /// Exact for graph curves: p_i(t + b_1) == p_i(t) + b_i as polynomials.
  bool contains(const std::vector<GaussRat>& b) const;
  /// A lattice vector in the coordinates of theta_count.
  bool contains(const LatticeVector& gamma) const;

 private:
  bool numeric_contains(const std::vector<GaussRat>& b) const;

  ParamCurve curve_;
  bool exact_;
  std::optional<std::vector<GaussRat>> direction_;
};

TranslationStabilizer translation_stabilizer(const ParamCurve& curve);

/// The ambient translation of a lattice vector: (g_1 + i g_2, ...) for an
/// abelian ambient, (g_1, ..., g_m) for a torus.
std::vector<GaussRat> lattice_translation(const ParamCurve& curve, const LatticeVector& gamma);

struct MonodromyData {
  Eigen::Index dim = 0;
  std::vector<IntVec> generators;
};

/// Saturation of the lattice generated by the monodromy vectors.
Lattice smallest_subtorus(const MonodromyData& data);

/// Smallest J-stable saturated lattice containing the generators. J must
/// be a square matrix of even size with J^2 = -1.
Lattice smallest_subabelian(const MonodromyData& data, const RatMat& J);

/// J(x, y) = (-y, x) on Q^{2g} with coordinates (x_1..x_g, y_1..y_g).
RatMat standard_complex_structure(int g);

/// Data of unif(W_0(R) U_0(C) z): W_0 spanned by rational vectors of
/// U + V (u-coordinates first), base point z = (z_u, z_v).
struct WeaklySpecialCandidate {
  DatumPtr datum;
  std::vector<RatVec> w0;
  RatVec z_u;
  RatVec z_v;
  /// Complex structure on V; empty means the standard one.
  RatMat J;
};

struct Verdict {
  bool weakly_special = false;
  /// The failed clauses, or "weakly special".
  std::string reason;
};

/// U_0 = W_0 ∩ U and V_0 = image of W_0 in V.
RatMat candidate_u0(const WeaklySpecialCandidate& c);
RatMat candidate_v0(const WeaklySpecialCandidate& c);

/// True iff V_0 is J-stable and Psi(v, z_v) lies in U_0 for every v in
/// V_0. Throws std::invalid_argument on shape errors or an invalid J.
Verdict is_weakly_special_fiber(const WeaklySpecialCandidate& c);

/// (1/2) Psi(gamma, z_v) in gamma_u for every generator gamma.
bool half_psi_integrality(const SymplecticDatum& datum, const std::vector<RatVec>& generators, const RatVec& z_v,
                          const Lattice& gamma_u);

}  // namespace mshimura

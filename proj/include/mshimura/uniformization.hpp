#pragma once

// The realized space X+ = U(C) x V(R) x H (pure part only for g = 1), the
// action of P on it, the fundamental set and reduction into it.

#include "mshimura/heisenberg.hpp"

#include <complex>
#include <optional>
#include <stdexcept>

namespace mshimura {

using Complex = std::complex<double>;
using ComplexVec = Vector<Complex>;
using RealVec = Vector<double>;

class ReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point (u, v, tau). tau is present exactly when g = 1.
struct DomainPoint {
  DatumPtr datum;
  ComplexVec u;
  RealVec v;
  std::optional<Complex> tau;

  /// Throws std::invalid_argument on shape mismatch, non-finite
  /// coordinates, a missing/extra pure part or Im(tau) <= 0.
  DomainPoint(DatumPtr d, ComplexVec u_part, RealVec v_part, std::optional<Complex> tau_part = std::nullopt);
};

/// Max-norm distance between two points of the same datum.
double distance(const DomainPoint& a, const DomainPoint& b);

/// (u, v, m) . (u', v', tau) = (u + nu(m) u' + Psi(v, m v')/2, v + m v', m tau).
/// The U-part scale is 1 for the trivial U-action. The pure part acts by
/// Moebius transformation; nu(m) <= 0 or a non-positive image Im(tau)
/// throws std::domain_error.
DomainPoint act(const GroupElement<double>& gamma, const DomainPoint& x);
DomainPoint act(const GroupElement<Rat>& gamma, const DomainPoint& x);

/// Moebius image of tau under a real 2 x 2 matrix.
Complex moebius(const Matrix<double>& m, Complex tau);

/// U-part: Re(s_i) in [-N/2, N/2) (one period of N Z); V-part: [0, N)^{2g};
/// G-part: the closed standard domain |Re tau| <= 1/2, |tau| >= 1.
struct FundamentalSet {
  int level;

  double u_lower() const { return -0.5 * level; }
  double u_upper() const { return 0.5 * level; }
  bool contains_u(const ComplexVec& u) const;
  bool contains_v(const RealVec& v) const;
  static bool contains_tau(Complex tau);
  bool contains(const DomainPoint& x) const;
};

bool in_fundamental_set(const DomainPoint& x);

struct Reduction {
  GroupElement<Rat> gamma;
  DomainPoint y;
};

/// Reduces x into the fundamental set of level `level`: SL2(Z) reduction
/// of tau, then translation by N Z^{2g} on V and N Z^r on U. y is
/// recomputed as act(gamma, x). Requires g <= 1.
/// Throws ReductionError if the modular reduction does not terminate, its
/// matrix entries leave the exactly representable range, or Im(tau)^2
/// underflows.
Reduction reduce(const DomainPoint& x, int level);

/// SL2(Z) matrix moving tau into the standard domain.
IntMat reduce_tau(Complex tau);

/// Height of the V-part of gamma in coordinates of N Z^{2g}: max |v_i| / N.
Integer lattice_height_v(const GroupElement<Rat>& gamma, int level);

}  // namespace mshimura

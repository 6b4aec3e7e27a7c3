#include "mshimura/uniformization.hpp"

#include <cfloat>
#include <cmath>

namespace mshimura {

namespace {

constexpr int kMaxReductionSteps = 200;
constexpr double kMaxExactEntry = 9007199254740992.0;  // 2^53

bool finite(const ComplexVec& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!std::isfinite(x(i).real()) || !std::isfinite(x(i).imag())) return false;
  return true;
}

bool finite(const RealVec& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!std::isfinite(x(i))) return false;
  return true;
}

}  // namespace

DomainPoint::DomainPoint(DatumPtr d, ComplexVec u_part, RealVec v_part, std::optional<Complex> tau_part)
    : datum(std::move(d)), u(std::move(u_part)), v(std::move(v_part)), tau(tau_part) {
  if (!datum) throw std::invalid_argument("DomainPoint: null datum");
  if (u.size() != datum->u_dim() || v.size() != datum->v_dim())
    throw std::invalid_argument("DomainPoint: coordinate shapes do not match the datum");
  if (!finite(u) || !finite(v)) throw std::invalid_argument("DomainPoint: non-finite coordinate");
  if (tau.has_value() != (datum->genus() == 1))
    throw std::invalid_argument("DomainPoint: pure part tau is present exactly when g = 1");
  if (tau) {
    if (!std::isfinite(tau->real()) || !std::isfinite(tau->imag()))
      throw std::invalid_argument("DomainPoint: non-finite tau");
    if (tau->imag() <= 0) throw std::invalid_argument("DomainPoint: Im(tau) must be positive");
  }
}

double distance(const DomainPoint& a, const DomainPoint& b) {
  if (a.datum != b.datum) throw DatumMismatch();
  double d = 0;
  for (Eigen::Index i = 0; i < a.u.size(); ++i) d = std::max(d, std::abs(a.u(i) - b.u(i)));
  for (Eigen::Index i = 0; i < a.v.size(); ++i) d = std::max(d, std::abs(a.v(i) - b.v(i)));
  if (a.tau) d = std::max(d, std::abs(*a.tau - *b.tau));
  return d;
}

Complex moebius(const Matrix<double>& m, Complex tau) {
  return (m(0, 0) * tau + m(0, 1)) / (m(1, 0) * tau + m(1, 1));
}

DomainPoint act(const GroupElement<double>& gamma, const DomainPoint& x) {
  if (gamma.datum() != x.datum) throw DatumMismatch();
  if (gamma.nu() <= 0) throw std::domain_error("act: similitude factor must be positive");
  const RealVec mv = gamma.m() * x.v;
  const RealVec shift = x.datum->pair(gamma.v(), mv) / 2.0;
  ComplexVec u(x.u.size());
  const double scale = gamma.u_scale();
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = gamma.u()(i) + scale * x.u(i) + shift(i);
  RealVec v = gamma.v() + mv;
  std::optional<Complex> tau;
  if (x.tau) {
    tau = moebius(gamma.m(), *x.tau);
    if (!(tau->imag() > 0) || !std::isfinite(tau->real()) || !std::isfinite(tau->imag()))
      throw std::domain_error("act: image of tau is not in the upper half plane");
  }
  return DomainPoint(x.datum, std::move(u), std::move(v), tau);
}

DomainPoint act(const GroupElement<Rat>& gamma, const DomainPoint& x) { return act(to_double(gamma), x); }

bool FundamentalSet::contains_u(const ComplexVec& u) const {
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (!(u(i).real() >= u_lower() && u(i).real() < u_upper())) return false;
  return true;
}

bool FundamentalSet::contains_v(const RealVec& v) const {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!(v(i) >= 0 && v(i) < level)) return false;
  return true;
}

bool FundamentalSet::contains_tau(Complex tau) {
  return std::abs(tau.real()) <= 0.5 && std::norm(tau) >= 1.0;
}

bool FundamentalSet::contains(const DomainPoint& x) const {
  return contains_u(x.u) && contains_v(x.v) && (!x.tau || contains_tau(*x.tau));
}

bool in_fundamental_set(const DomainPoint& x) { return FundamentalSet{x.datum->level()}.contains(x); }

IntMat reduce_tau(Complex tau) {
  if (!(tau.imag() > 0)) throw ReductionError("reduce: Im(tau) must be positive");
  // Beyond this the Moebius denominators |c tau + d|^2 >= (c Im tau)^2 can underflow.
  if (tau.imag() * tau.imag() < DBL_MIN) throw ReductionError("reduce: Im(tau) underflow");
  Matrix<double> m = Matrix<double>::Identity(2, 2);
  for (int step = 0; step < kMaxReductionSteps; ++step) {
    const Complex t = moebius(m, tau);
    if (!std::isfinite(t.real()) || !(t.imag() > 0)) throw ReductionError("reduce: Im(tau) underflow");
    Matrix<double> e(2, 2);
    if (std::abs(t.real()) > 0.5) {
      const double n = std::round(t.real());
      e << 1, -n, 0, 1;
    } else if (std::norm(t) < 1.0) {
      e << 0, -1, 1, 0;
    } else {
      IntMat out(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = static_cast<long long>(m(i, j));
      return out;
    }
    m = e * m;
    if (m.cwiseAbs().maxCoeff() > kMaxExactEntry)
      throw ReductionError("reduce: modular reduction matrix overflow (numerically degenerate tau)");
  }
  throw ReductionError("reduce: modular reduction did not converge");
}

namespace {

// k N with value + k N in [lower, lower + N); the caller re-checks after rounding.
long long shift_into(double value, double lower, int level) {
  return -static_cast<long long>(std::floor((value - lower) / level)) * level;
}

}  // namespace

Reduction reduce(const DomainPoint& x, int level) {
  const auto& datum = x.datum;
  if (datum->genus() > 1) throw std::invalid_argument("reduce: only g <= 1 is supported");
  if (level <= 0) throw std::invalid_argument("reduce: level must be positive");
  const Eigen::Index n = datum->v_dim();
  const Eigen::Index r = datum->u_dim();
  const FundamentalSet f{level};

  RatMat m = RatMat::Identity(n, n);
  if (x.tau) m = to_rational(reduce_tau(*x.tau));

  const DomainPoint pure_moved = act(GroupElement<Rat>(datum, RatVec::Zero(r), RatVec::Zero(n), m), x);
  RatVec gv(n);
  for (Eigen::Index i = 0; i < n; ++i) gv(i) = Rat(shift_into(pure_moved.v(i), 0.0, level));

  auto compose = [&](const RatVec& gu) { return GroupElement<Rat>(datum, gu, gv, m); };
  RatVec gu = RatVec::Zero(r);
  DomainPoint y = act(compose(gu), x);
  // Floating-point rounding can push a coordinate onto the open end.
  for (Eigen::Index i = 0; i < n; ++i)
    if (y.v(i) >= level) gv(i) -= level;
  y = act(compose(gu), x);
  for (Eigen::Index i = 0; i < r; ++i) gu(i) = Rat(shift_into(y.u(i).real(), f.u_lower(), level));
  y = act(compose(gu), x);
  for (Eigen::Index i = 0; i < r; ++i)
    if (y.u(i).real() >= f.u_upper()) gu(i) -= level;
  Reduction out{compose(gu), act(compose(gu), x)};
  // A value that rounds below the closed end is snapped onto it; this
  // moves y by at most one ulp of the lower bound.
  for (Eigen::Index i = 0; i < n; ++i)
    if (out.y.v(i) < 0) out.y.v(i) = 0;
  for (Eigen::Index i = 0; i < r; ++i)
    if (out.y.u(i).real() < f.u_lower()) out.y.u(i).real(f.u_lower());
  return out;
}

Integer lattice_height_v(const GroupElement<Rat>& gamma, int level) {
  Integer h = 0;
  for (Eigen::Index i = 0; i < gamma.v().size(); ++i) {
    const Rat q = abs(gamma.v()(i)) / Rat(level);
    const Integer c = numerator(q) / denominator(q);
    const Integer hi = denominator(q) == 1 ? c : c + 1;
    if (hi > h) h = hi;
  }
  return h;
}

}  // namespace mshimura

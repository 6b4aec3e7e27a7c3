#pragma once

// Siegel-type group structure: the central extension W = U x V defined by
// an alternating form Psi, the semidirect product P = W x| GSp, congruence
// subgroups and the order of a rational point of W.

#include "mshimura/arith.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mshimura {

using PsiMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// How the similitude group acts on U: by the similitude character (Siegel
/// type) or trivially. The trivial action only gives a group on the
/// symplectic (nu = 1) part, so elements with nu != 1 are rejected for it.
enum class UAction { Similitude, Trivial };

class DatumMismatch : public std::invalid_argument {
 public:
  DatumMismatch() : std::invalid_argument("group elements belong to different symplectic data") {}
};

class NotSimilitude : public std::domain_error {
 public:
  NotSimilitude() : std::domain_error("not a similitude") {}
};

/// Standard alternating form [[0, I], [-I, 0]] on Q^{2g}:
/// Psi(v, w) = sum_i (v_i w_{g+i} - v_{g+i} w_i).
PsiMatrix standard_form(int g);

/// Dimensions (g, r), the alternating forms Psi_1..Psi_r : V x V -> Q and
/// the level N. Immutable once built; elements hold a shared pointer to it.
class SymplecticDatum {
 public:
  /// r = 1, Psi = standard form, level N.
  static std::shared_ptr<const SymplecticDatum> standard(int g, int level = 4,
                                                         UAction action = UAction::Similitude);
  /// Validates: every form is 2g x 2g and alternating, N even and > 3, and
  /// for r = 1, g >= 1 the form is nondegenerate unless it is identically 0.
  static std::shared_ptr<const SymplecticDatum> create(int g, std::vector<PsiMatrix> psi, int level,
                                                       UAction action = UAction::Similitude);

  int genus() const { return g_; }
  Eigen::Index u_dim() const { return static_cast<Eigen::Index>(psi_.size()); }
  Eigen::Index v_dim() const { return 2 * g_; }
  int level() const { return level_; }
  UAction u_action() const { return action_; }
  const std::vector<PsiMatrix>& psi() const { return psi_; }

  /// True iff every Psi_k vanishes, i.e. W is commutative.
  bool is_commutative() const;

  /// Psi(v, w) in Q^r (or R^r).
  template <class Scalar>
  Vector<Scalar> pair(const Vector<Scalar>& v, const Vector<Scalar>& w) const {
    Vector<Scalar> out(u_dim());
    for (Eigen::Index k = 0; k < u_dim(); ++k)
      out(k) = v.dot(psi_[static_cast<size_t>(k)].template cast<Scalar>() * w);
    return out;
  }

 private:
  SymplecticDatum(int g, std::vector<PsiMatrix> psi, int level, UAction action)
      : g_(g), psi_(std::move(psi)), level_(level), action_(action) {}

  int g_;
  std::vector<PsiMatrix> psi_;
  int level_;
  UAction action_;
};

using DatumPtr = std::shared_ptr<const SymplecticDatum>;

bool is_commutative(const SymplecticDatum& datum);

// ---------------------------------------------------------------------------
// Similitude character

/// nu with m^T Psi_k m = nu Psi_k for every nonzero Psi_k of the datum.
/// With Psi identically zero every invertible m is accepted with nu = 1.
template <class Scalar>
std::optional<Scalar> similitude(const SymplecticDatum& datum, const Matrix<Scalar>& m) {
  const Eigen::Index n = datum.v_dim();
  if (m.rows() != n || m.cols() != n) return std::nullopt;
  if (n == 0) return Scalar(1);
  std::optional<Scalar> nu;
  double scale = 1.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) scale = std::max(scale, std::abs(ScalarTraits<Scalar>::to_double(m(i, j))));
  for (const auto& psi_k : datum.psi()) {
    if (psi_k.isZero()) continue;
    const Matrix<Scalar> form = psi_k.template cast<Scalar>();
    const Matrix<Scalar> pulled = m.transpose() * form * m;
    // Read nu off the first nonzero entry of the form.
    Eigen::Index pi = 0, pj = 0;
    while (form(pi, pj) == Scalar(0)) {
      if (++pj == n) {
        pj = 0;
        ++pi;
      }
    }
    const Scalar candidate = pulled(pi, pj) / form(pi, pj);
    if (nu && !ScalarTraits<Scalar>::is_zero(*nu - candidate, scale * scale)) return std::nullopt;
    nu = candidate;
    const Matrix<Scalar> residual = pulled - candidate * form;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (!ScalarTraits<Scalar>::is_zero(residual(i, j), scale * scale)) return std::nullopt;
  }
  if (!nu) {
    if (!inverse<Scalar>(m)) return std::nullopt;
    return Scalar(1);
  }
  if (ScalarTraits<Scalar>::is_zero(*nu, scale * scale)) return std::nullopt;
  return nu;
}

/// Similitude factor against the standard form on Q^{rows(m)}.
std::optional<Rat> similitude(const RatMat& m);

// ---------------------------------------------------------------------------
// W = U x V

/// A point (u, v) of W with coordinates in Scalar (Rat or double).
template <class Scalar>
struct HeisenbergElement {
  DatumPtr datum;
  Vector<Scalar> u;
  Vector<Scalar> v;

  HeisenbergElement(DatumPtr d, Vector<Scalar> u_part, Vector<Scalar> v_part)
      : datum(std::move(d)), u(std::move(u_part)), v(std::move(v_part)) {
    if (!datum) throw std::invalid_argument("HeisenbergElement: null datum");
    if (u.size() != datum->u_dim() || v.size() != datum->v_dim())
      throw std::invalid_argument("HeisenbergElement: coordinate shapes do not match the datum");
  }

  static HeisenbergElement identity(DatumPtr d) {
    const auto r = d->u_dim();
    const auto n = d->v_dim();
    return HeisenbergElement(std::move(d), Vector<Scalar>::Zero(r), Vector<Scalar>::Zero(n));
  }

  friend bool operator==(const HeisenbergElement& a, const HeisenbergElement& b) {
    return a.datum == b.datum && a.u == b.u && a.v == b.v;
  }
};

/// (u, v)(u', v') = (u + u' + Psi(v, v')/2, v + v').
template <class Scalar>
HeisenbergElement<Scalar> w_mul(const HeisenbergElement<Scalar>& a, const HeisenbergElement<Scalar>& b) {
  if (a.datum != b.datum) throw DatumMismatch();
  Vector<Scalar> u = a.u + b.u + a.datum->pair(a.v, b.v) / Scalar(2);
  Vector<Scalar> v = a.v + b.v;
  return {a.datum, std::move(u), std::move(v)};
}

template <class Scalar>
HeisenbergElement<Scalar> w_inverse(const HeisenbergElement<Scalar>& a) {
  return {a.datum, Vector<Scalar>(-a.u), Vector<Scalar>(-a.v)};
}

/// a b a^-1 b^-1; equals (Psi(v_a, v_b), 0).
template <class Scalar>
HeisenbergElement<Scalar> commutator(const HeisenbergElement<Scalar>& a, const HeisenbergElement<Scalar>& b) {
  return w_mul(w_mul(w_mul(a, b), w_inverse(a)), w_inverse(b));
}

/// Least k > 0 with k (u, v) integral: the lcm of all coordinate denominators.
Integer ord(const HeisenbergElement<Rat>& w);

// ---------------------------------------------------------------------------
// P = W x| G

/// A point (u, v, m) of P. The similitude relation of m is checked at
/// construction and nu(m) is cached.
template <class Scalar>
class GroupElement {
 public:
  GroupElement(DatumPtr d, Vector<Scalar> u, Vector<Scalar> v, Matrix<Scalar> m)
      : datum_(std::move(d)), u_(std::move(u)), v_(std::move(v)), m_(std::move(m)) {
    if (!datum_) throw std::invalid_argument("GroupElement: null datum");
    if (u_.size() != datum_->u_dim() || v_.size() != datum_->v_dim() || m_.rows() != datum_->v_dim() ||
        m_.cols() != datum_->v_dim())
      throw std::invalid_argument("GroupElement: coordinate shapes do not match the datum");
    auto nu = similitude<Scalar>(*datum_, m_);
    if (!nu) throw NotSimilitude();
    if (datum_->u_action() == UAction::Trivial && !ScalarTraits<Scalar>::is_zero(*nu - Scalar(1)))
      throw std::domain_error("trivial U-action requires similitude factor 1");
    nu_ = *nu;
  }

  static GroupElement identity(DatumPtr d) {
    const auto r = d->u_dim();
    const auto n = d->v_dim();
    return GroupElement(std::move(d), Vector<Scalar>::Zero(r), Vector<Scalar>::Zero(n),
                        Matrix<Scalar>::Identity(n, n));
  }

  static GroupElement from_w(const HeisenbergElement<Scalar>& w) {
    const auto n = w.datum->v_dim();
    return GroupElement(w.datum, w.u, w.v, Matrix<Scalar>::Identity(n, n));
  }

  const DatumPtr& datum() const { return datum_; }
  const Vector<Scalar>& u() const { return u_; }
  const Vector<Scalar>& v() const { return v_; }
  const Matrix<Scalar>& m() const { return m_; }
  const Scalar& nu() const { return nu_; }
  HeisenbergElement<Scalar> w_part() const { return {datum_, u_, v_}; }

  /// The scalar by which m acts on U.
  Scalar u_scale() const { return datum_->u_action() == UAction::Similitude ? nu_ : Scalar(1); }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.datum_ == b.datum_ && a.u_ == b.u_ && a.v_ == b.v_ && a.m_ == b.m_;
  }

 private:
  DatumPtr datum_;
  Vector<Scalar> u_;
  Vector<Scalar> v_;
  Matrix<Scalar> m_;
  Scalar nu_;
};

/// (w, m)(w', m') = (w . m(w'), m m') with m(u', v') = (nu(m) u', m v') for
/// the Siegel-type action (u' unchanged for the trivial action).
template <class Scalar>
GroupElement<Scalar> p_mul(const GroupElement<Scalar>& a, const GroupElement<Scalar>& b) {
  if (a.datum() != b.datum()) throw DatumMismatch();
  const HeisenbergElement<Scalar> moved(b.datum(), Vector<Scalar>(a.u_scale() * b.u()),
                                        Vector<Scalar>(a.m() * b.v()));
  const HeisenbergElement<Scalar> w = w_mul(a.w_part(), moved);
  return GroupElement<Scalar>(a.datum(), w.u, w.v, Matrix<Scalar>(a.m() * b.m()));
}

template <class Scalar>
GroupElement<Scalar> p_inverse(const GroupElement<Scalar>& a) {
  const auto m_inv = inverse<Scalar>(a.m());
  if (!m_inv) throw NotSimilitude();
  const Scalar scale = Scalar(1) / a.u_scale();
  const HeisenbergElement<Scalar> w_inv = w_inverse(a.w_part());
  return GroupElement<Scalar>(a.datum(), Vector<Scalar>(scale * w_inv.u), Vector<Scalar>(*m_inv * w_inv.v),
                              *m_inv);
}

/// m in GSp_2g(Z) with m = 1 mod N, u in N Z^r, v in N Z^2g.
bool in_congruence_subgroup(const GroupElement<Rat>& x, int level);

/// Max of the coordinate heights of (u, v) and of the entries of m in the
/// defining 2g x 2g representation.
Integer height(const GroupElement<Rat>& x);
Integer height(const HeisenbergElement<Rat>& w);

/// Faithful representation P -> GL_{2g+2}: (u, v, m) maps to
/// [[1, v^T Psi / 2, u], [0, I, v], [0, 0, 1]] * diag(nu, m, 1).
/// Requires r = 1; used as an independent check of the group law.
RatMat matrix_embedding(const GroupElement<Rat>& x);

GroupElement<double> to_double(const GroupElement<Rat>& x);

}  // namespace mshimura

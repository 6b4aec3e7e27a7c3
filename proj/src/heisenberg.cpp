#include "mshimura/heisenberg.hpp"

#include "mshimura/lattice.hpp"

namespace mshimura {

PsiMatrix standard_form(int g) {
  PsiMatrix j = PsiMatrix::Zero(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    j(i, g + i) = 1;
    j(g + i, i) = -1;
  }
  return j;
}

DatumPtr SymplecticDatum::standard(int g, int level, UAction action) {
  return create(g, {standard_form(g)}, level, action);
}

DatumPtr SymplecticDatum::create(int g, std::vector<PsiMatrix> psi, int level, UAction action) {
  if (g < 0) throw std::invalid_argument("SymplecticDatum: genus must be >= 0");
  if (level <= 3 || level % 2 != 0) throw std::invalid_argument("SymplecticDatum: level must be even and > 3");
  for (const auto& form : psi) {
    if (form.rows() != 2 * g || form.cols() != 2 * g)
      throw std::invalid_argument("SymplecticDatum: form must be 2g x 2g");
    if (form.transpose() != -form) throw std::invalid_argument("SymplecticDatum: form is not alternating");
  }
  if (psi.size() == 1 && g >= 1 && !psi[0].isZero()) {
    IntMat f(2 * g, 2 * g);
    for (int i = 0; i < 2 * g; ++i)
      for (int j = 0; j < 2 * g; ++j) f(i, j) = psi[0](i, j);
    if (determinant(f) == 0) throw std::invalid_argument("SymplecticDatum: form is degenerate");
  }
  return DatumPtr(new SymplecticDatum(g, std::move(psi), level, action));
}

bool SymplecticDatum::is_commutative() const {
  for (const auto& form : psi_)
    if (!form.isZero()) return false;
  return true;
}

bool is_commutative(const SymplecticDatum& datum) { return datum.is_commutative(); }

std::optional<Rat> similitude(const RatMat& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) return std::nullopt;
  const auto datum = SymplecticDatum::standard(static_cast<int>(m.rows() / 2));
  return similitude<Rat>(*datum, m);
}

Integer ord(const HeisenbergElement<Rat>& w) {
  return boost::multiprecision::lcm(denominator_lcm(w.u), denominator_lcm(w.v));
}

namespace {

bool divisible(const Rat& x, int level) {
  return denominator(x) == 1 && numerator(x) % level == 0;
}

}  // namespace

bool in_congruence_subgroup(const GroupElement<Rat>& x, int level) {
  if (level <= 0) return false;
  for (Eigen::Index i = 0; i < x.u().size(); ++i)
    if (!divisible(x.u()(i), level)) return false;
  for (Eigen::Index i = 0; i < x.v().size(); ++i)
    if (!divisible(x.v()(i), level)) return false;
  const RatMat& m = x.m();
  if (!is_integral(m)) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!divisible(m(i, j) - (i == j ? 1 : 0), level)) return false;
  // GSp(Z) also needs an integral inverse, i.e. nu = +-1.
  return x.nu() == 1 || x.nu() == -1;
}

Integer height(const HeisenbergElement<Rat>& w) {
  const Integer hu = height(w.u);
  const Integer hv = height(w.v);
  return hu > hv ? hu : hv;
}

Integer height(const GroupElement<Rat>& x) {
  Integer h = height(x.w_part());
  const Integer hm = height(x.m());
  return h > hm ? h : hm;
}

RatMat matrix_embedding(const GroupElement<Rat>& x) {
  const auto& datum = *x.datum();
  if (datum.u_dim() != 1) throw std::invalid_argument("matrix_embedding: requires r = 1");
  const Eigen::Index n = datum.v_dim();
  RatMat a = RatMat::Identity(n + 2, n + 2);
  const RatMat psi = datum.psi()[0].cast<Rat>();
  const RatVec half_row = psi.transpose() * x.v() / Rat(2);
  a.block(0, 1, 1, n) = half_row.transpose();
  a(0, n + 1) = x.u()(0);
  a.block(1, n + 1, n, 1) = x.v();
  RatMat b = RatMat::Identity(n + 2, n + 2);
  b(0, 0) = x.u_scale();
  b.block(1, 1, n, n) = x.m();
  return a * b;
}

GroupElement<double> to_double(const GroupElement<Rat>& x) {
  auto conv = [](const RatMat& a) {
    Matrix<double> out(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).convert_to<double>();
    return out;
  };
  return GroupElement<double>(x.datum(), conv(x.u()), conv(x.v()), conv(x.m()));
}

}  // namespace mshimura

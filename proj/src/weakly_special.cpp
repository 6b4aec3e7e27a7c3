#include "mshimura/weakly_special.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace mshimura {

namespace {

using C = std::complex<double>;

C to_complex(const GaussRat& z) { return {z.re.convert_to<double>(), z.im.convert_to<double>()}; }

C eval(const GaussPoly& p, C t) {
  C v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + to_complex(*it);
  return v;
}

// All complex roots of p(s) = target by Durand-Kerner.
std::vector<C> roots(const GaussPoly& p, C target) {
  const int d = degree(p);
  std::vector<C> coeff(static_cast<size_t>(d + 1));
  for (int k = 0; k <= d; ++k) coeff[static_cast<size_t>(k)] = to_complex(p[static_cast<size_t>(k)]);
  coeff[0] -= target;
  const C lead = coeff[static_cast<size_t>(d)];
  for (auto& c : coeff) c /= lead;
  auto f = [&](C s) {
    C v = 0;
    for (int k = d; k >= 0; --k) v = v * s + coeff[static_cast<size_t>(k)];
    return v;
  };
  double radius = 1;
  for (int k = 0; k < d; ++k) radius = std::max(radius, 1 + std::abs(coeff[static_cast<size_t>(k)]));
  std::vector<C> z(static_cast<size_t>(d));
  for (int k = 0; k < d; ++k) z[static_cast<size_t>(k)] = radius * std::polar(1.0, 0.4 + 2 * M_PI * k / d);
  for (int iter = 0; iter < 500; ++iter) {
    double change = 0;
    for (size_t k = 0; k < z.size(); ++k) {
      C denom = 1;
      for (size_t j = 0; j < z.size(); ++j)
        if (j != k) denom *= z[k] - z[j];
      if (denom == C(0)) denom = 1e-300;
      const C step = f(z[k]) / denom;
      z[k] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * radius) break;
  }
  return z;
}

}  // namespace

TranslationStabilizer::TranslationStabilizer(const ParamCurve& curve) : curve_(curve), exact_(curve.is_graph_form()) {
  if (!exact_) return;
  std::vector<GaussRat> dir;
  for (const auto& p : curve.components()) {
    if (degree(p) > 1) return;
    dir.push_back(p.size() > 1 ? p[1] : GaussRat(0));
  }
  direction_ = std::move(dir);
}

bool TranslationStabilizer::contains(const std::vector<GaussRat>& b) const {
  if (b.size() != curve_.dimension()) throw std::invalid_argument("TranslationStabilizer: dimension mismatch");
  if (!exact_) return numeric_contains(b);
  const GaussRat& a = b.front();
  if (curve_.parameter() == Parameter::Real && a.im != 0) return false;
  for (size_t i = 0; i < b.size(); ++i) {
    GaussPoly moved = curve_.components()[i];
    if (moved.empty()) moved.push_back(GaussRat(0));
    moved[0] = moved[0] + b[i];
    if (trimmed(shift(curve_.components()[i], a)) != trimmed(moved)) return false;
  }
  return true;
}

bool TranslationStabilizer::contains(const LatticeVector& gamma) const {
  return contains(lattice_translation(curve_, gamma));
}

bool TranslationStabilizer::numeric_contains(const std::vector<GaussRat>& b) const {
  // Every sample point moved by b must lie on the curve again.
  const auto& comps = curve_.components();
  size_t pivot = 0;
  for (size_t i = 0; i < comps.size(); ++i)
    if (degree(comps[i]) > degree(comps[pivot])) pivot = i;
  const bool real = curve_.parameter() == Parameter::Real;
  for (int j = 0; j < 9; ++j) {
    const C t = real ? C(-1.7 + 0.43 * j, 0) : std::polar(0.3 + 0.29 * j, 0.9 + 2.1 * j);
    std::vector<C> target;
    for (size_t i = 0; i < comps.size(); ++i) target.push_back(eval(comps[i], t) + to_complex(b[i]));
    bool found = false;
    for (const C& s : roots(comps[pivot], target[pivot])) {
      double scale = 1 + std::abs(s);
      if (real && std::abs(s.imag()) > 1e-7 * scale) continue;
      const C sr = real ? C(s.real(), 0) : s;
      bool ok = true;
      for (size_t i = 0; i < comps.size() && ok; ++i)
        ok = std::abs(eval(comps[i], sr) - target[i]) <= 1e-7 * (1 + std::abs(target[i]));
      if (ok) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

TranslationStabilizer translation_stabilizer(const ParamCurve& curve) { return TranslationStabilizer(curve); }

std::vector<GaussRat> lattice_translation(const ParamCurve& curve, const LatticeVector& gamma) {
  if (gamma.size() != curve.observation_dim()) throw std::invalid_argument("lattice_translation: dimension mismatch");
  std::vector<GaussRat> b;
  for (size_t i = 0; i < curve.dimension(); ++i) {
    if (curve.ambient() == Ambient::Abelian)
      b.emplace_back(Rat(gamma[2 * i]), Rat(gamma[2 * i + 1]));
    else
      b.emplace_back(Rat(gamma[i]));
  }
  return b;
}

// ---------------------------------------------------------------------------

Lattice smallest_subtorus(const MonodromyData& data) {
  for (const auto& g : data.generators)
    if (g.size() != data.dim) throw std::invalid_argument("smallest_subtorus: generator dimension mismatch");
  return saturate(Lattice::from_generators(data.generators, data.dim));
}

namespace {

void check_complex_structure(const RatMat& J, Eigen::Index n) {
  if (J.rows() != n || J.cols() != n || n % 2 != 0) throw std::invalid_argument("complex structure: shape mismatch");
  const RatMat sq = J * J;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (sq(i, j) != (i == j ? Rat(-1) : Rat(0))) throw std::invalid_argument("complex structure: J^2 != -1");
}

RatMat stack(const std::vector<RatVec>& rows, Eigen::Index n) {
  RatMat m(static_cast<Eigen::Index>(rows.size()), n);
  for (size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return m;
}

}  // namespace

Lattice smallest_subabelian(const MonodromyData& data, const RatMat& J) {
  check_complex_structure(J, data.dim);
  std::vector<RatVec> rows;
  for (const auto& g : data.generators) {
    if (g.size() != data.dim) throw std::invalid_argument("smallest_subabelian: generator dimension mismatch");
    rows.push_back(to_rational(g));
  }
  RatMat span = row_space_basis(stack(rows, data.dim));
  for (;;) {
    RatMat both(2 * span.rows(), data.dim);
    both << span, span * J.transpose();
    RatMat next = row_space_basis(both);
    if (next.rows() == span.rows()) break;
    span = std::move(next);
  }
  return saturated_span(span, data.dim);
}

RatMat standard_complex_structure(int g) {
  if (g < 0) throw std::invalid_argument("standard_complex_structure: negative genus");
  RatMat J = RatMat::Zero(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    J(i, g + i) = -1;
    J(g + i, i) = 1;
  }
  return J;
}

// ---------------------------------------------------------------------------

namespace {

void check_candidate(const WeaklySpecialCandidate& c) {
  if (!c.datum) throw std::invalid_argument("candidate: null datum");
  const Eigen::Index r = c.datum->u_dim(), n = c.datum->v_dim();
  for (const auto& w : c.w0)
    if (w.size() != r + n) throw std::invalid_argument("candidate: W0 generator outside U + V");
  if (c.z_u.size() != r || c.z_v.size() != n) throw std::invalid_argument("candidate: base point shape mismatch");
  if (c.J.size() != 0) check_complex_structure(c.J, n);
}

}  // namespace

RatMat candidate_u0(const WeaklySpecialCandidate& c) {
  check_candidate(c);
  const Eigen::Index r = c.datum->u_dim(), n = c.datum->v_dim();
  if (c.w0.empty()) return RatMat(0, r);
  const RatMat g = stack(c.w0, r + n);
  // Combinations of the generators with vanishing V-part.
  const RatMat coeffs = nullspace(RatMat(g.rightCols(n).transpose()));
  if (coeffs.rows() == 0) return RatMat(0, r);
  return row_space_basis(RatMat(coeffs * g.leftCols(r)));
}

RatMat candidate_v0(const WeaklySpecialCandidate& c) {
  check_candidate(c);
  const Eigen::Index r = c.datum->u_dim(), n = c.datum->v_dim();
  if (c.w0.empty()) return RatMat(0, n);
  return row_space_basis(RatMat(stack(c.w0, r + n).rightCols(n)));
}

Verdict is_weakly_special_fiber(const WeaklySpecialCandidate& c) {
  const RatMat u0 = candidate_u0(c), v0 = candidate_v0(c);
  const RatMat J = c.J.size() != 0 ? c.J : standard_complex_structure(c.datum->genus());
  std::vector<std::string> failed;
  for (Eigen::Index i = 0; i < v0.rows(); ++i)
    if (!in_row_space(v0, RatVec(J * v0.row(i).transpose()))) {
      failed.push_back("V0 is not J-stable");
      break;
    }
  for (Eigen::Index i = 0; i < v0.rows(); ++i) {
    const RatVec pairing = c.datum->pair<Rat>(RatVec(v0.row(i).transpose()), c.z_v);
    const bool zero = all_zero(pairing);
    if (!zero && (u0.rows() == 0 || !in_row_space(u0, pairing))) {
      failed.push_back(u0.rows() == 0 ? "Psi(V0, z_V) != 0" : "Psi(V0, z_V) not in U0");
      break;
    }
  }
  Verdict v;
  v.weakly_special = failed.empty();
  if (failed.empty()) {
    v.reason = "weakly special";
  } else {
    for (size_t i = 0; i < failed.size(); ++i) v.reason += (i ? "; " : "") + failed[i];
  }
  return v;
}

bool half_psi_integrality(const SymplecticDatum& datum, const std::vector<RatVec>& generators, const RatVec& z_v,
                          const Lattice& gamma_u) {
  if (z_v.size() != datum.v_dim() || gamma_u.ambient_dim() != datum.u_dim())
    throw std::invalid_argument("half_psi_integrality: shape mismatch");
  for (const auto& g : generators) {
    if (g.size() != datum.v_dim()) throw std::invalid_argument("half_psi_integrality: shape mismatch");
    if (!gamma_u.contains(RatVec(datum.pair<Rat>(g, z_v) / Rat(2)))) return false;
  }
  return true;
}

}  // namespace mshimura

#include "local_solver.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>

namespace mshimura::detail {

namespace {

constexpr std::uint64_t kPrime = 2147483647;  // 2^31 - 1

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) { return a * b % kPrime; }

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a))
    if (e & 1) r = mulmod(r, a);
  return r;
}

std::optional<std::uint64_t> residue(const Rat& q) {
  const mpq_srcptr r = q.backend().data();
  const std::uint64_t n = mpz_fdiv_ui(mpq_numref(r), kPrime), d = mpz_fdiv_ui(mpq_denref(r), kPrime);
  if (d == 0) return std::nullopt;
  return mulmod(n, powmod(d, kPrime - 2));
}

using ModPoly = std::vector<std::uint64_t>;

void mtrim(ModPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int mod_gcd_degree(ModPoly a, ModPoly b) {
  mtrim(a);
  mtrim(b);
  while (!b.empty()) {
    const std::uint64_t inv = powmod(b.back(), kPrime - 2);
    while (a.size() >= b.size()) {
      const std::uint64_t f = mulmod(a.back(), inv);
      const size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) a[i + shift] = (a[i + shift] + kPrime - mulmod(f, b[i])) % kPrime;
      mtrim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}

// p(x, t) (in_x) or p(t, y) as a polynomial in the free variable mod kPrime;
// nullopt if a coefficient or the leading coefficient degenerates.
std::optional<ModPoly> specialize(const Poly2& p, bool in_x, std::uint64_t t) {
  const int n = in_x ? p.deg_x() : p.deg_y(), m = in_x ? p.deg_y() : p.deg_x();
  ModPoly out(static_cast<size_t>(n + 1), 0);
  for (int i = 0; i <= n; ++i) {
    std::uint64_t acc = 0;
    for (int j = m; j >= 0; --j) {
      const auto r = residue(in_x ? p.coeff(i, j) : p.coeff(j, i));
      if (!r) return std::nullopt;
      acc = (mulmod(acc, t) + *r) % kPrime;
    }
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

// False only when p and q certainly have no common factor.
bool may_share_factor(const Poly2& p, const Poly2& q) {
  for (bool in_x : {true, false}) {
    const std::uint64_t t = in_x ? 1234577 : 7654337;
    const auto a = specialize(p, in_x, t), b = specialize(q, in_x, t);
    if (!a || !b) return true;
    const int da = (in_x ? p.deg_x() : p.deg_y()), db = (in_x ? q.deg_x() : q.deg_y());
    ModPoly ta = *a, tb = *b;
    mtrim(ta);
    mtrim(tb);
    // A drop in degree can hide a factor; stay conservative.
    if (static_cast<int>(ta.size()) - 1 != da || static_cast<int>(tb.size()) - 1 != db) return true;
    if (mod_gcd_degree(ta, tb) > 0) return true;
  }
  return false;
}

}  // namespace

std::optional<SharedFactor> shared_factor(const Poly2& a, const Poly2& b) {
  if (a.is_zero() || b.is_zero()) return std::nullopt;
  if (!may_share_factor(a, b)) return std::nullopt;
  const Poly2 h = gcd(a, b);
  if (h.total_degree() < 1) return std::nullopt;
  return SharedFactor{h, *divide_exact(a, h), *divide_exact(b, h)};
}

bool factor_excludes(const SharedFactor& f, bool strict_a, bool strict_b, const Box& box) {
  // With g_a > 0 (say), h and p are non-zero of one sign and q takes that
  // sign or vanishes when g_b is closed.
  const Interval h = f.h.enclose(box.x0, box.y0, box.hx, box.hy);
  const Interval p = f.p.enclose(box.x0, box.y0, box.hx, box.hy);
  const Interval q = f.q.enclose(box.x0, box.y0, box.hx, box.hy);
  auto never_positive = [](const Interval& e, bool strict) { return strict ? e.hi <= 0 : e.hi < 0; };
  auto never_negative = [](const Interval& e, bool strict) { return strict ? e.lo >= 0 : e.lo > 0; };
  const bool plus_dead = h.hi <= 0 || never_positive(p, strict_a) || never_positive(q, strict_b);
  const bool minus_dead = h.lo >= 0 || never_negative(p, strict_a) || never_negative(q, strict_b);
  return plus_dead && minus_dead;
}

Rat rationalize(double v, double tol) {
  const double scale = std::max(1.0, std::abs(v));
  double rest = v;
  Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int i = 0; i < 40; ++i) {
    const double a = std::floor(rest);
    if (std::abs(a) > 1e15) break;
    const Integer ai(static_cast<long long>(a));
    const Integer h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > 1000000) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double approx = h1.convert_to<double>() / k1.convert_to<double>();
    if (std::abs(approx - v) <= tol * scale) return Rat(h1, k1);
    const double frac = rest - a;
    if (frac == 0) break;
    rest = 1.0 / frac;
  }
  return Rat(v);
}

LocalSolver::LocalSolver(std::vector<PolyConstraint> cons, bool planar, int depth, int blowups, double reach,
                         long budget)
    : LocalSolver(std::move(cons), planar, depth, blowups, reach, std::make_shared<long>(budget)) {}

LocalSolver::LocalSolver(std::vector<PolyConstraint> cons, bool planar, int depth, int blowups, double reach,
                         std::shared_ptr<long> budget)
    : cons_(std::move(cons)),
      planar_(planar),
      depth_(depth),
      blowups_(blowups),
      reach_(reach),
      budget_(std::move(budget)) {
  for (const auto& c : cons_) {
    dx_.push_back(c.g.partial_x());
    dy_.push_back(planar_ ? c.g.partial_y() : Poly2());
  }
}

Feasibility LocalSolver::solve(const Box& box) { return node(box, 0); }

bool LocalSolver::known_infeasible(const Box& box) const {
  for (const auto& s : cleared_)
    if (std::abs(box.x0 - s.x) + box.hx < s.r && std::abs(box.y0 - s.y) + box.hy < s.r) return true;
  return false;
}

std::vector<Box> LocalSolver::children(const Box& b) const {
  const double hx = b.hx / 2, hy = b.hy / 2;
  if (!planar_) return {{b.x0 - hx, 0, hx, 0}, {b.x0 + hx, 0, hx, 0}};
  return {{b.x0 - hx, b.y0 - hy, hx, hy},
          {b.x0 + hx, b.y0 - hy, hx, hy},
          {b.x0 - hx, b.y0 + hy, hx, hy},
          {b.x0 + hx, b.y0 + hy, hx, hy}};
}

bool LocalSolver::certified(double x, double y) const {
  for (const auto& c : cons_) {
    double err;
    const double v = c.g.eval(x, y, &err);
    if (c.strict ? !(v - err > 0) : !(v - err >= 0)) return false;
  }
  return true;
}

namespace {

// Floating-point screen before exact evaluation at a rational point: the
// sign of g there is clearly `sign` (1 or -1), or g is clearly non-zero
// (sign 0).
bool clearly(const Poly2& g, double x, double y, int sign) {
  double e = 0;
  const double v = g.eval(x, y, &e);
  const double margin = 1e6 * e + 1e-9;
  return sign == 0 ? std::abs(v) > margin : sign * v > margin;
}

}  // namespace

bool LocalSolver::exactly_feasible(const Rat& x, const Rat& y) const {
  const double dx = x.convert_to<double>(), dy = y.convert_to<double>();
  for (const auto& c : cons_)
    if (clearly(c.g, dx, dy, -1)) return false;
  for (const auto& c : cons_) {
    const Rat v = c.g.eval(x, y);
    if (c.strict ? !(v > 0) : !(v >= 0)) return false;
  }
  return true;
}

std::optional<Feasibility> LocalSolver::screen(const Box& box, std::vector<size_t>& active) {
  active.clear();
  for (size_t k = 0; k < cons_.size(); ++k) {
    const Interval e = cons_[k].g.enclose(box.x0, box.y0, box.hx, box.hy);
    if (cons_[k].strict ? e.hi <= 0 : e.hi < 0) return Feasibility::Infeasible;
    if (cons_[k].strict ? !(e.lo > 0) : !(e.lo >= 0)) active.push_back(k);
  }
  if (active.empty() || certified(box.x0, box.y0)) return Feasibility::Feasible;
  for (size_t i = 0; i < active.size(); ++i)
    for (size_t j = i + 1; j < active.size(); ++j) {
      const size_t a = active[i], b = active[j];
      if (!cons_[a].strict && !cons_[b].strict) continue;
      auto it = factors_.find({a, b});
      if (it == factors_.end()) it = factors_.emplace(std::make_pair(a, b), shared_factor(cons_[a].g, cons_[b].g)).first;
      if (it->second && factor_excludes(*it->second, cons_[a].strict, cons_[b].strict, box))
        return Feasibility::Infeasible;
    }
  return std::nullopt;
}

Feasibility LocalSolver::node(const Box& box, int depth) {
  if (--*budget_ < 0) return Feasibility::Unknown;
  if (known_infeasible(box)) return Feasibility::Infeasible;
  std::vector<size_t> active;
  if (auto f = screen(box, active)) return *f;
  if (depth >= depth_) {
    if (derive(box, active))
      if (auto f = screen(box, active)) return *f;
    return blowups_ > 0 ? blow_up(box, active) : Feasibility::Unknown;
  }
  bool unknown = false;
  for (const Box& child : children(box)) {
    const Feasibility f = node(child, depth + 1);
    if (f == Feasibility::Feasible) return f;
    unknown = unknown || f == Feasibility::Unknown;
  }
  return unknown ? Feasibility::Unknown : Feasibility::Infeasible;
}

bool LocalSolver::derive(const Box& box, const std::vector<size_t>& active) {
  // Active constraints whose gradients at the center are positively
  // dependent meet in a corner no direction enters; sum_k lambda_k g_k with
  // lambda_k >= 0 is implied and often vanishes to higher order there.
  if (cons_.size() >= kMaxConstraints) return false;
  std::vector<std::array<double, 2>> grad;
  for (size_t k : active) {
    grad.push_back({dx_[k].eval(box.x0, box.y0, nullptr), planar_ ? dy_[k].eval(box.x0, box.y0, nullptr) : 0.0});
    const double n = std::hypot(grad.back()[0], grad.back()[1]);
    if (n > 0) grad.back() = {grad.back()[0] / n, grad.back()[1] / n};
  }
  auto cross = [](const std::array<double, 2>& u, const std::array<double, 2>& v) { return u[0] * v[1] - u[1] * v[0]; };
  std::vector<std::vector<std::pair<size_t, double>>> combos;
  for (size_t i = 0; i < active.size(); ++i)
    for (size_t j = i + 1; j < active.size(); ++j) {
      const double dot = grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1];
      if (dot < -0.999) combos.push_back({{i, 1.0}, {j, 1.0}});
      if (!planar_) continue;
      for (size_t l = j + 1; l < active.size(); ++l) {
        const double a = cross(grad[j], grad[l]), b = cross(grad[l], grad[i]), c = cross(grad[i], grad[j]);
        const double m = std::max({std::abs(a), std::abs(b), std::abs(c)});
        if (m < 1e-6) continue;
        const double sgn = a + b + c > 0 ? 1 : -1;
        if (sgn * a > 1e-3 * m && sgn * b > 1e-3 * m && sgn * c > 1e-3 * m)
          combos.push_back({{i, sgn * a / m}, {j, sgn * b / m}, {l, sgn * c / m}});
      }
    }
  bool added = false;
  for (const auto& combo : combos) {
    if (cons_.size() >= kMaxConstraints) break;
    Poly2 sum;
    bool strict = false;
    for (const auto& [idx, w] : combo) {
      // Weights refer to unit gradients; undo the normalization.
      const size_t k = active[idx];
      const double n = std::hypot(dx_[k].eval(box.x0, box.y0, nullptr), planar_ ? dy_[k].eval(box.x0, box.y0, nullptr) : 0.0);
      if (!(n > 0)) continue;
      const Rat lambda = rationalize(w / n, 1e-6);
      if (lambda <= 0) continue;
      sum = sum + lambda * cons_[k].g;
      strict = strict || cons_[k].strict;
    }
    if (sum.is_zero()) continue;
    bool known = false;
    for (const auto& c : cons_) known = known || c.g == sum;
    if (known) continue;
    *budget_ -= 50;
    cons_.push_back({sum, strict});
    dx_.push_back(sum.partial_x());
    dy_.push_back(planar_ ? sum.partial_y() : Poly2());
    added = true;
  }
  return added;
}

std::optional<std::pair<double, double>> LocalSolver::project(size_t k, const Box& box) const {
  double x = box.x0, y = box.y0;
  for (int it = 0; it < 60; ++it) {
    const double v = cons_[k].g.eval(x, y, nullptr);
    const double gx = dx_[k].eval(x, y, nullptr), gy = planar_ ? dy_[k].eval(x, y, nullptr) : 0.0;
    const double n2 = gx * gx + gy * gy;
    if (n2 == 0 || !std::isfinite(n2)) return std::nullopt;
    const double sx = v * gx / n2, sy = v * gy / n2;
    x -= sx;
    y -= sy;
    if (std::abs(sx) + std::abs(sy) <= 1e-16 * (1 + std::abs(x) + std::abs(y))) break;
  }
  if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
  return std::make_pair(x, y);
}

std::optional<std::pair<double, double>> LocalSolver::intersect(size_t a, size_t b, const Box& box) const {
  double x = box.x0, y = box.y0;
  for (int it = 0; it < 60; ++it) {
    const double fa = cons_[a].g.eval(x, y, nullptr), fb = cons_[b].g.eval(x, y, nullptr);
    const double ax = dx_[a].eval(x, y, nullptr), ay = dy_[a].eval(x, y, nullptr);
    const double bx = dx_[b].eval(x, y, nullptr), by = dy_[b].eval(x, y, nullptr);
    const double det = ax * by - ay * bx;
    if (det == 0 || !std::isfinite(det)) return std::nullopt;
    const double sx = (fa * by - fb * ay) / det, sy = (ax * fb - bx * fa) / det;
    x -= sx;
    y -= sy;
    if (std::abs(sx) + std::abs(sy) <= 1e-16 * (1 + std::abs(x) + std::abs(y))) break;
  }
  if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
  return std::make_pair(x, y);
}

namespace {

// g(q + chart) / u^m, where the chart sends (u, w) to
// (sx u, u w) (horizontal) or (u w, sy u) (vertical), or u to sx u.
Poly2 chart_poly(const Poly2& taylor, bool horizontal, int sign, bool planar) {
  int m = -1;
  for (int a = 0; a <= taylor.deg_x(); ++a)
    for (int b = 0; b <= taylor.deg_y(); ++b)
      if (taylor.coeff(a, b) != 0 && (m < 0 || a + b < m)) m = a + b;
  if (m < 0) return Poly2();
  // Target exponents (u, w) and sign flip of each nonzero term.
  struct Entry {
    int u, w;
    bool flip;
    const Rat* c;
  };
  std::vector<Entry> entries;
  int n = 0, ny = 1;
  for (int a = 0; a <= taylor.deg_x(); ++a)
    for (int b = 0; b <= taylor.deg_y(); ++b) {
      const Rat& c = taylor.coeff(a, b);
      if (c == 0) continue;
      Entry e{a + b - m, 0, sign < 0 && a % 2 != 0, &c};
      if (!planar) {
        e.u = a - m;
      } else if (horizontal) {
        e.w = b;
      } else {
        e.w = a;
        e.flip = sign < 0 && b % 2 != 0;
      }
      n = std::max(n, e.u);
      ny = std::max(ny, e.w + 1);
      entries.push_back(e);
    }
  std::vector<Rat> dense(static_cast<size_t>(n + 1) * static_cast<size_t>(ny));
  for (const auto& e : entries)
    dense[static_cast<size_t>(e.u) * static_cast<size_t>(ny) + static_cast<size_t>(e.w)] = e.flip ? Rat(-*e.c) : *e.c;
  return Poly2::from_dense(n, ny - 1, std::move(dense));
}

}  // namespace

Feasibility LocalSolver::blow_up(const Box& box, const std::vector<size_t>& active) {
  // Rational points where active constraints vanish, near the box.
  std::vector<std::pair<double, double>> points;
  const double reach = std::max(reach_, 2 * (box.hx + box.hy));
  auto add = [&](std::optional<std::pair<double, double>> p) {
    if (!p) return;
    if (std::abs(p->first - box.x0) > reach || std::abs(p->second - box.y0) > reach) return;
    points.push_back(*p);
  };
  for (size_t i = 0; i < active.size(); ++i) {
    add(project(active[i], box));
    if (planar_)
      for (size_t j = i + 1; j < active.size(); ++j) add(intersect(active[i], active[j], box));
  }
  Rat qx = rationalize(box.x0), qy = planar_ ? rationalize(box.y0) : Rat(0);
  int best_zeros = -1;
  double best_dist = INFINITY;
  // Tangential intersections converge to about sqrt(eps) only, hence the
  // coarser tolerances.
  for (const auto& p : points)
    for (double tol : {1e-12, 1e-9, 1e-6}) {
      const Rat px = rationalize(p.first, tol), py = planar_ ? rationalize(p.second, tol) : Rat(0);
      if (exactly_feasible(px, py)) return Feasibility::Feasible;
      int zeros = 0;
      const double dx = px.convert_to<double>(), dy = py.convert_to<double>();
      for (size_t k : active) zeros += !clearly(cons_[k].g, dx, dy, 0) && cons_[k].g.eval(px, py) == 0;
      const double dist = std::hypot(p.first - box.x0, p.second - box.y0);
      if (zeros > best_zeros || (zeros == best_zeros && dist < best_dist)) {
        best_zeros = zeros;
        best_dist = dist;
        qx = px;
        qy = py;
      }
    }
  if (best_zeros <= 0) {
    // Nothing vanishes at the candidates: a short rational near the center.
    const double scale = std::max(box.hx, box.hy) * 1e-3;
    qx = rationalize(box.x0, scale / std::max(1.0, std::abs(box.x0)));
    qy = planar_ ? rationalize(box.y0, scale / std::max(1.0, std::abs(box.y0))) : Rat(0);
  }
  if (exactly_feasible(qx, qy)) return Feasibility::Feasible;

  // The charts cover the square of Chebyshev radius rho around q; a power
  // of two so that neighbouring boxes can reuse the result.
  const double dqx = qx.convert_to<double>(), dqy = qy.convert_to<double>();
  const double need = std::max(std::abs(box.x0 - dqx) + box.hx, planar_ ? std::abs(box.y0 - dqy) + box.hy : 0.0);
  const double rho = std::exp2(std::ceil(std::log2(need * (1 + 1e-9) + 1e-300)));

  std::vector<Poly2> taylor;
  for (const auto& c : cons_) taylor.push_back(c.g.shifted(qx, qy));
  struct Chart {
    bool horizontal;
    int sign;
  };
  std::vector<Chart> charts = {{true, 1}, {true, -1}};
  if (planar_) {
    charts.push_back({false, 1});
    charts.push_back({false, -1});
  }
  bool unknown = false;
  for (const Chart& ch : charts) {
    // Exact chart construction is far dearer than a box.
    *budget_ -= 20 * static_cast<long>(cons_.size());
    if (*budget_ < 0) return Feasibility::Unknown;
    std::vector<PolyConstraint> cons;
    cons.push_back({Poly2::x(), true});  // u > 0
    for (size_t k = 0; k < cons_.size(); ++k)
      cons.push_back({chart_poly(taylor[k], ch.horizontal, ch.sign, planar_), cons_[k].strict});
    LocalSolver sub(std::move(cons), planar_, depth_, blowups_ - 1, 4.0, budget_);
    const Box chart_box{rho / 2, 0, rho / 2, planar_ ? 1.0 : 0.0};
    const Feasibility f = sub.solve(chart_box);
    if (f == Feasibility::Feasible) return f;
    unknown = unknown || f == Feasibility::Unknown;
  }
  if (unknown) return Feasibility::Unknown;
  // Slightly shrunk to absorb rounding of q.
  cleared_.push_back({dqx, dqy, rho * (1 - 1e-9)});
  return Feasibility::Infeasible;
}

}  // namespace mshimura::detail

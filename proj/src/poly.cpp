#include "mshimura/poly.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace mshimura {

GaussPoly trimmed(GaussPoly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

int degree(const GaussPoly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (!p[static_cast<size_t>(i)].is_zero()) return i;
  return -1;
}

GaussRat evaluate(const GaussPoly& p, const GaussRat& t) {
  GaussRat out;
  for (auto it = p.rbegin(); it != p.rend(); ++it) out = out * t + *it;
  return out;
}

GaussPoly shift(const GaussPoly& p, const GaussRat& a) {
  // Repeated synthetic division by (t - (-a)) gives the Taylor coefficients at a.
  GaussPoly c = p;
  const size_t n = c.size();
  for (size_t k = 0; k < n; ++k)
    for (size_t i = n - 1; i > k; --i) c[i - 1] = c[i - 1] + a * c[i];
  return trimmed(c);
}

// ---------------------------------------------------------------------------

namespace {

struct Pascal {
  double c[16][16] = {};
  constexpr Pascal() {
    for (int n = 0; n < 16; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k < n ? c[n - 1][k] : 0);
    }
  }
};

constexpr Pascal kPascal;

double binomial(int n, int k) { return kPascal.c[n][k]; }

Rat power(const Rat& x, int e) {
  Rat r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

Integer binomial_exact(int n, int k) {
  Integer r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Poly2::Poly2(int deg_x, int deg_y)
    : dx_(deg_x), dy_(deg_y), c_(static_cast<size_t>(deg_x + 1) * static_cast<size_t>(deg_y + 1)) {}

Poly2 Poly2::constant(const Rat& c) {
  Poly2 p;
  p.set_coeff(0, 0, c);
  return p;
}

Poly2 Poly2::x() {
  Poly2 p(1, 0);
  p.set_coeff(1, 0, 1);
  return p;
}

Poly2 Poly2::y() {
  Poly2 p(0, 1);
  p.set_coeff(0, 1, 1);
  return p;
}

Poly2 Poly2::from_dense(int deg_x, int deg_y, std::vector<Rat> coeffs) {
  if (coeffs.size() != static_cast<size_t>(deg_x + 1) * static_cast<size_t>(deg_y + 1))
    throw std::invalid_argument("Poly2::from_dense: size mismatch");
  Poly2 p;
  p.dx_ = deg_x;
  p.dy_ = deg_y;
  p.c_ = std::move(coeffs);
  p.refresh();
  return p;
}

int Poly2::total_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.a + t.b);
  return d;
}

bool Poly2::is_zero() const { return terms_.empty(); }

void Poly2::set_coeff(int a, int b, const Rat& value) {
  if (a > dx_ || b > dy_) {
    Poly2 bigger(std::max(a, dx_), std::max(b, dy_));
    for (int i = 0; i <= dx_; ++i)
      for (int j = 0; j <= dy_; ++j) bigger.c_[bigger.index(i, j)] = c_[index(i, j)];
    *this = std::move(bigger);
  }
  c_[index(a, b)] = value;
  refresh();
}

void Poly2::refresh() {
  terms_.clear();
  for (int a = 0; a <= dx_; ++a)
    for (int b = 0; b <= dy_; ++b) {
      const Rat& c = c_[index(a, b)];
      // mpq_get_d truncates: within one ulp, covered by the rounding allowance.
      if (c != 0) terms_.push_back({a, b, mpq_get_d(c.backend().data())});
    }
}

Poly2 operator+(const Poly2& p, const Poly2& q) {
  Poly2 r(std::max(p.dx_, q.dx_), std::max(p.dy_, q.dy_));
  for (int a = 0; a <= p.dx_; ++a)
    for (int b = 0; b <= p.dy_; ++b) r.c_[r.index(a, b)] += p.coeff(a, b);
  for (int a = 0; a <= q.dx_; ++a)
    for (int b = 0; b <= q.dy_; ++b) r.c_[r.index(a, b)] += q.coeff(a, b);
  r.refresh();
  return r;
}

Poly2 operator*(const Rat& s, const Poly2& p) {
  Poly2 r = p;
  for (auto& c : r.c_) c *= s;
  r.refresh();
  return r;
}

Poly2 operator-(const Poly2& p, const Poly2& q) { return p + Rat(-1) * q; }

Poly2 operator*(const Poly2& p, const Poly2& q) {
  Poly2 r(p.dx_ + q.dx_, p.dy_ + q.dy_);
  for (int a = 0; a <= p.dx_; ++a)
    for (int b = 0; b <= p.dy_; ++b) {
      const Rat& pc = p.coeff(a, b);
      if (pc == 0) continue;
      for (int c = 0; c <= q.dx_; ++c)
        for (int d = 0; d <= q.dy_; ++d) {
          const Rat& qc = q.coeff(c, d);
          if (qc != 0) r.c_[r.index(a + c, b + d)] += pc * qc;
        }
    }
  r.refresh();
  return r;
}

bool operator==(const Poly2& p, const Poly2& q) {
  const int dx = std::max(p.dx_, q.dx_), dy = std::max(p.dy_, q.dy_);
  static const Rat zero = 0;
  auto at = [](const Poly2& r, int a, int b) -> const Rat& { return a <= r.dx_ && b <= r.dy_ ? r.coeff(a, b) : zero; };
  for (int a = 0; a <= dx; ++a)
    for (int b = 0; b <= dy; ++b)
      if (at(p, a, b) != at(q, a, b)) return false;
  return true;
}

Rat Poly2::eval(const Rat& x, const Rat& y) const {
  Rat out = 0;
  for (int a = dx_; a >= 0; --a) {
    Rat row = 0;
    for (int b = dy_; b >= 0; --b) row = row * y + coeff(a, b);
    out = out * x + row;
  }
  return out;
}

namespace {

// Relative rounding allowance for sums of monomials of degree at most
// `deg`, with generous headroom.
double rounding_factor(int deg) { return 4.0 * (2.0 * deg + 8.0) * DBL_EPSILON; }

}  // namespace

double Poly2::eval(double x, double y, double* error) const {
  if (dx_ >= 16 || dy_ >= 16) throw std::invalid_argument("Poly2::eval: degree too large");
  double px[16], py[16], ax[16], ay[16];
  px[0] = py[0] = ax[0] = ay[0] = 1;
  for (int k = 1; k <= dx_; ++k) {
    px[k] = px[k - 1] * x;
    ax[k] = std::abs(px[k]);
  }
  for (int k = 1; k <= dy_; ++k) {
    py[k] = py[k - 1] * y;
    ay[k] = std::abs(py[k]);
  }
  double value = 0;
  double magnitude = 0;
  for (const auto& t : terms_) {
    value += t.c * (px[t.a] * py[t.b]);
    magnitude += std::abs(t.c) * (ax[t.a] * ay[t.b]);
  }
  if (error) *error = rounding_factor(dx_ + dy_) * magnitude + DBL_MIN;
  return value;
}

Interval Poly2::enclose(double x0, double y0, double hx, double hy) const {
  if (terms_.empty()) return {0, 0};
  // Taylor coefficients t_ij at (x0, y0); small dense arrays.
  const int nx = dx_ + 1, ny = dy_ + 1;
  double px[16], py[16], hxp[16], hyp[16], mx[16], my[16];
  double tay[16 * 16];
  if (nx > 16 || ny > 16) throw std::invalid_argument("Poly2::enclose: degree too large");
  px[0] = py[0] = hxp[0] = hyp[0] = mx[0] = my[0] = 1;
  for (int k = 1; k < nx; ++k) {
    px[k] = px[k - 1] * x0;
    hxp[k] = hxp[k - 1] * hx;
    mx[k] = mx[k - 1] * (std::abs(x0) + hx);
  }
  for (int k = 1; k < ny; ++k) {
    py[k] = py[k - 1] * y0;
    hyp[k] = hyp[k - 1] * hy;
    my[k] = my[k - 1] * (std::abs(y0) + hy);
  }
  std::fill(tay, tay + nx * ny, 0.0);
  double magnitude = 0;
  for (const auto& t : terms_) {
    magnitude += std::abs(t.c) * mx[t.a] * my[t.b];
    for (int i = 0; i <= t.a; ++i) {
      const double cx = t.c * binomial(t.a, i) * px[t.a - i];
      for (int j = 0; j <= t.b; ++j) tay[i * ny + j] += cx * binomial(t.b, j) * py[t.b - j];
    }
  }
  // dx^i dy^j with i, j both even ranges over [0, hx^i hy^j]; otherwise
  // over the symmetric interval.
  double lo = tay[0], hi = tay[0], spread = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      if (i + j == 0) continue;
      const double t = tay[i * ny + j] * hxp[i] * hyp[j];
      spread += std::abs(t);
      if (i % 2 == 0 && j % 2 == 0) {
        (t < 0 ? lo : hi) += t;
      } else {
        lo -= std::abs(t);
        hi += std::abs(t);
      }
    }
  const double slack = rounding_factor(dx_ + dy_) * (magnitude + spread) + DBL_MIN;
  return {lo - slack, hi + slack};
}

Poly2 Poly2::shifted(const Rat& x0, const Rat& y0) const {
  Poly2 r(dx_, dy_);
  for (int a = 0; a <= dx_; ++a)
    for (int b = 0; b <= dy_; ++b) {
      const Rat& c = coeff(a, b);
      if (c == 0) continue;
      for (int i = 0; i <= a; ++i) {
        Rat cx = c * Rat(binomial_exact(a, i)) * power(x0, a - i);
        for (int j = 0; j <= b; ++j)
          r.c_[r.index(i, j)] += cx * Rat(binomial_exact(b, j)) * power(y0, b - j);
      }
    }
  r.refresh();
  return r;
}

Poly2 Poly2::partial_x() const {
  Poly2 r(std::max(dx_ - 1, 0), dy_);
  for (int a = 1; a <= dx_; ++a)
    for (int b = 0; b <= dy_; ++b) r.c_[r.index(a - 1, b)] = coeff(a, b) * a;
  r.refresh();
  return r;
}

Poly2 Poly2::partial_y() const {
  Poly2 r(dx_, std::max(dy_ - 1, 0));
  for (int a = 0; a <= dx_; ++a)
    for (int b = 1; b <= dy_; ++b) r.c_[r.index(a, b - 1)] = coeff(a, b) * b;
  r.refresh();
  return r;
}


// ---------------------------------------------------------------------------
// GCD over Q[y][x] by primitive pseudo-remainder sequences.

namespace {

using UPoly = std::vector<Rat>;  // ascending in y
using BPoly = std::vector<UPoly>;  // ascending in x

void utrim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

UPoly umul(const UPoly& p, const UPoly& q) {
  if (p.empty() || q.empty()) return {};
  UPoly r(p.size() + q.size() - 1, Rat(0));
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  utrim(r);
  return r;
}

UPoly usub(UPoly p, const UPoly& q) {
  if (p.size() < q.size()) p.resize(q.size(), Rat(0));
  for (size_t i = 0; i < q.size(); ++i) p[i] -= q[i];
  utrim(p);
  return p;
}

// Quotient and remainder over Q.
std::pair<UPoly, UPoly> udivmod(UPoly p, const UPoly& q) {
  UPoly quot;
  if (p.size() >= q.size()) quot.assign(p.size() - q.size() + 1, Rat(0));
  while (!p.empty() && p.size() >= q.size()) {
    const size_t shift = p.size() - q.size();
    const Rat f = p.back() / q.back();
    quot[shift] = f;
    for (size_t i = 0; i < q.size(); ++i) p[i + shift] -= f * q[i];
    utrim(p);
  }
  utrim(quot);
  return {quot, p};
}

UPoly umonic(UPoly p) {
  if (p.empty()) return p;
  const Rat lc = p.back();
  for (auto& c : p) c /= lc;
  return p;
}

UPoly ugcd(UPoly a, UPoly b) {
  while (!b.empty()) {
    UPoly r = udivmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return umonic(a);
}

void btrim(BPoly& p) {
  while (!p.empty() && p.back().empty()) p.pop_back();
}

UPoly content(const BPoly& p) {
  UPoly c;
  for (const auto& u : p) c = ugcd(c, u);
  return c;
}

BPoly primitive(BPoly p) {
  const UPoly c = content(p);
  for (auto& u : p) u = udivmod(u, c).first;
  return p;
}

BPoly prem(BPoly a, const BPoly& b) {
  const UPoly& lc = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    const size_t shift = a.size() - b.size();
    const UPoly lead = a.back();
    for (auto& u : a) u = umul(u, lc);
    for (size_t i = 0; i < b.size(); ++i) a[i + shift] = usub(a[i + shift], umul(lead, b[i]));
    btrim(a);
  }
  return a;
}

BPoly to_bpoly(const Poly2& p) {
  BPoly r(static_cast<size_t>(p.deg_x() + 1));
  for (int a = 0; a <= p.deg_x(); ++a) {
    for (int b = 0; b <= p.deg_y(); ++b) r[static_cast<size_t>(a)].push_back(p.coeff(a, b));
    utrim(r[static_cast<size_t>(a)]);
  }
  btrim(r);
  return r;
}

Poly2 from_bpoly(const BPoly& p) {
  if (p.empty()) return Poly2();
  size_t ny = 1;
  for (const auto& u : p) ny = std::max(ny, u.size());
  std::vector<Rat> dense(p.size() * ny);
  for (size_t a = 0; a < p.size(); ++a)
    for (size_t b = 0; b < p[a].size(); ++b) dense[a * ny + b] = p[a][b];
  return Poly2::from_dense(static_cast<int>(p.size()) - 1, static_cast<int>(ny) - 1, std::move(dense));
}

}  // namespace

Poly2 gcd(const Poly2& p, const Poly2& q) {
  BPoly a = to_bpoly(p), b = to_bpoly(q);
  if (a.empty()) return b.empty() ? Poly2() : from_bpoly(b);
  if (b.empty()) return from_bpoly(a);
  const UPoly c = ugcd(content(a), content(b));
  a = primitive(std::move(a));
  b = primitive(std::move(b));
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    BPoly r = prem(a, b);
    a = std::move(b);
    b = r.empty() ? BPoly{} : primitive(std::move(r));
  }
  for (auto& u : a) u = umul(u, c);
  Poly2 g = from_bpoly(a);
  // Normalize: leading lex coefficient 1.
  const UPoly& lead = a.back();
  return Rat(1) / lead.back() * g;
}

std::optional<Poly2> divide_exact(const Poly2& p, const Poly2& q) {
  if (q.is_zero()) return std::nullopt;
  // Lex leading term of q.
  int qa = q.deg_x(), qb = -1;
  for (; qa >= 0 && qb < 0; --qa)
    for (int b = q.deg_y(); b >= 0; --b)
      if (q.coeff(qa, b) != 0) {
        qb = b;
        break;
      }
  ++qa;
  Poly2 rest = p, quot;
  while (!rest.is_zero()) {
    int ra = rest.deg_x(), rb = -1;
    for (; ra >= 0 && rb < 0; --ra)
      for (int b = rest.deg_y(); b >= 0; --b)
        if (rest.coeff(ra, b) != 0) {
          rb = b;
          break;
        }
    ++ra;
    if (ra < qa || rb < qb) return std::nullopt;
    Poly2 term(ra - qa, rb - qb);
    term.set_coeff(ra - qa, rb - qb, rest.coeff(ra, rb) / q.coeff(qa, qb));
    quot = quot + term;
    rest = rest - term * q;
  }
  return quot;
}

}  // namespace mshimura

#include "mshimura/galois.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mshimura {

GuardError::GuardError(const LocalIndexCase& c)
    : std::runtime_error("local index did not stabilize for (p, n, m) = (" + std::to_string(c.p) + ", " +
                         std::to_string(c.n) + ", " + std::to_string(c.m) + ")"),
      which(c) {}

Integer order_of_special_point(const HeisenbergElement<Rat>& w) { return ord(w); }

namespace {

constexpr int kInfinite = std::numeric_limits<int>::max() / 2;

int val(const Rat& x, std::uint64_t p) { return x == 0 ? kInfinite : valuation(x, p); }

// Valuation of 1 - t for a representative 0 <= t < p^K; K when 1 - t
// vanishes modulo p^K.
int val_one_minus(std::uint64_t t, std::uint64_t p, std::uint64_t modulus, int K) {
  std::uint64_t d = (1 + modulus - t) % modulus;
  if (d == 0) return K;
  int v = 0;
  for (; d % p == 0; d /= p) ++v;
  return v;
}

std::uint64_t count_index(const LocalIndexCase& c, int min_v, int min_u, int K) {
  const std::uint64_t modulus = ipow(c.p, K), step = ipow(c.p, c.m);
  std::uint64_t all = 0, sub = 0;
  // t = 1 mod p^m, t a unit.
  for (std::uint64_t t = 1; t < modulus; t += step) {
    if (t % c.p == 0) continue;
    ++all;
    const int v1 = val_one_minus(t, c.p, modulus, K);
    if (v1 + min_v >= c.m && v1 + min_u >= c.m) ++sub;
  }
  if (sub == 0 || all % sub != 0) throw GuardError(c);
  return all / sub;
}

}  // namespace

std::uint64_t local_index_bruteforce(const LocalIndexCase& c, const HeisenbergElement<Rat>& w, int guard) {
  if (c.p < 2 || factorize(c.p).size() != 1 || factorize(c.p)[0].second != 1)
    throw std::invalid_argument("local_index_bruteforce: p must be prime");
  if (c.n < 1 || c.m < 0 || guard < 1) throw std::invalid_argument("local_index_bruteforce: need n >= 1, m >= 0, guard >= 1");
  int min_v = kInfinite, min_all = kInfinite;
  for (Eigen::Index i = 0; i < w.v.size(); ++i) min_v = std::min(min_v, val(w.v(i), c.p));
  // u - t u + Psi(v, v - t v) = (1 - t)(u + Psi(v, v)) for scalar t.
  const RatVec shifted_u = w.u + w.datum->pair<Rat>(w.v, w.v);
  int min_u = kInfinite;
  for (Eigen::Index i = 0; i < shifted_u.size(); ++i) min_u = std::min(min_u, val(shifted_u(i), c.p));
  for (Eigen::Index i = 0; i < w.u.size(); ++i) min_all = std::min(min_all, val(w.u(i), c.p));
  min_all = std::min(min_all, min_v);
  if (min_all != -c.n) throw std::invalid_argument("local_index_bruteforce: w does not have p-adic valuation -n");
  const std::uint64_t first = count_index(c, min_v, min_u, c.n + c.m + guard);
  const std::uint64_t second = count_index(c, min_v, min_u, c.n + c.m + 2 * guard);
  if (first != second) throw GuardError(c);
  return first;
}

std::uint64_t local_index_formula(const LocalIndexCase& c) { return ipow(c.p, c.n - 1) * (c.p - 1); }

std::vector<LocalIndexCase> local_cases(const HeisenbergElement<Rat>& w) {
  const Integer N = ord(w);
  std::vector<LocalIndexCase> out;
  for (const auto& [p, e] : factorize(N.convert_to<std::uint64_t>()))
    out.push_back({p, e, valuation(Integer(w.datum->level()), p)});
  return out;
}

Rat index_lower_bound(const HeisenbergElement<Rat>& w) {
  const Integer N = ord(w);
  return Rat(N) * euler_product(N.convert_to<std::uint64_t>());
}

OrbitBound orbit_bound_factor(std::uint64_t N, double B, double eps) {
  if (N < 1) throw std::invalid_argument("orbit_bound_factor: N must be positive");
  if (!(B > 0 && B < 1) || !(eps > 0 && eps < 1)) throw std::invalid_argument("orbit_bound_factor: B and eps must lie in (0, 1)");
  OrbitBound out;
  const double n = static_cast<double>(N);
  out.ell = std::pow(B, omega(N)) * n * euler_product(N).convert_to<double>();
  out.ratio = out.ell / std::pow(n, 1 - eps);
  return out;
}

SweepSummary bound_sweep(std::uint64_t n_max, double B, double eps, std::vector<SweepRow>* rows) {
  if (n_max < 1) throw std::invalid_argument("bound_sweep: n_max must be positive");
  if (!(B > 0 && B < 1) || !(eps > 0 && eps < 1)) throw std::invalid_argument("bound_sweep: B and eps must lie in (0, 1)");
  // Smallest prime factor sieve.
  std::vector<std::uint32_t> spf(n_max + 1, 0);
  for (std::uint64_t i = 2; i <= n_max; ++i)
    if (spf[i] == 0)
      for (std::uint64_t j = i; j <= n_max; j += i)
        if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
  SweepSummary s;
  s.B = B;
  s.eps = eps;
  s.n_max = n_max;
  s.min_ratio = s.min_b_term = s.min_euler_term = INFINITY;
  if (rows) rows->clear();
  for (std::uint64_t N = 1; N <= n_max; ++N) {
    int w = 0;
    double euler = 1;
    for (std::uint64_t m = N; m > 1;) {
      const std::uint64_t p = spf[m];
      ++w;
      euler *= 1 - 1.0 / static_cast<double>(p);
      while (m % p == 0) m /= p;
    }
    const double n = static_cast<double>(N), ne = std::pow(n, eps), bw = std::pow(B, w);
    const double ell = bw * n * euler, ratio = bw * ne * euler;
    if (ratio < s.min_ratio) {
      s.min_ratio = ratio;
      s.argmin_ratio = N;
    }
    if (bw * ne < s.min_b_term) {
      s.min_b_term = bw * ne;
      s.argmin_b_term = N;
    }
    if (ne * euler < s.min_euler_term) {
      s.min_euler_term = ne * euler;
      s.argmin_euler_term = N;
    }
    if (rows) rows->push_back({N, w, euler, ell, ratio});
  }
  return s;
}

}  // namespace mshimura

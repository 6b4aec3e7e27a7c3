#pragma once

// Order of a special point, local indices |K_T / K_T'| by enumeration of
// p-adic units, the closed-form lower bound and the elementary bound
// functions in N.

#include "mshimura/heisenberg.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mshimura {

/// N(s) = ord(w).
Integer order_of_special_point(const HeisenbergElement<Rat>& w);

/// p prime, n = v_p(ord(w)) >= 1, m = v_p(level) >= 0.
struct LocalIndexCase {
  std::uint64_t p = 2;
  int n = 1;
  int m = 0;
};

class GuardError : public std::runtime_error {
 public:
  GuardError(const LocalIndexCase& c);
  LocalIndexCase which;
};

/// [U_m : U'] where U_m = {t in Z_p^x : t = 1 mod p^m} and U' its subgroup
/// of scalars t with v - t v = 0 and u - t u + Psi(v, v - t v) = 0 mod p^m,
/// by enumeration of units modulo p^(n + m + guard). The count is redone
/// with twice the guard and must agree. Requires max_k -v_p(coordinate)
/// of (u, v) to equal n.
std::uint64_t local_index_bruteforce(const LocalIndexCase& c, const HeisenbergElement<Rat>& w, int guard = 2);

/// p^(n-1) (p - 1).
std::uint64_t local_index_formula(const LocalIndexCase& c);

/// One case per prime dividing ord(w), with m from the level of w's datum.
std::vector<LocalIndexCase> local_cases(const HeisenbergElement<Rat>& w);

/// ord(w) prod_{p | ord(w)} (1 - 1/p).
Rat index_lower_bound(const HeisenbergElement<Rat>& w);

struct OrbitBound {
  /// B^omega(N) N prod_{p | N} (1 - 1/p)
  double ell = 0;
  /// ell / N^(1 - eps)
  double ratio = 0;
};

/// Requires N >= 1, B and eps in (0, 1).
OrbitBound orbit_bound_factor(std::uint64_t N, double B, double eps);

struct SweepRow {
  std::uint64_t N;
  int omega;
  double euler_product;
  double ell;
  double ratio;
};

struct SweepSummary {
  double B = 0;
  double eps = 0;
  std::uint64_t n_max = 0;
  /// Minima over 1 <= N <= n_max with the smallest N attaining each.
  double min_ratio = 0;
  std::uint64_t argmin_ratio = 1;
  double min_b_term = 0;  // B^omega(N) N^eps
  std::uint64_t argmin_b_term = 1;
  double min_euler_term = 0;  // N^eps prod (1 - 1/p)
  std::uint64_t argmin_euler_term = 1;
};

/// Exhaustive sweep; `rows` receives every N when non-null.
SweepSummary bound_sweep(std::uint64_t n_max, double B, double eps, std::vector<SweepRow>* rows = nullptr);

}  // namespace mshimura

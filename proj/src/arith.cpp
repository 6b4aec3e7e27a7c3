#include "mshimura/arith.hpp"

#include <cctype>

namespace mshimura {

Integer height(const Rat& x) {
  Integer a = abs(numerator(x));
  Integer b = denominator(x);
  if (a == 0) return 0;
  return a > b ? a : b;
}

IntMat to_integer(const RatMat& x) {
  IntMat out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (denominator(x(i, j)) != 1)
        throw std::invalid_argument("to_integer: entry " + format_rat(x(i, j)) + " is not integral");
      out(i, j) = numerator(x(i, j));
    }
  return out;
}

IntVec to_integer(const RatVec& x) {
  IntMat m = to_integer(RatMat(x));
  return m.col(0);
}

RatMat to_rational(const IntMat& x) {
  RatMat out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out(i, j) = Rat(x(i, j));
  return out;
}

RatVec to_rational(const IntVec& x) {
  RatVec out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = Rat(x(i));
  return out;
}

IntVec primitive_integer_vector(const RatVec& v) {
  const Integer l = denominator_lcm(v);
  IntVec out(v.size());
  Integer g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(i) = numerator(v(i)) * (l / denominator(v(i)));
    g = gcd(g, out(i));
  }
  if (g > 1)
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) /= g;
  return out;
}

std::pair<RatMat, std::vector<Eigen::Index>> rref(const RatMat& a) {
  RatMat m = a;
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index c = 0; c < m.cols() && row < m.rows(); ++c) {
    Eigen::Index p = row;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.row(row).swap(m.row(p));
    const Rat pivot = m(row, c);
    m.row(row) /= pivot;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, c) == 0) continue;
      const Rat f = m(r, c);
      m.row(r) -= f * m.row(row);
    }
    pivots.push_back(c);
    ++row;
  }
  return {m, pivots};
}

Eigen::Index rank(const RatMat& a) { return static_cast<Eigen::Index>(rref(a).second.size()); }

RatMat nullspace(const RatMat& a) {
  auto [r, pivots] = rref(a);
  const Eigen::Index n = a.cols();
  std::vector<bool> is_pivot(static_cast<size_t>(n), false);
  for (auto c : pivots) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<RatVec> basis;
  for (Eigen::Index free = 0; free < n; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    RatVec v = RatVec::Zero(n);
    v(free) = 1;
    for (size_t k = 0; k < pivots.size(); ++k) v(pivots[k]) = -r(static_cast<Eigen::Index>(k), free);
    basis.push_back(v);
  }
  RatMat out(static_cast<Eigen::Index>(basis.size()), n);
  for (size_t k = 0; k < basis.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = basis[k].transpose();
  return out;
}

RatMat row_space_basis(const RatMat& a) {
  auto [r, pivots] = rref(a);
  return r.topRows(static_cast<Eigen::Index>(pivots.size()));
}

bool in_row_space(const RatMat& a, const RatVec& v) {
  if (all_zero(v)) return true;
  RatMat stacked(a.rows() + 1, v.size());
  stacked.topRows(a.rows()) = a;
  stacked.row(a.rows()) = v.transpose();
  return rank(stacked) == rank(a);
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int omega(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("omega: argument must be positive");
  return static_cast<int>(factorize(m).size());
}

Rat euler_product(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("euler_product: argument must be positive");
  Rat out = 1;
  for (auto [p, e] : factorize(m)) out *= Rat(Integer(p - 1), Integer(p));
  return out;
}

int valuation(const Integer& x, std::uint64_t p) {
  if (x == 0) throw std::invalid_argument("valuation: zero has infinite valuation");
  Integer y = abs(x);
  int v = 0;
  while (y % p == 0) {
    y /= p;
    ++v;
  }
  return v;
}

int valuation(const Rat& x, std::uint64_t p) {
  return valuation(Integer(numerator(x)), p) - valuation(Integer(denominator(x)), p);
}

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rat parse_rat(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto slash = s.find('/');
  const std::string_view num = s.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  Integer n(std::string{num});
  Integer d(std::string{den});
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  if (negative) n = -n;
  return Rat(n, d);
}

std::string format_rat(const Rat& x) { return numerator(x).str() + "/" + denominator(x).str(); }

}  // namespace mshimura

// One PASS/FAIL line per acceptance criterion. Exit status is the number
// of failed criteria.

#include "mshimura/galois.hpp"
#include "mshimura/growth.hpp"
#include "mshimura/harvest.hpp"
#include "mshimura/heisenberg.hpp"
#include "mshimura/lattice.hpp"
#include "mshimura/theta.hpp"
#include "mshimura/uniformization.hpp"
#include "mshimura/volume.hpp"
#include "mshimura/weakly_special.hpp"

#include "generators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

using namespace mshimura;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s < limit_s;
  const bool pass = out.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s %d %s: %s; %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", id, name, out.detail.c_str(), s, limit_s,
              in_time ? "" : " over time");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

GaussPoly poly(std::initializer_list<GaussRat> cs) { return GaussPoly(cs); }

const std::vector<long long> kSchedule{8, 16, 32, 64, 128};

Outcome counting_growth(Ambient ambient, double min_slope, double max_slope, bool strict) {
  const ParamCurve curve = ParamCurve::graph(ambient, Parameter::Complex, {poly({0, 0, 1})});
  std::vector<ThetaRecord> records;
  double worst = 0;
  for (long long M : kSchedule) {
    const ThetaRecord r = theta_count(curve, M).record;
    worst = std::max(worst, r.count ? static_cast<double>(r.uncertain) / static_cast<double>(r.count) : 1.0);
    records.push_back(r);
  }
  const GrowthFit fit = fit_growth(records);
  Outcome o;
  o.ok = fit.slope >= min_slope && fit.slope <= max_slope && (!strict || (fit.r2 >= 0.98 && worst <= 0.05));
  o.detail = "slope " + fmt("%.3f", fit.slope) + ", r2 " + fmt("%.4f", fit.r2) + ", max uncertain/count " + fmt("%.4f", worst) +
             ", counts";
  for (const auto& r : records) o.detail += " " + std::to_string(r.count);
  return o;
}

// Exact w and p group law checks.
Outcome group_algebra() {
  gen::Gen g;
  long checks = 0, failed = 0;
  auto check = [&](bool b) {
    ++checks;
    failed += b ? 0 : 1;
  };
  for (int i = 0; i < 250; ++i) {
    const int genus = 1 + i % 2;
    const auto d = SymplecticDatum::standard(genus, 4);
    const auto a = g.w_element(d), b = g.w_element(d), c = g.w_element(d);
    check(w_mul(w_mul(a, b), c) == w_mul(a, w_mul(b, c)));
    check(w_mul(a, w_inverse(a)) == HeisenbergElement<Rat>::identity(d));
    const auto comm = commutator(a, b);
    check(comm.u == d->pair(a.v, b.v) && all_zero(comm.v));

    const auto x = g.p_element(d), y = g.p_element(d), z = g.p_element(d);
    check(p_mul(p_mul(x, y), z) == p_mul(x, p_mul(y, z)));
    check(p_mul(x, p_inverse(x)) == GroupElement<Rat>::identity(d));
    const auto nx = similitude<Rat>(*d, x.m()), ny = similitude<Rat>(*d, y.m());
    const auto nxy = similitude<Rat>(*d, RatMat(x.m() * y.m()));
    check(nx && ny && nxy && *nxy == *nx * *ny);
  }
  return {failed == 0, std::to_string(checks) + " checks, " + std::to_string(failed) + " failures"};
}

Outcome index_formula() {
  long mismatches = 0, cases = 0;
  std::string first;
  const auto d = SymplecticDatum::standard(1, 4);
  for (std::uint64_t p : {2, 3, 5})
    for (int n = 1; n <= 3; ++n)
      for (int m = 0; m <= 3; ++m) {
        RatVec v = RatVec::Zero(2);
        v(0) = Rat(1) / Rat(ipow(p, n));
        const HeisenbergElement<Rat> w(d, RatVec::Zero(1), v);
        const LocalIndexCase c{p, n, m};
        const std::uint64_t brute = local_index_bruteforce(c, w);
        const std::uint64_t expected = ipow(p, n - 1) * (p - 1);
        ++cases;
        if (brute != expected) {
          ++mismatches;
          if (first.empty())
            first = "(p,n,m)=(" + std::to_string(p) + "," + std::to_string(n) + "," + std::to_string(m) +
                    "): enumerated " + std::to_string(brute) + " vs " + std::to_string(expected);
        }
      }

  gen::Gen g(gen::test_seed() + 2);
  long product_mismatches = 0;
  for (int i = 0; i < 50; ++i) {
    // ord(w) <= 1000 with every prime exponent <= 3.
    std::uint64_t N = 1;
    for (std::uint64_t p : {2, 3, 5, 7}) {
      const int e = static_cast<int>(g.integer(0, 3));
      if (N * ipow(p, e) <= 1000) N *= ipow(p, e);
    }
    const auto dd = SymplecticDatum::standard(1, 4);
    RatVec v(2);
    v(0) = Rat(1) / Rat(N);
    v(1) = g.rat(5, 1);
    const HeisenbergElement<Rat> w(dd, RatVec::Zero(1), v);
    Integer product = 1;
    for (const auto& c : local_cases(w)) product *= local_index_bruteforce(c, w);
    if (Rat(product) != index_lower_bound(w)) ++product_mismatches;
  }
  Outcome o;
  o.ok = mismatches == 0 && product_mismatches == 0;
  o.detail = std::to_string(mismatches) + "/" + std::to_string(cases) + " local mismatches" +
             (first.empty() ? "" : " (first " + first + ")") + ", " + std::to_string(product_mismatches) +
             "/50 product mismatches";
  return o;
}

Outcome volume_growth() {
  const ParamCurve curve = ParamCurve::graph(Ambient::Torus, Parameter::Complex, {poly({0, 0, 1})});
  std::vector<double> xs, full, cut;
  bool converged = true;
  for (long long M : kSchedule) {
    const VolumeResult a = curve_volume(curve, static_cast<double>(M), false, 0.01);
    const VolumeResult b = curve_volume(curve, static_cast<double>(M), true, 0.01);
    converged = converged && a.converged && b.converged;
    xs.push_back(static_cast<double>(M));
    full.push_back(a.value);
    cut.push_back(b.value);
  }
  const double s_full = fit_loglog(xs, full).slope, s_cut = fit_loglog(xs, cut).slope;
  return {converged && s_full >= 1.8 && s_full <= 2.2 && s_cut <= 1.2,
          "untruncated slope " + fmt("%.3f", s_full) + ", truncated slope " + fmt("%.3f", s_cut) +
              (converged ? "" : ", not converged")};
}

// Z^4 ∩ span_R of the complex line {(x, c x)}, by enumeration of the
// integral points of a box containing a reduced basis.
Lattice line_lattice_oracle(long long a, long long b, long long d) {
  const long long K = static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(a * a + b * b + d * d)))) + 1;
  std::vector<IntVec> points;
  for (long long x1 = -K; x1 <= K; ++x1)
    for (long long x2 = -K; x2 <= K; ++x2) {
      // c x = ((a x1 - b x2) + i (a x2 + b x1)) / d
      const long long re = a * x1 - b * x2, im = a * x2 + b * x1;
      if (re % d != 0 || im % d != 0) continue;
      IntVec p(4);
      p << x1, x2, re / d, im / d;
      points.push_back(p);
    }
  return Lattice::from_generators(points, 4);
}

Outcome stabilizer_recovery() {
  gen::Gen g(gen::test_seed() + 6);
  int wrong = 0;
  std::string first;
  for (int i = 0; i < 20; ++i) {
    const long long d = g.integer(1, 3);
    long long a = 0, b = 0;
    while (a == 0 && b == 0) {
      a = g.integer(-3, 3);
      b = g.integer(-3, 3);
    }
    const GaussRat c(Rat(a, d), Rat(b, d));
    const GaussRat e(Rat(g.integer(-2, 2), 2), Rat(g.integer(-2, 2), 2));
    const ParamCurve curve = ParamCurve::graph(Ambient::Abelian, Parameter::Complex, {poly({e, c})});
    const Lattice expected = line_lattice_oracle(a, b, d);
    const long long M = 6;
    const Lattice got = harvest_stabilizer(curve, theta_count(curve, M).gammas);
    if (!(got == expected)) {
      ++wrong;
      if (first.empty()) first = " (first c = " + format_rat(c.re) + " + " + format_rat(c.im) + " i)";
    }
  }
  const ParamCurve parabola = ParamCurve::graph(Ambient::Abelian, Parameter::Complex, {poly({0, 0, 1})});
  const bool zero = harvest_stabilizer(parabola, theta_count(parabola, 8).gammas).is_zero();
  return {wrong == 0 && zero, std::to_string(20 - wrong) + "/20 lines recovered" + first + ", parabola " +
                                  (zero ? "zero lattice" : "nonzero lattice")};
}

// Rational basis of a J-stable subspace of Q^{2g}: random vectors and their
// images under the standard complex structure.
RatMat random_complex_subspace(gen::Gen& g, int genus, int cdim) {
  const RatMat J = standard_complex_structure(genus);
  RatMat rows(2 * cdim, 2 * genus);
  for (int k = 0; k < cdim; ++k) {
    const RatVec x = g.rat_vec(2 * genus, 3, 3);
    rows.row(2 * k) = x.transpose();
    rows.row(2 * k + 1) = (J * x).transpose();
  }
  return row_space_basis(rows);
}

Outcome weakly_special_criterion() {
  int wrong = 0, trues = 0, falses = 0;
  {
    WeaklySpecialCandidate c;
    c.datum = SymplecticDatum::standard(1, 4);
    RatVec e1 = RatVec::Zero(3);
    e1(1) = 1;
    c.w0 = {e1};
    c.z_u = RatVec::Zero(1);
    c.z_v = RatVec::Zero(2);
    c.z_v(1) = 1;
    if (is_weakly_special_fiber(c).weakly_special) ++wrong;
  }
  gen::Gen g(gen::test_seed() + 7);
  for (int i = 0; i < 50; ++i) {
    const int genus = static_cast<int>(g.integer(2, 3));
    const auto d = SymplecticDatum::standard(genus, 4);
    const RatMat V0 = random_complex_subspace(g, genus, static_cast<int>(g.integer(1, genus - 1)));
    // Psi(V0, z) = 0 cuts out the kernel of V0 * S with S the pairing matrix.
    RatMat A(V0.rows(), V0.cols());
    for (Eigen::Index r = 0; r < V0.rows(); ++r)
      for (Eigen::Index k = 0; k < V0.cols(); ++k) {
        RatVec ek = RatVec::Zero(V0.cols());
        ek(k) = 1;
        A(r, k) = d->pair(RatVec(V0.row(r).transpose()), ek)(0);
      }
    const RatMat orth = nullspace(A);
    RatVec z = RatVec::Zero(2 * genus);
    if (i % 2 == 0 && orth.rows() > 0) {
      for (Eigen::Index r = 0; r < orth.rows(); ++r) z += g.rat(3, 3) * RatVec(orth.row(r).transpose());
    } else {
      z = g.rat_vec(2 * genus, 3, 3);
    }
    bool expected = true;
    for (Eigen::Index r = 0; r < V0.rows(); ++r)
      expected = expected && all_zero(d->pair(RatVec(V0.row(r).transpose()), z));
    WeaklySpecialCandidate c;
    c.datum = d;
    for (Eigen::Index r = 0; r < V0.rows(); ++r) {
      RatVec w = RatVec::Zero(1 + 2 * genus);
      w.tail(2 * genus) = V0.row(r).transpose();
      c.w0.push_back(w);
    }
    c.z_u = RatVec::Zero(1);
    c.z_v = z;
    const bool got = is_weakly_special_fiber(c).weakly_special;
    if (got != expected) ++wrong;
    (expected ? trues : falses) += 1;
  }
  return {wrong == 0, "51 cases (" + std::to_string(trues) + " true, " + std::to_string(falses + 1) + " false), " +
                          std::to_string(wrong) + " disagreements with direct Psi evaluation"};
}

Outcome reduction_soundness() {
  gen::Gen g(gen::test_seed() + 8);
  int bad_f = 0, bad_res = 0, bad_h = 0;
  double worst_res = 0;
  const int level = 4;
  for (int i = 0; i < 1000; ++i) {
    const auto d = SymplecticDatum::standard(i % 2, level);
    ComplexVec u(d->u_dim());
    for (Eigen::Index k = 0; k < u.size(); ++k) u(k) = Complex(g.real(-50, 50), g.real(-5, 5));
    RealVec v(d->v_dim());
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = g.real(-1000, 1000);
    std::optional<Complex> tau;
    if (d->genus() == 1) tau = Complex(g.real(-20, 20), std::exp(g.real(std::log(1e-3), std::log(10.0))));
    const DomainPoint x(d, u, v, tau);
    const Reduction r = reduce(x, level);
    if (!in_fundamental_set(r.y)) ++bad_f;
    const double res = distance(act(r.gamma, x), r.y);
    worst_res = std::max(worst_res, res);
    if (!(res <= 1e-9)) ++bad_res;
    // ||x_V|| in the frame where the pure part is already reduced.
    const RealVec moved = to_double(r.gamma).m() * x.v;
    const double norm = moved.size() ? moved.cwiseAbs().maxCoeff() : 0.0;
    if (lattice_height_v(r.gamma, level).convert_to<double>() > 2 * norm / level + 2) ++bad_h;
  }
  return {bad_f == 0 && bad_res == 0 && bad_h == 0,
          "1000 points, outside F " + std::to_string(bad_f) + ", residual failures " + std::to_string(bad_res) +
              " (max " + fmt("%.2e", worst_res) + "), height failures " + std::to_string(bad_h)};
}

Outcome bound_sweep_grid() {
  bool ok = true;
  std::string detail;
  for (double B : {0.3, 0.5, 0.8})
    for (double eps : {0.1, 0.3, 0.5}) {
      const SweepSummary s = bound_sweep(100000, B, eps);
      ok = ok && s.min_b_term > 0 && s.min_euler_term > 0 && std::isfinite(s.min_b_term) &&
           std::isfinite(s.min_euler_term);
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s(%.1f,%.1f): %.3g@%llu %.3g@%llu", detail.empty() ? "" : "; ", B, eps,
                    s.min_b_term, static_cast<unsigned long long>(s.argmin_b_term), s.min_euler_term,
                    static_cast<unsigned long long>(s.argmin_euler_term));
      detail += buf;
    }
  return {ok, "minima of B^omega N^eps and N^eps prod(1-1/p): " + detail};
}

}  // namespace

int main() {
  criterion(1, "group algebra", 5, group_algebra);
  criterion(2, "local index formula", 30, index_formula);
  criterion(3, "abelian counting growth", 60, [] { return counting_growth(Ambient::Abelian, 1.6, 2.4, true); });
  criterion(4, "torus counting growth", 60, [] { return counting_growth(Ambient::Torus, 0.8, 1e9, false); });
  criterion(5, "volume growth", 30, volume_growth);
  criterion(6, "stabilizer recovery", 60, stabilizer_recovery);
  criterion(7, "weakly special criterion", 30, weakly_special_criterion);
  criterion(8, "reduction soundness", 10, reduction_soundness);
  criterion(9, "elementary bound sweep", 30, bound_sweep_grid);
  std::printf("%d criteria failed\n", failures);
  return failures;
}

#include "mshimura/theta.hpp"

#include "local_solver.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace mshimura {

namespace {
constexpr int kMaxCoords = 8;
constexpr long long kMaxBound = 32767;
constexpr int kMaxBaseDepth = 60;
constexpr int kLocalDepth = 4;
constexpr int kBlowups = 3;
constexpr long kLocalBudget = 4000;
constexpr int kFactorDepth = 2;

using Coords = std::array<int, kMaxCoords>;

// Up to eight 16-bit coordinates, offset to be non-negative.
struct Key {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const Key& a, const Key& b) { return a.lo == b.lo && a.hi == b.hi; }
};

struct KeyHash {
  size_t operator()(const Key& k) const {
    std::uint64_t z = k.lo ^ (k.hi * 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return static_cast<size_t>(z ^ (z >> 31));
  }
};

using KeySet = std::unordered_set<Key, KeyHash>;

Key pack(const Coords& c, int dim) {
  Key k;
  for (int j = 0; j < dim; ++j) {
    const std::uint64_t v = static_cast<std::uint64_t>(c[static_cast<size_t>(j)] + 32768);
    if (j < 4)
      k.lo |= v << (16 * j);
    else
      k.hi |= v << (16 * (j - 4));
  }
  return k;
}

LatticeVector unpack_gamma(const Key& k, int dim) {
  LatticeVector g(static_cast<size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    const std::uint64_t word = j < 4 ? k.lo : k.hi;
    const long long v = static_cast<long long>((word >> (16 * (j % 4))) & 0xFFFF) - 32768;
    g[static_cast<size_t>(j)] = -v;  // gamma = -c
  }
  return g;
}

struct Cell {
  double x0, y0, hx, hy;
};

// A constraint sign * p(s) + offset, required > 0 (strict) or >= 0.
struct Constraint {
  int poly;  // index into Engine::polys_
  int sign;
  long long offset;
  bool strict;
};

struct PairKey {
  int pa, sa;
  long long oa;
  int pb, sb;
  long long ob;
  friend bool operator==(const PairKey&, const PairKey&) = default;
};

struct PairKeyHash {
  size_t operator()(const PairKey& k) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (long long v : {static_cast<long long>(k.pa), static_cast<long long>(k.sa), k.oa, static_cast<long long>(k.pb),
                        static_cast<long long>(k.sb), k.ob})
      h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ULL;
    return static_cast<size_t>(h);
  }
};

struct Local {
  KeySet hits;
  KeySet pending;
  std::vector<std::pair<Coords, Cell>> leaves;  // undecided at full depth
  std::unordered_map<PairKey, std::optional<detail::SharedFactor>, PairKeyHash> factors;
};

class Engine {
 public:
  Engine(const ParamCurve& curve, long long M, const ThetaConfig& cfg)
      : complex_(curve.parameter() == Parameter::Complex), M_(M), cfg_(cfg) {
    const auto obs = curve.observation_coordinates();
    dim_ = static_cast<int>(obs.size());
    if (dim_ > kMaxCoords) throw std::invalid_argument("theta_count: at most 8 lattice coordinates supported");
    polys_ = obs;
    const auto norms = norm_constraints(curve, Rat(M));
    n_norm_ = static_cast<int>(norms.size());
    polys_.insert(polys_.end(), norms.begin(), norms.end());
    bound_ = parameter_bound(curve, static_cast<double>(M));
  }

  ThetaRun run() {
    const Cell root{0.0, 0.0, bound_, complex_ ? bound_ : 0.0};
    std::vector<Cell> base;
    subdivide(root, base);

    // Phase A: one sample per base cell.
    auto sampled = parallel(base.size(), [&](size_t begin, size_t end, Local& out) {
      for (size_t i = begin; i < end; ++i) sample_hits(base[i].x0, base[i].y0, out.hits);
    });
    KeySet global;
    for (auto& l : sampled) global.insert(l.hits.begin(), l.hits.end());
    sampled.clear();

    // Phase B: decide every remaining candidate of every base cell.
    auto refined = parallel(base.size(), [&](size_t begin, size_t end, Local& out) {
      for (size_t i = begin; i < end; ++i) {
        std::vector<Coords> cands = candidates(base[i], global);
        if (cands.empty()) continue;
        refine(base[i], std::move(cands), 0, out);
        resolve_leaves(base[i], out);
      }
    });
    KeySet pending;
    for (auto& l : refined) {
      global.insert(l.hits.begin(), l.hits.end());
      pending.insert(l.pending.begin(), l.pending.end());
    }
    ThetaRun run;
    run.record.M = M_;
    for (const Key& k : global) run.gammas.push_back(unpack_gamma(k, dim_));
    for (const Key& k : pending)
      if (!global.count(k)) run.undecided.push_back(unpack_gamma(k, dim_));
    std::sort(run.gammas.begin(), run.gammas.end());
    std::sort(run.undecided.begin(), run.undecided.end());
    run.record.count = run.gammas.size();
    run.record.uncertain = run.undecided.size();
    run.record.low_confidence =
        static_cast<double>(run.record.uncertain) > cfg_.low_confidence_ratio * static_cast<double>(run.record.count);
    return run;
  }

 private:
  struct Bounds {
    std::array<Interval, 3 * kMaxCoords> enc;  // lattice coordinates, then norms
    bool outside = false;
  };

  struct PointEval {
    std::array<double, kMaxCoords> v{};
    std::array<double, kMaxCoords> e{};
    bool in_domain = true;
  };

  template <class Fn>
  std::vector<Local> parallel(size_t n, Fn fn) const {
    unsigned threads = cfg_.threads ? cfg_.threads : std::max(1u, std::thread::hardware_concurrency());
    const size_t chunk = 256;
    const size_t chunks = (n + chunk - 1) / chunk;
    threads = static_cast<unsigned>(std::min<size_t>(threads, std::max<size_t>(chunks, 1)));
    std::vector<Local> locals(threads);
    std::atomic<size_t> next{0};
    auto worker = [&](unsigned w) {
      for (;;) {
        const size_t c = next.fetch_add(1);
        if (c >= chunks) break;
        fn(c * chunk, std::min(n, (c + 1) * chunk), locals[w]);
      }
    };
    if (threads <= 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
      for (auto& t : pool) t.join();
    }
    return locals;
  }

  Bounds bounds(const Cell& c) const {
    Bounds b;
    for (int i = dim_; i < dim_ + n_norm_; ++i) {
      b.enc[static_cast<size_t>(i)] = polys_[static_cast<size_t>(i)].enclose(c.x0, c.y0, c.hx, c.hy);
      if (b.enc[static_cast<size_t>(i)].hi < 0) {
        b.outside = true;
        return b;
      }
    }
    for (int j = 0; j < dim_; ++j) b.enc[static_cast<size_t>(j)] = polys_[static_cast<size_t>(j)].enclose(c.x0, c.y0, c.hx, c.hy);
    return b;
  }

  std::vector<Cell> children(const Cell& c) const {
    const double hx = c.hx / 2, hy = c.hy / 2;
    if (!complex_) return {{c.x0 - hx, 0, hx, 0}, {c.x0 + hx, 0, hx, 0}};
    return {{c.x0 - hx, c.y0 - hy, hx, hy},
            {c.x0 + hx, c.y0 - hy, hx, hy},
            {c.x0 - hx, c.y0 + hy, hx, hy},
            {c.x0 + hx, c.y0 + hy, hx, hy}};
  }

  void subdivide(const Cell& root, std::vector<Cell>& base) const {
    std::vector<std::pair<Cell, int>> stack{{root, 0}};
    while (!stack.empty()) {
      auto [cell, depth] = stack.back();
      stack.pop_back();
      const Bounds b = bounds(cell);
      if (b.outside) continue;
      double width = 0;
      for (int j = 0; j < dim_; ++j) width = std::max(width, b.enc[static_cast<size_t>(j)].width());
      if (width > cfg_.initial_step && depth < kMaxBaseDepth) {
        auto kids = children(cell);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, depth + 1});
      } else {
        base.push_back(cell);
      }
    }
  }

  PointEval evaluate(double x, double y) const {
    PointEval pe;
    for (int i = 0; i < n_norm_; ++i) {
      double err;
      const double h = polys_[static_cast<size_t>(dim_ + i)].eval(x, y, &err);
      if (!(h - err >= 0)) {
        pe.in_domain = false;
        return pe;
      }
    }
    for (int j = 0; j < dim_; ++j) pe.v[static_cast<size_t>(j)] = polys_[static_cast<size_t>(j)].eval(x, y, &pe.e[static_cast<size_t>(j)]);
    return pe;
  }

  bool certified_hit(const PointEval& pe, const Coords& c) const {
    if (!pe.in_domain) return false;
    for (size_t j = 0; j < static_cast<size_t>(dim_); ++j)
      if (!(std::abs(pe.v[j] - c[j]) + pe.e[j] < 1)) return false;
    return true;
  }

  void sample_hits(double x, double y, KeySet& out) const {
    const PointEval pe = evaluate(x, y);
    if (!pe.in_domain) return;
    std::array<int, kMaxCoords> lo{}, hi{};
    for (size_t j = 0; j < static_cast<size_t>(dim_); ++j) {
      lo[j] = static_cast<int>(std::max<double>(std::floor(pe.v[j] - 1 + pe.e[j]) + 1, -static_cast<double>(M_)));
      hi[j] = static_cast<int>(std::min<double>(std::ceil(pe.v[j] + 1 - pe.e[j]) - 1, static_cast<double>(M_)));
      if (lo[j] > hi[j]) return;
    }
    enumerate(lo, hi, [&](const Coords& c) {
      if (certified_hit(pe, c)) out.insert(pack(c, dim_));
    });
  }

  template <class Fn>
  void enumerate(const std::array<int, kMaxCoords>& lo, const std::array<int, kMaxCoords>& hi, Fn fn) const {
    Coords c = lo;
    for (;;) {
      fn(c);
      int j = 0;
      while (j < dim_ && c[static_cast<size_t>(j)] == hi[static_cast<size_t>(j)]) {
        c[static_cast<size_t>(j)] = lo[static_cast<size_t>(j)];
        ++j;
      }
      if (j == dim_) return;
      ++c[static_cast<size_t>(j)];
    }
  }

  // Lattice coordinates c with the open cube around c meeting the enclosure.
  std::vector<Coords> candidates(const Cell& cell, const KeySet& known) const {
    std::vector<Coords> out;
    const Bounds b = bounds(cell);
    if (b.outside) return out;
    std::array<int, kMaxCoords> lo{}, hi{};
    for (size_t j = 0; j < static_cast<size_t>(dim_); ++j) {
      lo[j] = static_cast<int>(std::max<double>(std::floor(b.enc[j].lo - 1) + 1, -static_cast<double>(M_)));
      hi[j] = static_cast<int>(std::min<double>(std::ceil(b.enc[j].hi + 1) - 1, static_cast<double>(M_)));
      if (lo[j] > hi[j]) return out;
    }
    enumerate(lo, hi, [&](const Coords& c) {
      if (!known.count(pack(c, dim_))) out.push_back(c);
    });
    return out;
  }

  bool excluded(const Cell& cell, const Bounds& b, const Coords& c, int depth, Local& out) const {
    for (size_t j = 0; j < static_cast<size_t>(dim_); ++j)
      if (c[j] <= b.enc[j].lo - 1 || c[j] >= b.enc[j].hi + 1) return true;
    if (depth < kFactorDepth) return false;
    std::vector<Constraint> active;
    for (const auto& k : constraints_for(c)) {
      const Interval e = enclosure(k, b);
      if (k.strict ? !(e.lo > 0) : !(e.lo >= 0)) active.push_back(k);
    }
    for (size_t i = 0; i < active.size(); ++i)
      for (size_t j = i + 1; j < active.size(); ++j)
        if ((active[i].strict || active[j].strict) && factor_excludes(cell, active[i], active[j], out)) return true;
    return false;
  }

  Poly2 constraint_poly(const Constraint& k) const {
    return Rat(k.sign) * polys_[static_cast<size_t>(k.poly)] + Poly2::constant(Rat(k.offset));
  }

  bool factor_excludes(const Cell& cell, const Constraint& a, const Constraint& b, Local& out) const {
    const PairKey key{a.poly, a.sign, a.offset, b.poly, b.sign, b.offset};
    auto it = out.factors.find(key);
    if (it == out.factors.end())
      it = out.factors.emplace(key, detail::shared_factor(constraint_poly(a), constraint_poly(b))).first;
    return it->second && detail::factor_excludes(*it->second, a.strict, b.strict, {cell.x0, cell.y0, cell.hx, cell.hy});
  }

  void refine(const Cell& cell, std::vector<Coords> cands, int depth, Local& out) const {
    const Bounds b = bounds(cell);
    if (b.outside) return;
    std::vector<Coords> live;
    for (const auto& c : cands)
      if (!excluded(cell, b, c, depth, out) && !out.hits.count(pack(c, dim_))) live.push_back(c);
    if (live.empty()) return;
    const PointEval pe = evaluate(cell.x0, cell.y0);
    cands.clear();
    for (const auto& c : live) {
      if (certified_hit(pe, c))
        out.hits.insert(pack(c, dim_));
      else
        cands.push_back(c);
    }
    if (cands.empty()) return;
    if (depth >= cfg_.max_depth) {
      for (const auto& c : cands) out.leaves.push_back({c, cell});
      return;
    }
    for (const auto& child : children(cell)) refine(child, cands, depth + 1, out);
  }

  std::vector<Constraint> constraints_for(const Coords& c) const {
    std::vector<Constraint> cons;
    for (int j = 0; j < dim_; ++j) {
      const long long cj = c[static_cast<size_t>(j)];
      cons.push_back({j, +1, 1 - cj, true});  // R_j > c_j - 1
      cons.push_back({j, -1, cj + 1, true});  // R_j < c_j + 1
    }
    for (int i = 0; i < n_norm_; ++i) cons.push_back({dim_ + i, +1, 0, false});
    return cons;
  }

  static Interval enclosure(const Constraint& k, const Bounds& b) {
    const Interval p = b.enc[static_cast<size_t>(k.poly)];
    if (k.sign > 0) return {p.lo + k.offset, p.hi + k.offset};
    return {-p.hi + k.offset, -p.lo + k.offset};
  }

  // Exact local analysis of the full-depth cells left for each candidate
  // of one base cell.
  void resolve_leaves(const Cell& base, Local& out) const {
    std::stable_sort(out.leaves.begin(), out.leaves.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const double reach = 2 * (base.hx + base.hy);
    for (size_t i = 0; i < out.leaves.size();) {
      const Coords c = out.leaves[i].first;
      size_t end = i;
      while (end < out.leaves.size() && out.leaves[end].first == c) ++end;
      const Key key = pack(c, dim_);
      if (!out.hits.count(key)) {
        std::vector<detail::PolyConstraint> cons;
        for (const auto& k : constraints_for(c)) cons.push_back({constraint_poly(k), k.strict});
        detail::LocalSolver solver(std::move(cons), complex_, kLocalDepth, kBlowups, reach, kLocalBudget);
        bool unknown = false;
        for (size_t j = i; j < end; ++j) {
          const Cell& cell = out.leaves[j].second;
          const auto f = solver.solve({cell.x0, cell.y0, cell.hx, cell.hy});
          if (f == detail::Feasibility::Feasible) {
            out.hits.insert(key);
            unknown = false;
            break;
          }
          unknown = unknown || f == detail::Feasibility::Unknown;
        }
        if (unknown) out.pending.insert(key);
      }
      i = end;
    }
    out.leaves.clear();
  }

  bool complex_;
  long long M_;
  ThetaConfig cfg_;
  int dim_ = 0;
  int n_norm_ = 0;
  std::vector<Poly2> polys_;  // lattice coordinates, then norm constraints
  double bound_ = 0;
};

}  // namespace

std::vector<Poly2> norm_constraints(const ParamCurve& curve, const Rat& m) {
  std::vector<Poly2> out;
  if (curve.ambient() == Ambient::Abelian) {
    for (const auto& r : curve.observation_coordinates()) {
      out.push_back(Poly2::constant(m) - r);
      out.push_back(Poly2::constant(m) + r);
    }
  } else {
    for (size_t i = 0; i < curve.dimension(); ++i) {
      const Poly2 re = curve.real_part(i), im = curve.imag_part(i);
      out.push_back(Poly2::constant(m * m) - (re * re + im * im));
    }
  }
  return out;
}

double parameter_bound(const ParamCurve& curve, double M) {
  const double b = curve.ambient() == Ambient::Abelian ? M * std::sqrt(2.0) : M;
  double best = INFINITY;
  for (const auto& p : curve.components()) {
    const int d = degree(p);
    if (d < 1) continue;
    auto modulus = [](const GaussRat& z) { return std::hypot(z.re.convert_to<double>(), z.im.convert_to<double>()); };
    double lower = 0;
    for (int k = 0; k < d; ++k) lower += modulus(p[static_cast<size_t>(k)]);
    best = std::min(best, std::max(1.0, (b + lower) / modulus(p[static_cast<size_t>(d)])));
  }
  return best * (1 + 1e-9) + 1e-9;
}

ThetaRun theta_count(const ParamCurve& curve, long long M, const ThetaConfig& cfg) {
  if (curve.ambient() != Ambient::Torus && curve.ambient() != Ambient::Abelian)
    throw std::invalid_argument("theta_count: ambient must be torus or abelian");
  if (M < 1 || M > kMaxBound) throw std::invalid_argument("theta_count: M must be in [1, 32767]");
  if (!(cfg.initial_step > 0) || cfg.max_depth < 0) throw std::invalid_argument("theta_count: invalid resolution config");
  return Engine(curve, M, cfg).run();
}

}  // namespace mshimura

#pragma once

// Feasibility of {g_k > 0 or g_k >= 0} over a box in the (x, y)-plane, or
// over an interval of the x-axis. Feasible answers come with a certified
// witness, infeasible ones with a proof from enclosures, shared factors
// and directional blow-ups at rational points.

#include "mshimura/poly.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace mshimura::detail {

struct Box {
  double x0, y0, hx, hy;
};

struct PolyConstraint {
  Poly2 g;
  bool strict;
};

enum class Feasibility { Feasible, Infeasible, Unknown };

/// g_a = h * p and g_b = h * q with h non-constant.
struct SharedFactor {
  Poly2 h, p, q;
};

std::optional<SharedFactor> shared_factor(const Poly2& a, const Poly2& b);

/// True when g_a (strict or not) and g_b (strict or not) cannot hold
/// together anywhere in the box; at least one of them must be strict.
bool factor_excludes(const SharedFactor& f, bool strict_a, bool strict_b, const Box& box);

/// First continued-fraction convergent (denominator <= 1e6) within `tol`
/// relative, else the exact binary value.
Rat rationalize(double v, double tol = 1e-10);

class LocalSolver {
 public:
  /// `planar` false means y is ignored and boxes have hy = 0. Blow-up
  /// centers are looked for within `reach` of the box. `budget` caps the
  /// boxes examined over the whole recursion.
  LocalSolver(std::vector<PolyConstraint> cons, bool planar, int depth, int blowups, double reach,
              long budget = 20000);

  /// May be called repeatedly; squares proven infeasible are remembered.
  Feasibility solve(const Box& box);

 private:
  static constexpr size_t kMaxConstraints = 24;

  Feasibility node(const Box& box, int depth);
  std::optional<Feasibility> screen(const Box& box, std::vector<size_t>& active);
  bool derive(const Box& box, const std::vector<size_t>& active);
  Feasibility blow_up(const Box& box, const std::vector<size_t>& active);
  bool certified(double x, double y) const;
  bool exactly_feasible(const Rat& x, const Rat& y) const;
  std::optional<std::pair<double, double>> project(size_t k, const Box& box) const;
  std::optional<std::pair<double, double>> intersect(size_t a, size_t b, const Box& box) const;
  std::vector<Box> children(const Box& box) const;
  LocalSolver(std::vector<PolyConstraint> cons, bool planar, int depth, int blowups, double reach,
              std::shared_ptr<long> budget);
  bool known_infeasible(const Box& box) const;

  struct Square {
    double x, y, r;
  };

  std::vector<PolyConstraint> cons_;
  std::vector<Poly2> dx_;
  std::vector<Poly2> dy_;
  bool planar_;
  int depth_;
  int blowups_;
  double reach_;
  std::vector<Square> cleared_;
  std::map<std::pair<size_t, size_t>, std::optional<SharedFactor>> factors_;
  std::shared_ptr<long> budget_;
};

}  // namespace mshimura::detail

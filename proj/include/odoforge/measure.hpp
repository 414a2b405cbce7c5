#pragma once

// Exact rational measures on the cylinder algebras of the odometer, the
// partition metric with certified truncation error, transversal averaging
// and the capture-defect bounds. Everything here is integer/rational; no
// floating point enters this module.

#include <memory>
#include <vector>

#include "odoforge/odometer.hpp"
#include "odoforge/rational.hpp"
#include "odoforge/resolve.hpp"
#include "odoforge/tower.hpp"
#include "odoforge/windows.hpp"

namespace odoforge {

// A projection-consistent family of weight vectors, one per level 1..depth.
class CylinderFamily {
 public:
  static CylinderFamily uniform(ChainPtr chain, int depth);
  static CylinderFamily point_mass(const OdometerPoint& z, int depth);
  // Weights fixed at `level`; shallower levels by marginalization, deeper
  // levels by uniform refinement.
  static CylinderFamily from_level_weights(ChainPtr chain, int level,
                                           std::vector<Rational> weights,
                                           int depth);

  const ChainPtr& chain() const { return chain_; }
  int depth() const { return static_cast<int>(weights_.size()); }
  const std::vector<Rational>& level_weights(int level) const;
  const Rational& weight(int level, Cell c) const;

  // Nonnegativity, total 1 per level, marginal consistency. Throws.
  void validate() const;

 private:
  friend CylinderFamily average_over_transversal(const CylinderFamily&,
                                                 const TransversalTower&, int);
  ChainPtr chain_;
  std::vector<std::vector<Rational>> weights_;
};

// Partial metric sum plus a tail certificate: the true metric value lies in
// [partial, partial + tail], with tail = 2^(1-level).
struct MetricTruncation {
  int level = 0;
  Rational partial;
  Rational tail;
  Rational upper() const { return partial + tail; }
  bool contains(const Rational& v) const {
    return partial <= v && v <= partial + tail;
  }
};
MetricTruncation metric_distance(const CylinderFamily& a,
                                 const CylinderFamily& b, int level);

// Exact average of the translates of lambda over the level-n transversal.
// Marginals at every level m <= n come out exactly uniform.
CylinderFamily average_over_transversal(const CylinderFamily& lambda,
                                        const TransversalTower& tower, int n);

// Measure bound for the set of points whose stage-k window truncation
// differs from the limit on the n-th transversal window: exact partial
// sum   |D_n| * sum_{k < m <= horizon} ratio_m   plus the certified
// geometric tail. Indices are positions in the plan.
struct DefectBound {
  Rational partial;
  Rational tail;
  Rational total() const { return partial + tail; }
};
DefectBound vkn_bound(const TransversalTower& tower, const ThinningPlan& plan,
                      int n_idx, int k_idx, int horizon);

// Exact fraction of depth-`horizon` base points for which some window cell
// has a witnessed capture stage in (k, horizon]. Dominated by the matching
// vkn_bound total. `max_points` guards the enumeration size.
Rational empirical_unresolved_fraction(const TransversalTower& tower,
                                       const LevelView& view, const Window& w,
                                       int k_idx, int horizon,
                                       long long max_points = 1 << 20);
// Window defaulting to the plan-level transversal D_{levels[n_idx-1]}.
Rational empirical_unresolved_fraction(const TransversalTower& tower,
                                       const ThinningPlan& plan, int n_idx,
                                       int k_idx, int horizon,
                                       long long max_points = 1 << 20);

}  // namespace odoforge

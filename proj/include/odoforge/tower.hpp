#pragma once

// Nested coset-representative towers: D_0 = {1}, D_{n+1} built from a
// transversal of the level-(n+1) kernel times D_n. Carries the factorization
// data needed to re-derive every (v, d) witness on demand.

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "odoforge/chain.hpp"
#include "odoforge/rational.hpp"

namespace odoforge {

class TransversalTower {
 public:
  static TransversalTower build(ChainPtr chain);

  const ChainPtr& chain() const { return chain_; }
  int depth() const { return static_cast<int>(levels_.size()) - 1; }

  const std::vector<GroupWord>& level(int n) const;        // D_n, n in 0..depth
  const std::vector<GroupWord>& kernel_reps(int n) const;  // V_{n-1}, n >= 1
  long long size(int n) const;

  // Side-aware views: the transversal as stored, and its inverses (the
  // translator set actually used for clopen-cell translates under the
  // right-coset convention).
  GroupWord rep(int n, int idx) const;
  GroupWord translator(int n, int idx) const;

  // Index of the D_{n} element whose class at level `level` (>= n+1 works
  // too; classes stay distinct) equals `c`; -1 when no element matches.
  int rep_index_by_class(int n, int level, Cell c) const;

  // Factorization of D_n element idx against level j <= n: w = v * d with
  // v in D_n & Gamma_j and d in D_j (order flipped under the left-coset
  // convention). Derived from the stored build decompositions.
  std::pair<GroupWord, GroupWord> witness(int n, int idx, int j) const;

  // Largest word-metric ball around the identity contained in D_depth.
  int coverage_radius() const;

  nlohmann::json to_json() const;
  static TransversalTower from_json(ChainPtr chain, const nlohmann::json& j);

  // Compose per the chain's side convention: Right -> v*d, Left -> d*v.
  GroupWord compose(const GroupWord& v, const GroupWord& d) const;

 private:
  ChainPtr chain_;
  struct Level {
    std::vector<GroupWord> words;              // D_n
    std::vector<GroupWord> kernel_reps;        // V_{n-1} (empty at n = 0)
    std::vector<std::pair<int, int>> parents;  // (v idx, D_{n-1} idx)
  };
  std::vector<Level> levels_;  // index = n
  // per level n >= 1: class of D_{n-1}[i] at level n -> i
  std::vector<std::unordered_map<Cell, int>> image_of_prev_;

  void build_indexes();
};

struct TowerReport {
  bool nesting_ok = true;        // 1 in D_1 and D_n subset of D_{n+1}
  bool transversal_ok = true;    // class map D_n -> Q_n bijective
  bool factorization_ok = true;  // D_{n+1} = union of v D_j over v in D_{n+1} & Gamma_j
  bool witnesses_ok = true;      // stored decompositions reconstruct
  std::vector<std::string> violations;
  bool pass() const {
    return nesting_ok && transversal_ok && factorization_ok && witnesses_ok;
  }
};

TowerReport verify_tower(const TransversalTower& t);
nlohmann::json tower_report_json(const TowerReport& r);

// Strictly increasing level indices with certified decay ratios:
// ratios[i] = |D_levels[i-1]| / |D_levels[i]| < 2^-(i+2) (0-based i).
struct ThinningPlan {
  std::vector<int> levels;
  std::vector<Rational> ratios;
  size_t length() const { return levels.size(); }
};

// Greedy: pick the least level satisfying each successive strict ratio
// bound. Throws DepthExhausted when not even the first index exists, or when
// `count` entries were requested but fewer are achievable.
ThinningPlan thin_for_p7(const TransversalTower& t,
                         std::optional<int> count = std::nullopt);

// Exact sum of the plan ratios: an upper bound for the measure of the set of
// points whose every coordinate is eventually captured. Always < 1/2 for a
// valid plan.
Rational full_capture_bound(const TransversalTower& t, const ThinningPlan& p);

nlohmann::json plan_to_json(const ThinningPlan& p);
ThinningPlan plan_from_json(const nlohmann::json& j);

}  // namespace odoforge

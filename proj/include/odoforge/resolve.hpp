#pragma once

// Stage calculus: which level first captures a cell at a given base point.
// A cell g is captured at stage j when its class matches base_j * (class of
// some transversal element of the previous stage); the verdict records the
// first such stage and the matching representative.

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "odoforge/odometer.hpp"
#include "odoforge/tower.hpp"
#include "odoforge/windows.hpp"

namespace odoforge {

// A subsequence of chain levels to run the stage calculus through. Stage j
// of a view uses subgroup level levels[j-1] and the transversal of
// levels[j-2] (the full transversal ladder for the identity view).
class LevelView {
 public:
  static LevelView identity(int depth);
  static LevelView of_levels(std::vector<int> levels);
  static LevelView of_plan(const ThinningPlan& plan);

  int stages() const { return static_cast<int>(levels_.size()); }
  int level(int stage) const { return levels_[stage - 1]; }       // subgroup level
  int prev_level(int stage) const;                                // transversal level, 0 at stage 1

 private:
  std::vector<int> levels_;
};

struct CellResolution {
  int stage = 0;      // 0 = unresolved at the view depth
  int rep_index = -1; // index into D_{prev_level(stage)}
  bool resolved() const { return stage > 0; }
  bool operator==(const CellResolution& o) const {
    return stage == o.stage && rep_index == o.rep_index;
  }
};

class Resolver {
 public:
  Resolver(std::shared_ptr<const TransversalTower> tower, LevelView view);

  const TransversalTower& tower() const { return *tower_; }
  const LevelView& view() const { return view_; }
  int stages() const { return view_.stages(); }

  CellResolution resolve(const OdometerPoint& z, const GroupWord& g) const;
  // Same verdict computed from precomputed per-stage classes of g.
  CellResolution resolve_classes(const OdometerPoint& z,
                                 const std::vector<Cell>& g_classes) const;
  std::vector<Cell> stage_classes(const GroupWord& g) const;

  std::vector<CellResolution> resolve_window(const OdometerPoint& z,
                                             const Window& w) const;

  // First capture stage at the basepoint.
  CellResolution min_stage(const GroupWord& g) const;

  GroupWord rep_word(const CellResolution& r) const;

 private:
  std::shared_ptr<const TransversalTower> tower_;
  LevelView view_;
  // per stage: class (at the stage's subgroup level) of each element of the
  // stage's transversal -> its index
  std::vector<std::unordered_map<Cell, int>> stage_images_;
};

struct EquivarianceReport {
  long long cases = 0;
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

// Translation equivariance of the stage layout: the verdict of h at g*z must
// equal the verdict of g^-1 h at z, for every window cell h.
EquivarianceReport stage_equivariance_check(const Resolver& r,
                                            const OdometerPoint& z,
                                            const GroupWord& g,
                                            const Window& w);

}  // namespace odoforge

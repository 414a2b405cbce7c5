#pragma once

// The staged extension machinery: pointed window systems over the odometer,
// the stage-i marker/free maps, orbit-window sampling of the extension,
// bounded recurrence search, clopen recoding and fiber products.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "odoforge/resolve.hpp"
#include "odoforge/toeplitz.hpp"

namespace odoforge {

// Comparison-level data of a point: its base coordinates, and for symbolic
// systems the symbols (with stages) on the comparison window. Two patterns
// "agree at level k" when the base agrees to level k and every comparison
// cell resolved at stage <= k on both sides carries the same symbol.
struct Pattern {
  std::vector<Cell> base;      // levels 1..L
  std::vector<int> symbols;    // empty for the plain odometer system
  std::vector<int> stages;     // stage per comparison cell (0 = unresolved)
  bool operator==(const Pattern& o) const;
};
bool patterns_agree(const Pattern& a, const Pattern& b, int level);

// A presentation of a pointed extension (Y, base map): points are tracked as
// word translates w * y0 of the distinguished point over the basepoint
// fiber. Two flavors ship: the odometer itself, and a stage-marked Toeplitz
// system.
class PointedWindowSystem {
 public:
  static PointedWindowSystem odometer_system(
      std::shared_ptr<const TransversalTower> tower, int depth, int cmp_level);
  static PointedWindowSystem toeplitz_system(
      std::shared_ptr<const TransversalTower> tower, int depth,
      const Marking& marking, const Window& cmp_window, int cmp_level);

  const TransversalTower& tower() const { return *tower_; }
  std::shared_ptr<const TransversalTower> tower_ptr() const { return tower_; }
  int depth() const { return depth_; }
  int cmp_level() const { return cmp_level_; }
  const Resolver& resolver() const { return resolver_; }

  OdometerPoint base(const GroupWord& w) const;  // base image of w * y0
  // The fiber coordinate at a level: the transversal translator whose cell
  // contains the base image (inverse view under the right-coset convention).
  GroupWord fiber_coordinate(int level, const OdometerPoint& base) const;
  Pattern pattern(const GroupWord& w) const;     // pattern of w * y0

 private:
  PointedWindowSystem(std::shared_ptr<const TransversalTower> tower, int depth);

  std::shared_ptr<const TransversalTower> tower_;
  int depth_ = 0;
  int cmp_level_ = 0;
  bool symbolic_ = false;
  Marking marking_ = Marking::cycle("ab");
  Window cmp_window_;
  Resolver resolver_;
};

enum class PhiTag { Marker, Free, Pending };

// Value of the staged map at one cell: a marker naming the transversal
// element whose inverse translate of y0 sits there, a free copy of the point
// recorded at comparison precision, or an explicit not-yet-decided marker.
struct PhiValue {
  PhiTag tag = PhiTag::Pending;
  GroupWord marker_rep;  // Marker only
  Pattern free_pattern;  // Free only
};
bool phi_values_equal(const PhiValue& a, const PhiValue& b, int cmp_level);

// Stage-i map on a window: markers where the stage calculus captures the
// cell by stage <= i, free copies elsewhere.
std::vector<PhiValue> phi_stage(const PointedWindowSystem& sys,
                                const GroupWord& y, int stage_i,
                                const Window& w);
// Depth-honest view: markers on captured cells, Pending where the window
// depth cannot decide the limit value.
std::vector<PhiValue> phi_limit(const PointedWindowSystem& sys,
                                const GroupWord& y, const Window& w);

EquivarianceReport phi_equivariance_check(const PointedWindowSystem& sys,
                                          const GroupWord& y,
                                          const GroupWord& h, int stage_i,
                                          const Window& w);

struct ExtensionSample {
  GroupWord translator;          // h: the sample is h^-1 * psi(y0)
  std::vector<Cell> base_cells;  // base window (all depth levels)
  std::vector<PhiValue> phi;     // on the sample window
};
// Windows of h^-1 psi(y0) for h in H, computed by literal translation at the
// basepoint (cell g reads the value at h*g). With dedup, only windows
// distinct by exact equality survive; agreement checks want the raw family.
std::vector<ExtensionSample> sample_extension_window(
    const PointedWindowSystem& sys, const std::vector<GroupWord>& translators,
    const Window& w, bool dedup = true);

// Every pair of samples with equal base windows must agree on all marker
// cells (and on free-cell base coordinates at window precision).
struct FiberAgreementReport {
  long long groups = 0;
  long long nontrivial_groups = 0;
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};
FiberAgreementReport fiber_agreement_check(
    const PointedWindowSystem& sys, const std::vector<ExtensionSample>& samples,
    const Window& w);

// Searches h with norm <= radius such that h^-1 y0 agrees with y at level k
// and h lies in the level-k subgroup translate determined by y's fiber
// coordinate. NotFound (= nullopt) is a bounded outcome, not a refutation.
std::optional<GroupWord> bounded_minimality_search(
    const PointedWindowSystem& sys, const GroupWord& y, int level_k,
    int radius);

// A clopen partition cell decidable at window precision: returns true/false
// when the sample window shows enough, nullopt otherwise.
struct WindowPredicate {
  std::string name;
  std::function<std::optional<bool>(const ToeplitzWindow&, const GroupWord&)>
      test;
};
WindowPredicate symbol_at_identity_predicate(char symbol);
WindowPredicate base_class_predicate(int level, Cell cls);

struct CodedWindow {
  GroupWord translator;
  Window window;
  std::vector<int> codes;  // 1-based predicate index, kHole where undecided
};
// Sliding recoding of translate windows through a decidable partition.
// Throws PartitionViolation when a decided cell matches zero or >= 2 cells.
std::vector<CodedWindow> clopen_code(
    std::shared_ptr<const TransversalTower> tower, const Marking& marking,
    int depth, const std::vector<GroupWord>& translators, const Window& w,
    const std::vector<WindowPredicate>& partition);

struct FiberPair {
  size_t left = 0;
  size_t right = 0;
};
// Matches two sample families over the same base: each left sample must find
// a right sample with an identical base window. Throws FiberMismatch.
std::vector<FiberPair> fiber_product(const std::vector<ExtensionSample>& a,
                                     const std::vector<ExtensionSample>& b);

}  // namespace odoforge

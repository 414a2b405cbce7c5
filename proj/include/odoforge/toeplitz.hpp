#pragma once

// Toeplitz windows generated by stage marking, their period sets, essential
// period verdicts, layout classes and the factor map back onto the odometer.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "odoforge/resolve.hpp"
#include "odoforge/windows.hpp"

namespace odoforge {

// Assigns a symbol to each capture stage. Cycle mode walks the symbol string
// by stage; Threshold mode emits symbols[0] for stages <= threshold and
// symbols[1] beyond.
class Marking {
 public:
  static Marking cycle(std::string symbols);
  static Marking threshold(int t, std::string symbols);
  // "cycle:ab" | "threshold:1:ab"
  static Marking parse(const std::string& spec);

  char at(int stage) const;
  int symbol_index(int stage) const;
  const std::string& alphabet() const { return alphabet_; }
  std::string spec() const;

 private:
  enum class Mode { Cycle, Threshold } mode_ = Mode::Cycle;
  std::string symbols_;
  std::string alphabet_;  // distinct symbols, in first-use order
  int threshold_ = 0;
};

// A generated window together with everything needed to regenerate
// translates of it exactly.
struct ToeplitzWindow {
  std::shared_ptr<const TransversalTower> tower;
  Marking marking;
  int depth = 0;                // generation depth (stages applied)
  OdometerPoint base;           // base point of the generating translate
  SymbolWindow data;

  const QuotientChain& chain() const { return *tower->chain(); }
};

// Window of the stage-marked array at base point z (default: basepoint).
// Cell g carries marking(stage of g at z), holes where unresolved.
ToeplitzWindow generate_toeplitz(std::shared_ptr<const TransversalTower> tower,
                                 const Marking& marking, int depth,
                                 const Window& w);
ToeplitzWindow generate_toeplitz_at(std::shared_ptr<const TransversalTower> tower,
                                    const Marking& marking, int depth,
                                    const Window& w, const OdometerPoint& z);
// The translate g * x of the basepoint array, windowed on w.
ToeplitzWindow translate_toeplitz(std::shared_ptr<const TransversalTower> tower,
                                  const Marking& marking, int depth,
                                  const Window& w, const GroupWord& g);

// Exhaustive in-window periodicity audit: every resolved cell must agree
// with every window-visible translate of itself by its capture subgroup.
std::vector<std::string> window_periodicity_violations(const ToeplitzWindow& x);

// Exact hole-count bound for the level-N transversal window at a stage
// cutoff k* <= N: the hole fraction is at most the ratio sum over stages in
// (k*, N] plus the exactly-counted fraction unresolved at the full window
// level.
struct HoleDensityReport {
  Rational fraction;
  Rational bound;
  bool pass() const { return fraction <= bound; }
};
HoleDensityReport hole_density_check(std::shared_ptr<const TransversalTower> tower,
                                     const Marking& marking, int window_level,
                                     int stage_cutoff);

// Per-symbol period sets at one level, window-relative: an orbit qualifies
// for symbol a when it shows >= 2 resolved values, all equal to a; holes
// carry no evidence either way.
constexpr int kMixedOrbit = -1;
constexpr int kThinOrbit = -2;
struct PeriodReport {
  int level = 1;
  std::vector<std::vector<int>> per_cells;  // per symbol, positions in window
  std::map<Cell, int> orbit_verdicts;       // class -> symbol / kMixed / kThin
  long long orbit_count = 0;                // orbits with >= 2 visible values
};
PeriodReport per_sets(const ToeplitzWindow& x, int level);

// Canonical key of the per-symbol layout, for grouping translates.
std::string layout_key(const PeriodReport& r);

struct EssentialVerdict {
  enum class Kind { Essential, NotEssential, Inconclusive } kind;
  int radius = 0;          // certificate radius for Essential
  GroupWord witness;       // preserving shift for NotEssential
  std::string note;
};
// Scans every shift g of norm <= radius outside the level's subgroup; each
// must visibly break some period set for an Essential verdict. Shift windows
// are regenerated from the window's own generator data.
EssentialVerdict essential_test(const ToeplitzWindow& x, int level, int radius);

struct LayoutClassReport {
  // layout key -> translator positions sharing it
  std::map<std::string, std::vector<GroupWord>> classes;
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};
// Groups the translates g*x by period-set layout and checks the grouping is
// exactly "translators congruent at `level`".
LayoutClassReport layout_class_check(const ToeplitzWindow& x, int level,
                                     const std::vector<GroupWord>& translators);

// Reads the base point of a translate window back off its symbols, level by
// level, by matching against the predicted layouts of each candidate class.
// Returns nothing when some level admits zero or several candidates.
struct FactorResult {
  std::optional<OdometerPoint> point;
  std::string note;
};
FactorResult factor_to_odometer(const ToeplitzWindow& x, int depth);

}  // namespace odoforge

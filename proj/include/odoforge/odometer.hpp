#pragma once

// Depth-truncated odometer points, the translation action, clopen cells and
// their exact invariant measure.

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "odoforge/chain.hpp"
#include "odoforge/rational.hpp"

namespace odoforge {

// A point is a projection-compatible tuple of classes, one per level 1..N.
class OdometerPoint {
 public:
  OdometerPoint() = default;
  OdometerPoint(ChainPtr chain, std::vector<Cell> cells);

  // Point determined by its deepest coordinate; lower levels by projection.
  static OdometerPoint from_top_cell(ChainPtr chain, int depth, Cell top);
  static OdometerPoint basepoint(ChainPtr chain, int depth);
  // Orbit point of a word: level-n coordinate is the class of g.
  static OdometerPoint of_word(ChainPtr chain, int depth, const GroupWord& g);

  int depth() const { return static_cast<int>(cells_.size()); }
  Cell cell(int level) const;  // 1-based level
  const std::vector<Cell>& cells() const { return cells_; }
  const ChainPtr& chain() const { return chain_; }

  OdometerPoint truncated(int newDepth) const;

  bool operator==(const OdometerPoint& o) const { return cells_ == o.cells_; }
  bool operator!=(const OdometerPoint& o) const { return !(*this == o); }

  std::string str() const;  // comma-separated cell ids
  static OdometerPoint parse(ChainPtr chain, const std::string& csv);

 private:
  ChainPtr chain_;
  std::vector<Cell> cells_;
};

struct ClopenCell {
  int level = 1;
  GroupWord translator;  // the cell is translator * C_level
};

OdometerPoint act(const GroupWord& g, const OdometerPoint& z);
bool in_cell(const OdometerPoint& z, const ClopenCell& cell);
Rational cell_measure(const QuotientChain& chain, int level);

// All |Q_depth| points of the depth-truncated odometer, by top cell id.
std::vector<OdometerPoint> enumerate_points(ChainPtr chain, int depth);

// Bounded freeness certificate: every nontrivial word of norm <= radius must
// move the given point at some level. Returns the words that escape the
// check; empty result is the certificate.
struct FreeOrbitReport {
  int radius = 0;
  int levels_used = 0;  // deepest level any word needed
  std::vector<GroupWord> unseparated;
  bool certified() const { return unseparated.empty(); }
};
FreeOrbitReport free_orbit_certificate(const OdometerPoint& z, int radius);

nlohmann::json point_to_json(const OdometerPoint& z);

}  // namespace odoforge

#include "odoforge/odometer.hpp"

#include <nlohmann/json.hpp>

#include "odoforge/errors.hpp"

namespace odoforge {

OdometerPoint::OdometerPoint(ChainPtr chain, std::vector<Cell> cells)
    : chain_(std::move(chain)), cells_(std::move(cells)) {
  for (size_t n = 1; n < cells_.size(); ++n) {
    if (chain_->project(static_cast<int>(n) + 1, cells_[n]) != cells_[n - 1])
      throw FormatError("point coordinates are not projection-compatible at level " +
                        std::to_string(n + 1));
  }
}

OdometerPoint OdometerPoint::from_top_cell(ChainPtr chain, int depth, Cell top) {
  std::vector<Cell> cells(static_cast<size_t>(depth));
  cells[static_cast<size_t>(depth - 1)] = top;
  for (int n = depth; n > 1; --n)
    cells[static_cast<size_t>(n - 2)] =
        chain->project(n, cells[static_cast<size_t>(n - 1)]);
  return OdometerPoint(std::move(chain), std::move(cells));
}

OdometerPoint OdometerPoint::basepoint(ChainPtr chain, int depth) {
  return from_top_cell(std::move(chain), depth, 0);
}

OdometerPoint OdometerPoint::of_word(ChainPtr chain, int depth,
                                     const GroupWord& g) {
  std::vector<Cell> cells(static_cast<size_t>(depth));
  for (int n = 1; n <= depth; ++n)
    cells[static_cast<size_t>(n - 1)] = chain->coset(n, g);
  return OdometerPoint(std::move(chain), std::move(cells));
}

Cell OdometerPoint::cell(int level) const {
  if (level < 1 || level > depth())
    throw LevelOutOfRange("point has no level " + std::to_string(level));
  return cells_[static_cast<size_t>(level - 1)];
}

OdometerPoint OdometerPoint::truncated(int newDepth) const {
  if (newDepth < 1 || newDepth > depth()) throw LevelOutOfRange("bad truncation depth");
  OdometerPoint p;
  p.chain_ = chain_;
  p.cells_.assign(cells_.begin(), cells_.begin() + newDepth);
  return p;
}

std::string OdometerPoint::str() const {
  std::string s;
  for (size_t i = 0; i < cells_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(cells_[i]);
  }
  return s;
}

OdometerPoint OdometerPoint::parse(ChainPtr chain, const std::string& csv) {
  std::vector<Cell> cells;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw FormatError("empty coordinate in point");
    cells.push_back(std::stoi(cur));
    cur.clear();
  };
  for (char c : csv) {
    if (c == ',')
      flush();
    else if (c >= '0' && c <= '9')
      cur += c;
    else if (c != ' ')
      throw FormatError("bad character in point");
  }
  flush();
  if (static_cast<int>(cells.size()) > chain->depth())
    throw LevelOutOfRange("point deeper than the chain");
  for (size_t n = 0; n < cells.size(); ++n)
    if (cells[n] < 0 || cells[n] >= chain->index(static_cast<int>(n) + 1))
      throw FormatError("cell id out of range at level " + std::to_string(n + 1));
  return OdometerPoint(std::move(chain), std::move(cells));
}

OdometerPoint act(const GroupWord& g, const OdometerPoint& z) {
  const auto& chain = *z.chain();
  std::vector<Cell> cells(z.cells());
  for (int n = 1; n <= z.depth(); ++n)
    cells[static_cast<size_t>(n - 1)] =
        chain.qmul(n, chain.coset(n, g), cells[static_cast<size_t>(n - 1)]);
  return OdometerPoint(z.chain(), std::move(cells));
}

bool in_cell(const OdometerPoint& z, const ClopenCell& cell) {
  if (cell.level > z.depth()) throw LevelOutOfRange("cell level beyond point depth");
  return z.cell(cell.level) == z.chain()->coset(cell.level, cell.translator);
}

Rational cell_measure(const QuotientChain& chain, int level) {
  return Rational(1, BigInt(chain.index(level)));
}

std::vector<OdometerPoint> enumerate_points(ChainPtr chain, int depth) {
  long long n = chain->index(depth);
  std::vector<OdometerPoint> pts;
  pts.reserve(static_cast<size_t>(n));
  for (Cell c = 0; c < n; ++c)
    pts.push_back(OdometerPoint::from_top_cell(chain, depth, c));
  return pts;
}

FreeOrbitReport free_orbit_certificate(const OdometerPoint& z, int radius) {
  const auto& chain = *z.chain();
  FreeOrbitReport rep;
  rep.radius = radius;
  for (const auto& w : word_ball(chain.backend(), chain.rank(), radius)) {
    if (w.is_identity()) continue;
    bool separated = false;
    for (int n = 1; n <= z.depth() && !separated; ++n) {
      // w stabilizes z at level n iff conjugating w by the coordinate fixes
      // the class: z_n^-1 w z_n in the level subgroup.
      Cell zc = z.cell(n);
      Cell moved = chain.qmul(n, chain.qmul(n, chain.qinv(n, zc), chain.coset(n, w)), zc);
      if (moved != 0) {
        separated = true;
        rep.levels_used = std::max(rep.levels_used, n);
      }
    }
    if (!separated) rep.unseparated.push_back(w);
  }
  return rep;
}

nlohmann::json point_to_json(const OdometerPoint& z) {
  nlohmann::json j;
  j["cells"] = z.cells();
  j["depth"] = z.depth();
  return j;
}

}  // namespace odoforge

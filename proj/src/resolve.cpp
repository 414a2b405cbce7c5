#include "odoforge/resolve.hpp"

#include <algorithm>

#include "odoforge/errors.hpp"

namespace odoforge {

LevelView LevelView::identity(int depth) {
  LevelView v;
  v.levels_.resize(static_cast<size_t>(depth));
  for (int i = 0; i < depth; ++i) v.levels_[static_cast<size_t>(i)] = i + 1;
  return v;
}

LevelView LevelView::of_levels(std::vector<int> levels) {
  for (size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw FormatError("view levels must strictly increase");
  if (!levels.empty() && levels.front() < 1)
    throw FormatError("view levels start at 1");
  LevelView v;
  v.levels_ = std::move(levels);
  return v;
}

LevelView LevelView::of_plan(const ThinningPlan& plan) {
  return of_levels(plan.levels);
}

int LevelView::prev_level(int stage) const {
  return stage <= 1 ? 0 : levels_[static_cast<size_t>(stage - 2)];
}

Resolver::Resolver(std::shared_ptr<const TransversalTower> tower, LevelView view)
    : tower_(std::move(tower)), view_(view) {
  const auto& chain = *tower_->chain();
  for (int j = 1; j <= view_.stages(); ++j) {
    int lvl = view_.level(j);
    if (lvl > chain.depth())
      throw LevelOutOfRange("view level " + std::to_string(lvl) +
                            " beyond the chain depth");
    int prev = view_.prev_level(j);
    std::unordered_map<Cell, int> img;
    const auto& d = tower_->level(prev);
    for (size_t i = 0; i < d.size(); ++i)
      img.emplace(chain.coset(lvl, d[i]), static_cast<int>(i));
    stage_images_.push_back(std::move(img));
  }
}

std::vector<Cell> Resolver::stage_classes(const GroupWord& g) const {
  const auto& chain = *tower_->chain();
  std::vector<Cell> out(static_cast<size_t>(view_.stages()));
  for (int j = 1; j <= view_.stages(); ++j)
    out[static_cast<size_t>(j - 1)] = chain.coset(view_.level(j), g);
  return out;
}

CellResolution Resolver::resolve_classes(const OdometerPoint& z,
                                         const std::vector<Cell>& g_classes) const {
  const auto& chain = *tower_->chain();
  for (int j = 1; j <= view_.stages(); ++j) {
    int lvl = view_.level(j);
    Cell base = z.cell(lvl);
    Cell target = chain.qmul(lvl, chain.qinv(lvl, base),
                             g_classes[static_cast<size_t>(j - 1)]);
    const auto& img = stage_images_[static_cast<size_t>(j - 1)];
    auto it = img.find(target);
    if (it != img.end()) return CellResolution{j, it->second};
  }
  return CellResolution{};
}

CellResolution Resolver::resolve(const OdometerPoint& z, const GroupWord& g) const {
  return resolve_classes(z, stage_classes(g));
}

std::vector<CellResolution> Resolver::resolve_window(const OdometerPoint& z,
                                                     const Window& w) const {
  std::vector<CellResolution> out;
  out.reserve(w.size());
  for (const auto& g : w.cells()) out.push_back(resolve(z, g));
  return out;
}

CellResolution Resolver::min_stage(const GroupWord& g) const {
  const auto& chain = *tower_->chain();
  for (int j = 1; j <= view_.stages(); ++j) {
    Cell target = chain.coset(view_.level(j), g);
    const auto& img = stage_images_[static_cast<size_t>(j - 1)];
    auto it = img.find(target);
    if (it != img.end()) return CellResolution{j, it->second};
  }
  return CellResolution{};
}

GroupWord Resolver::rep_word(const CellResolution& r) const {
  if (!r.resolved()) throw Error("unresolved verdict has no representative");
  return tower_->level(view_.prev_level(r.stage))[static_cast<size_t>(r.rep_index)];
}

EquivarianceReport stage_equivariance_check(const Resolver& r,
                                            const OdometerPoint& z,
                                            const GroupWord& g,
                                            const Window& w) {
  EquivarianceReport rep;
  OdometerPoint gz = act(g, z);
  GroupWord gi = g.inverse();
  for (const auto& h : w.cells()) {
    CellResolution lhs = r.resolve(gz, h);
    CellResolution rhs = r.resolve(z, gi * h);
    ++rep.cases;
    if (!(lhs == rhs))
      rep.violations.push_back("cell " + h.str() + " under " + g.str() +
                               ": stage " + std::to_string(lhs.stage) + "/" +
                               std::to_string(lhs.rep_index) + " vs " +
                               std::to_string(rhs.stage) + "/" +
                               std::to_string(rhs.rep_index));
  }
  return rep;
}

}  // namespace odoforge

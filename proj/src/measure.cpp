#include "odoforge/measure.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "odoforge/errors.hpp"

namespace odoforge {

CylinderFamily CylinderFamily::uniform(ChainPtr chain, int depth) {
  CylinderFamily f;
  f.chain_ = std::move(chain);
  for (int n = 1; n <= depth; ++n) {
    long long s = f.chain_->index(n);
    f.weights_.emplace_back(static_cast<size_t>(s), Rational(1, BigInt(s)));
  }
  return f;
}

CylinderFamily CylinderFamily::point_mass(const OdometerPoint& z, int depth) {
  if (depth > z.depth()) throw LevelOutOfRange("point shallower than requested depth");
  CylinderFamily f;
  f.chain_ = z.chain();
  for (int n = 1; n <= depth; ++n) {
    std::vector<Rational> w(static_cast<size_t>(f.chain_->index(n)), Rational(0));
    w[static_cast<size_t>(z.cell(n))] = 1;
    f.weights_.push_back(std::move(w));
  }
  return f;
}

CylinderFamily CylinderFamily::from_level_weights(ChainPtr chain, int level,
                                                  std::vector<Rational> weights,
                                                  int depth) {
  if (level < 1 || level > depth) throw LevelOutOfRange("anchor level outside depth");
  if (static_cast<long long>(weights.size()) != chain->index(level))
    throw FormatError("weight vector length differs from the cell count");
  CylinderFamily f;
  f.chain_ = std::move(chain);
  f.weights_.assign(static_cast<size_t>(depth), {});
  f.weights_[static_cast<size_t>(level - 1)] = std::move(weights);
  for (int n = level - 1; n >= 1; --n) {
    const auto& fine = f.weights_[static_cast<size_t>(n)];
    std::vector<Rational> coarse(static_cast<size_t>(f.chain_->index(n)), Rational(0));
    for (Cell c = 0; c < static_cast<Cell>(fine.size()); ++c)
      coarse[static_cast<size_t>(f.chain_->project(n + 1, c))] += fine[static_cast<size_t>(c)];
    f.weights_[static_cast<size_t>(n - 1)] = std::move(coarse);
  }
  for (int n = level + 1; n <= depth; ++n) {
    const auto& coarse = f.weights_[static_cast<size_t>(n - 2)];
    long long ratio = f.chain_->index(n) / f.chain_->index(n - 1);
    std::vector<Rational> fine(static_cast<size_t>(f.chain_->index(n)));
    for (Cell c = 0; c < static_cast<Cell>(fine.size()); ++c)
      fine[static_cast<size_t>(c)] =
          coarse[static_cast<size_t>(f.chain_->project(n, c))] / ratio;
    f.weights_[static_cast<size_t>(n - 1)] = std::move(fine);
  }
  f.validate();
  return f;
}

const std::vector<Rational>& CylinderFamily::level_weights(int level) const {
  if (level < 1 || level > depth()) throw LevelOutOfRange("family has no level " + std::to_string(level));
  return weights_[static_cast<size_t>(level - 1)];
}

const Rational& CylinderFamily::weight(int level, Cell c) const {
  return level_weights(level)[static_cast<size_t>(c)];
}

void CylinderFamily::validate() const {
  for (int n = 1; n <= depth(); ++n) {
    Rational total = 0;
    for (const auto& w : level_weights(n)) {
      if (w < 0) throw FormatError("negative weight at level " + std::to_string(n));
      total += w;
    }
    if (total != 1) throw FormatError("level " + std::to_string(n) + " weights sum to " +
                                      rational_str(total));
    if (n > 1) {
      std::vector<Rational> marg(level_weights(n - 1).size(), Rational(0));
      for (Cell c = 0; c < static_cast<Cell>(level_weights(n).size()); ++c)
        marg[static_cast<size_t>(chain_->project(n, c))] += weight(n, c);
      if (marg != level_weights(n - 1))
        throw FormatError("levels " + std::to_string(n - 1) + " and " +
                          std::to_string(n) + " are not marginal-consistent");
    }
  }
}

MetricTruncation metric_distance(const CylinderFamily& a,
                                 const CylinderFamily& b, int level) {
  if (a.chain() != b.chain()) {
    // same partition sequence required; distinct chain objects must agree
    if (a.chain()->to_json() != b.chain()->to_json())
      throw FormatError("measure families live over different partitions");
  }
  if (level > a.depth() || level > b.depth())
    throw LevelOutOfRange("truncation level beyond the family depth");
  MetricTruncation out;
  out.level = level;
  out.partial = 0;
  for (int n = 1; n <= level; ++n) {
    Rational level_sum = 0;
    const auto& wa = a.level_weights(n);
    const auto& wb = b.level_weights(n);
    for (size_t c = 0; c < wa.size(); ++c) {
      Rational d = wa[c] - wb[c];
      if (d < 0) d = -d;
      level_sum += d;
    }
    out.partial += level_sum / (pow2(n) * a.chain()->index(n));
  }
  out.tail = pow2(1 - level);
  return out;
}

CylinderFamily average_over_transversal(const CylinderFamily& lambda,
                                        const TransversalTower& tower, int n) {
  if (n < 1 || n > lambda.depth())
    throw LevelOutOfRange("averaging level beyond the family depth");
  const auto& chain = *lambda.chain();
  const auto& d = tower.level(n);
  CylinderFamily out = lambda;
  for (int m = 1; m <= lambda.depth(); ++m) {
    std::vector<Cell> shift(d.size());
    for (size_t i = 0; i < d.size(); ++i)
      shift[i] = chain.qinv(m, chain.coset(m, d[i]));
    std::vector<Rational> w(lambda.level_weights(m).size(), Rational(0));
    for (Cell c = 0; c < static_cast<Cell>(w.size()); ++c) {
      Rational acc = 0;
      for (size_t i = 0; i < d.size(); ++i)
        acc += lambda.weight(m, chain.qmul(m, shift[i], c));
      w[static_cast<size_t>(c)] = acc / static_cast<long long>(d.size());
    }
    out.weights_[static_cast<size_t>(m - 1)] = std::move(w);
  }
  return out;
}

DefectBound vkn_bound(const TransversalTower& tower, const ThinningPlan& plan,
                      int n_idx, int k_idx, int horizon) {
  int len = static_cast<int>(plan.length());
  if (horizon > len) throw PlanMismatch("horizon beyond the plan length");
  if (horizon < 1) throw PlanMismatch("horizon must be >= 1");
  if (n_idx < 1 || n_idx > len) throw PlanMismatch("window index outside the plan");
  if (k_idx < 0) throw PlanMismatch("stage cutoff must be >= 0");
  full_capture_bound(tower, plan);  // validates ratios against the tower
  Rational dn(tower.size(plan.levels[static_cast<size_t>(n_idx - 1)]));
  DefectBound out;
  out.partial = 0;
  for (int m = k_idx + 1; m <= horizon; ++m)
    out.partial += dn * plan.ratios[static_cast<size_t>(m - 1)];
  out.tail = dn * pow2(-(std::max(k_idx, horizon) + 1));
  return out;
}

Rational empirical_unresolved_fraction(const TransversalTower& tower,
                                       const LevelView& view, const Window& w,
                                       int k_idx, int horizon,
                                       long long max_points) {
  if (horizon < 1 || horizon > view.stages())
    throw LevelOutOfRange("horizon outside the view");
  if (k_idx < 0) throw LevelOutOfRange("stage cutoff must be >= 0");
  const auto& chain = *tower.chain();
  int top_level = view.level(horizon);
  long long points = chain.index(top_level);
  if (points > max_points)
    throw EnumerationTooLarge("base enumeration of " + std::to_string(points) +
                              " points exceeds the guard");

  // per stage: membership bitmap of the transversal image, and the class of
  // every window cell
  std::vector<std::vector<char>> member(static_cast<size_t>(horizon));
  std::vector<std::vector<Cell>> cell_class(static_cast<size_t>(horizon));
  for (int j = 1; j <= horizon; ++j) {
    int lvl = view.level(j);
    std::vector<char> bits(static_cast<size_t>(chain.index(lvl)), 0);
    for (const auto& dword : tower.level(view.prev_level(j)))
      bits[static_cast<size_t>(chain.coset(lvl, dword))] = 1;
    member[static_cast<size_t>(j - 1)] = std::move(bits);
    std::vector<Cell> cls(w.size());
    for (size_t i = 0; i < w.size(); ++i)
      cls[i] = chain.coset(lvl, w.cell(i));
    cell_class[static_cast<size_t>(j - 1)] = std::move(cls);
  }

  long long hits = 0;
  for (Cell top = 0; top < points; ++top) {
    std::vector<Cell> zc(static_cast<size_t>(horizon));
    zc[static_cast<size_t>(horizon - 1)] = top;
    for (int j = horizon - 1; j >= 1; --j)
      zc[static_cast<size_t>(j - 1)] =
          chain.project_to(view.level(j + 1), view.level(j),
                           zc[static_cast<size_t>(j)]);
    bool hit = false;
    for (size_t i = 0; i < w.size() && !hit; ++i) {
      for (int j = 1; j <= horizon; ++j) {
        int lvl = view.level(j);
        Cell target = chain.qmul(lvl, chain.qinv(lvl, zc[static_cast<size_t>(j - 1)]),
                                 cell_class[static_cast<size_t>(j - 1)][i]);
        if (member[static_cast<size_t>(j - 1)][static_cast<size_t>(target)]) {
          if (j > k_idx) hit = true;
          break;  // first capture stage decides
        }
      }
    }
    if (hit) ++hits;
  }
  return Rational(hits, BigInt(points));
}

Rational empirical_unresolved_fraction(const TransversalTower& tower,
                                       const ThinningPlan& plan, int n_idx,
                                       int k_idx, int horizon,
                                       long long max_points) {
  if (n_idx < 1 || n_idx > static_cast<int>(plan.length()))
    throw PlanMismatch("window index outside the plan");
  Window w(tower.level(plan.levels[static_cast<size_t>(n_idx - 1)]));
  return empirical_unresolved_fraction(tower, LevelView::of_plan(plan), w,
                                       k_idx, horizon, max_points);
}

}  // namespace odoforge

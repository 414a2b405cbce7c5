#include "odoforge/extension.hpp"

#include <algorithm>
#include <map>

#include "odoforge/errors.hpp"

namespace odoforge {

bool Pattern::operator==(const Pattern& o) const {
  return base == o.base && symbols == o.symbols && stages == o.stages;
}

bool patterns_agree(const Pattern& a, const Pattern& b, int level) {
  size_t k = std::min({a.base.size(), b.base.size(), static_cast<size_t>(level)});
  for (size_t i = 0; i < k; ++i)
    if (a.base[i] != b.base[i]) return false;
  if (a.symbols.size() != b.symbols.size()) return false;
  for (size_t i = 0; i < a.symbols.size(); ++i) {
    int sa = a.stages[i], sb = b.stages[i];
    if (sa >= 1 && sa <= level && sb >= 1 && sb <= level &&
        a.symbols[i] != b.symbols[i])
      return false;
  }
  return true;
}

PointedWindowSystem PointedWindowSystem::odometer_system(
    std::shared_ptr<const TransversalTower> tower, int depth, int cmp_level) {
  PointedWindowSystem s(tower, depth);
  s.cmp_level_ = std::min(cmp_level, depth);
  s.symbolic_ = false;
  return s;
}

PointedWindowSystem PointedWindowSystem::toeplitz_system(
    std::shared_ptr<const TransversalTower> tower, int depth,
    const Marking& marking, const Window& cmp_window, int cmp_level) {
  PointedWindowSystem s(tower, depth);
  s.cmp_level_ = std::min(cmp_level, depth);
  s.symbolic_ = true;
  s.marking_ = marking;
  s.cmp_window_ = cmp_window;
  return s;
}

PointedWindowSystem::PointedWindowSystem(
    std::shared_ptr<const TransversalTower> tower, int depth)
    : tower_(std::move(tower)),
      depth_(depth),
      resolver_(tower_, LevelView::identity(depth)) {
  if (depth < 1 || depth > tower_->chain()->depth())
    throw LevelOutOfRange("system depth outside the chain");
}

OdometerPoint PointedWindowSystem::base(const GroupWord& w) const {
  return OdometerPoint::of_word(tower_->chain(), depth_, w);
}

GroupWord PointedWindowSystem::fiber_coordinate(int level,
                                                const OdometerPoint& b) const {
  const auto& chain = *tower_->chain();
  Cell c = b.cell(level);
  if (chain.side() == Side::Right) {
    int idx = tower_->rep_index_by_class(level, level, chain.qinv(level, c));
    if (idx < 0) throw Error("transversal misses a class");
    return tower_->rep(level, idx).inverse();
  }
  int idx = tower_->rep_index_by_class(level, level, c);
  if (idx < 0) throw Error("transversal misses a class");
  return tower_->rep(level, idx);
}

Pattern PointedWindowSystem::pattern(const GroupWord& w) const {
  Pattern p;
  OdometerPoint b = base(w);
  p.base.assign(b.cells().begin(),
                b.cells().begin() + std::min(cmp_level_, b.depth()));
  if (!symbolic_) return p;
  auto tw = generate_toeplitz_at(tower_, marking_, depth_, cmp_window_, b);
  p.symbols = tw.data.symbols;
  p.stages.assign(cmp_window_.size(), 0);
  for (size_t i = 0; i < cmp_window_.size(); ++i) {
    CellResolution r = resolver_.resolve(b, cmp_window_.cell(i));
    p.stages[i] = r.stage;
  }
  return p;
}

bool phi_values_equal(const PhiValue& a, const PhiValue& b, int cmp_level) {
  if (a.tag != b.tag) return false;
  switch (a.tag) {
    case PhiTag::Marker:
      return a.marker_rep == b.marker_rep;
    case PhiTag::Free:
      return patterns_agree(a.free_pattern, b.free_pattern, cmp_level);
    case PhiTag::Pending:
      return true;
  }
  return false;
}

std::vector<PhiValue> phi_stage(const PointedWindowSystem& sys,
                                const GroupWord& y, int stage_i,
                                const Window& w) {
  if (stage_i < 0 || stage_i > sys.depth())
    throw LevelOutOfRange("stage outside the system depth");
  OdometerPoint b = sys.base(y);
  std::vector<PhiValue> out(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    const GroupWord& g = w.cell(i);
    CellResolution r = sys.resolver().resolve(b, g);
    if (r.resolved() && r.stage <= stage_i) {
      out[i].tag = PhiTag::Marker;
      out[i].marker_rep = sys.resolver().rep_word(r);
    } else {
      out[i].tag = PhiTag::Free;
      out[i].free_pattern = sys.pattern(g.inverse() * y);
    }
  }
  return out;
}

std::vector<PhiValue> phi_limit(const PointedWindowSystem& sys,
                                const GroupWord& y, const Window& w) {
  OdometerPoint b = sys.base(y);
  std::vector<PhiValue> out(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    CellResolution r = sys.resolver().resolve(b, w.cell(i));
    if (r.resolved()) {
      out[i].tag = PhiTag::Marker;
      out[i].marker_rep = sys.resolver().rep_word(r);
    } else {
      out[i].tag = PhiTag::Pending;
    }
  }
  return out;
}

EquivarianceReport phi_equivariance_check(const PointedWindowSystem& sys,
                                          const GroupWord& y,
                                          const GroupWord& h, int stage_i,
                                          const Window& w) {
  EquivarianceReport rep;
  auto lhs = phi_stage(sys, h * y, stage_i, w);
  auto rhs = phi_stage(sys, y, stage_i, w.translated(h.inverse()));
  for (size_t i = 0; i < w.size(); ++i) {
    ++rep.cases;
    if (!phi_values_equal(lhs[i], rhs[i], sys.cmp_level()))
      rep.violations.push_back("cell " + w.cell(i).str() + " under " + h.str());
  }
  return rep;
}

std::vector<ExtensionSample> sample_extension_window(
    const PointedWindowSystem& sys, const std::vector<GroupWord>& translators,
    const Window& w, bool dedup) {
  std::vector<ExtensionSample> out;
  for (const auto& h : translators) {
    ExtensionSample s;
    s.translator = h;
    s.base_cells = sys.base(h.inverse()).cells();
    s.phi.resize(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
      GroupWord hg = h * w.cell(i);
      CellResolution r = sys.resolver().min_stage(hg);
      if (r.resolved()) {
        s.phi[i].tag = PhiTag::Marker;
        s.phi[i].marker_rep = sys.resolver().rep_word(r);
      } else {
        s.phi[i].tag = PhiTag::Free;
        s.phi[i].free_pattern = sys.pattern(hg.inverse());
      }
    }
    bool dup = false;
    if (dedup) for (const auto& prev : out) {
      if (prev.base_cells != s.base_cells || prev.phi.size() != s.phi.size())
        continue;
      bool same = true;
      for (size_t i = 0; i < s.phi.size() && same; ++i) {
        same = prev.phi[i].tag == s.phi[i].tag &&
               prev.phi[i].marker_rep == s.phi[i].marker_rep &&
               prev.phi[i].free_pattern == s.phi[i].free_pattern;
      }
      if (same) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(s));
  }
  return out;
}

FiberAgreementReport fiber_agreement_check(
    const PointedWindowSystem& sys, const std::vector<ExtensionSample>& samples,
    const Window& w) {
  FiberAgreementReport rep;
  std::map<std::vector<Cell>, std::vector<size_t>> groups;
  for (size_t i = 0; i < samples.size(); ++i)
    groups[samples[i].base_cells].push_back(i);
  rep.groups = static_cast<long long>(groups.size());
  for (const auto& [base, members] : groups) {
    if (members.size() < 2) continue;
    ++rep.nontrivial_groups;
    const auto& first = samples[members.front()];
    for (size_t k = 1; k < members.size(); ++k) {
      const auto& other = samples[members[k]];
      for (size_t i = 0; i < w.size(); ++i) {
        const auto& a = first.phi[i];
        const auto& b = other.phi[i];
        if (a.tag != b.tag) {
          rep.violations.push_back(
              "samples " + first.translator.str() + " and " +
              other.translator.str() + " disagree in kind at " + w.cell(i).str());
          continue;
        }
        if (a.tag == PhiTag::Marker && !(a.marker_rep == b.marker_rep))
          rep.violations.push_back(
              "samples " + first.translator.str() + " and " +
              other.translator.str() + " carry different markers at " +
              w.cell(i).str());
        if (a.tag == PhiTag::Free &&
            !patterns_agree(a.free_pattern, b.free_pattern, sys.cmp_level()))
          rep.violations.push_back(
              "samples " + first.translator.str() + " and " +
              other.translator.str() + " carry different free patterns at " +
              w.cell(i).str());
      }
    }
  }
  return rep;
}

std::optional<GroupWord> bounded_minimality_search(
    const PointedWindowSystem& sys, const GroupWord& y, int level_k,
    int radius) {
  if (level_k < 1 || level_k > sys.depth())
    throw LevelOutOfRange("search level outside the system depth");
  const auto& chain = *sys.tower().chain();
  OdometerPoint by = sys.base(y);
  Cell want = chain.qinv(level_k, by.cell(level_k));
  Pattern target = sys.pattern(y);
  for (const auto& h : word_ball(chain.backend(), chain.rank(), radius)) {
    if (chain.coset(level_k, h) != want) continue;
    if (patterns_agree(sys.pattern(h.inverse()), target, level_k)) return h;
  }
  return std::nullopt;
}

WindowPredicate symbol_at_identity_predicate(char symbol) {
  WindowPredicate p;
  p.name = std::string("symbol_at_identity:") + symbol;
  p.test = [symbol](const ToeplitzWindow& tw,
                    const GroupWord& g) -> std::optional<bool> {
    auto v = tw.data.value_at(g);
    if (!v || *v == kHole) return std::nullopt;
    return tw.data.alphabet[static_cast<size_t>(*v)] == symbol;
  };
  return p;
}

WindowPredicate base_class_predicate(int level, Cell cls) {
  WindowPredicate p;
  p.name = "base_class:" + std::to_string(level) + ":" + std::to_string(cls);
  p.test = [level, cls](const ToeplitzWindow& tw,
                        const GroupWord& g) -> std::optional<bool> {
    const auto& chain = tw.chain();
    Cell moved = chain.qmul(level, chain.qinv(level, chain.coset(level, g)),
                            tw.base.cell(level));
    return moved == cls;
  };
  return p;
}

std::vector<CodedWindow> clopen_code(
    std::shared_ptr<const TransversalTower> tower, const Marking& marking,
    int depth, const std::vector<GroupWord>& translators, const Window& w,
    const std::vector<WindowPredicate>& partition) {
  std::vector<CodedWindow> out;
  for (const auto& h : translators) {
    auto tw = translate_toeplitz(tower, marking, depth, w, h);
    CodedWindow cw;
    cw.translator = h;
    cw.window = w;
    cw.codes.assign(w.size(), kHole);
    for (size_t i = 0; i < w.size(); ++i) {
      int match = 0, idx = 0;
      bool undecided = false;
      for (size_t p = 0; p < partition.size(); ++p) {
        auto v = partition[p].test(tw, w.cell(i));
        if (!v) {
          undecided = true;
          break;
        }
        if (*v) {
          ++match;
          idx = static_cast<int>(p) + 1;
        }
      }
      if (undecided) continue;
      if (match != 1)
        throw PartitionViolation(
            "cell " + w.cell(i).str() + " of translate " + h.str() +
            " matches " + std::to_string(match) + " partition cells");
      cw.codes[i] = idx;
    }
    out.push_back(std::move(cw));
  }
  return out;
}

std::vector<FiberPair> fiber_product(const std::vector<ExtensionSample>& a,
                                     const std::vector<ExtensionSample>& b) {
  std::map<std::vector<Cell>, size_t> right;
  for (size_t i = 0; i < b.size(); ++i) right.emplace(b[i].base_cells, i);
  std::vector<FiberPair> pairs;
  pairs.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    auto it = right.find(a[i].base_cells);
    if (it == right.end())
      throw FiberMismatch("sample " + a[i].translator.str() +
                          " has no partner over its base window");
    pairs.push_back({i, it->second});
  }
  return pairs;
}

}  // namespace odoforge

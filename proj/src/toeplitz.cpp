#include "odoforge/toeplitz.hpp"

#include <algorithm>
#include <map>

#include "odoforge/errors.hpp"

namespace odoforge {

Marking Marking::cycle(std::string symbols) {
  if (symbols.empty()) throw FormatError("marking needs at least one symbol");
  Marking m;
  m.mode_ = Mode::Cycle;
  m.symbols_ = std::move(symbols);
  for (char c : m.symbols_)
    if (m.alphabet_.find(c) == std::string::npos) m.alphabet_ += c;
  return m;
}

Marking Marking::threshold(int t, std::string symbols) {
  if (symbols.size() != 2) throw FormatError("threshold marking needs two symbols");
  Marking m;
  m.mode_ = Mode::Threshold;
  m.threshold_ = t;
  m.symbols_ = std::move(symbols);
  for (char c : m.symbols_)
    if (m.alphabet_.find(c) == std::string::npos) m.alphabet_ += c;
  return m;
}

Marking Marking::parse(const std::string& spec) {
  if (spec.rfind("cycle:", 0) == 0) return cycle(spec.substr(6));
  if (spec.rfind("threshold:", 0) == 0) {
    std::string rest = spec.substr(10);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw FormatError("threshold marking: threshold:<t>:<two symbols>");
    return threshold(std::stoi(rest.substr(0, colon)), rest.substr(colon + 1));
  }
  throw FormatError("unknown marking spec: " + spec);
}

char Marking::at(int stage) const {
  if (stage < 1) throw LevelOutOfRange("marking stage must be >= 1");
  if (mode_ == Mode::Cycle)
    return symbols_[static_cast<size_t>((stage - 1) % static_cast<int>(symbols_.size()))];
  return stage <= threshold_ ? symbols_[0] : symbols_[1];
}

int Marking::symbol_index(int stage) const {
  return static_cast<int>(alphabet_.find(at(stage)));
}

std::string Marking::spec() const {
  if (mode_ == Mode::Cycle) return "cycle:" + symbols_;
  return "threshold:" + std::to_string(threshold_) + ":" + symbols_;
}

ToeplitzWindow generate_toeplitz_at(std::shared_ptr<const TransversalTower> tower,
                                    const Marking& marking, int depth,
                                    const Window& w, const OdometerPoint& z) {
  if (depth < 1 || depth > tower->chain()->depth())
    throw LevelOutOfRange("generation depth outside the chain");
  if (z.depth() < depth)
    throw LevelOutOfRange("base point shallower than the generation depth");
  Resolver resolver(tower, LevelView::identity(depth));
  ToeplitzWindow x;
  x.tower = tower;
  x.marking = marking;
  x.depth = depth;
  x.base = z.truncated(depth);
  x.data.window = w;
  x.data.alphabet = marking.alphabet();
  x.data.symbols.assign(w.size(), kHole);
  for (size_t i = 0; i < w.size(); ++i) {
    CellResolution r = resolver.resolve(x.base, w.cell(i));
    if (r.resolved()) x.data.symbols[i] = marking.symbol_index(r.stage);
  }
  return x;
}

ToeplitzWindow generate_toeplitz(std::shared_ptr<const TransversalTower> tower,
                                 const Marking& marking, int depth,
                                 const Window& w) {
  auto base = OdometerPoint::basepoint(tower->chain(), depth);
  return generate_toeplitz_at(std::move(tower), marking, depth, w, base);
}

ToeplitzWindow translate_toeplitz(std::shared_ptr<const TransversalTower> tower,
                                  const Marking& marking, int depth,
                                  const Window& w, const GroupWord& g) {
  auto base = OdometerPoint::of_word(tower->chain(), depth, g);
  return generate_toeplitz_at(std::move(tower), marking, depth, w, base);
}

std::vector<std::string> window_periodicity_violations(const ToeplitzWindow& x) {
  std::vector<std::string> out;
  const auto& chain = x.chain();
  Resolver resolver(x.tower, LevelView::identity(x.depth));
  const auto& w = x.data.window;
  for (size_t i = 0; i < w.size(); ++i) {
    CellResolution r = resolver.resolve(x.base, w.cell(i));
    if (!r.resolved()) continue;
    Cell cls = chain.coset(r.stage, w.cell(i));
    for (size_t k = 0; k < w.size(); ++k) {
      if (k == i || chain.coset(r.stage, w.cell(k)) != cls) continue;
      if (x.data.symbols[k] != x.data.symbols[i])
        out.push_back("cells " + w.cell(i).str() + " and " + w.cell(k).str() +
                      " share the stage-" + std::to_string(r.stage) +
                      " orbit but differ");
    }
  }
  return out;
}

// Fresh captures among the level-N transversal at any stage m <= N fill at
// most the ratio |D_{m-1}|/|D_m| of the window, so the cutoff-k* hole count
// exceeds the full-depth one by at most the ratio sum over (k*, N]. The
// cells surviving every applied stage are counted exactly.
HoleDensityReport hole_density_check(std::shared_ptr<const TransversalTower> tower,
                                     const Marking& marking, int window_level,
                                     int stage_cutoff) {
  const auto& chain = *tower->chain();
  if (window_level >= chain.depth())
    throw LevelOutOfRange("window level must sit strictly inside the chain");
  Window w(tower->level(window_level));
  auto x = generate_toeplitz(tower, marking, stage_cutoff, w);
  long long holes = std::count(x.data.symbols.begin(), x.data.symbols.end(), kHole);
  auto full = generate_toeplitz(tower, marking, window_level, w);
  long long deep_holes =
      std::count(full.data.symbols.begin(), full.data.symbols.end(), kHole);
  HoleDensityReport rep;
  rep.fraction = Rational(holes, tower->size(window_level));
  rep.bound = Rational(deep_holes, tower->size(window_level));
  for (int m = stage_cutoff + 1; m <= window_level; ++m)
    rep.bound += Rational(m == 1 ? 1 : chain.index(m - 1), chain.index(m));
  return rep;
}

PeriodReport per_sets(const ToeplitzWindow& x, int level) {
  if (level < 1 || level > x.depth)
    throw LevelOutOfRange("period level outside the generation depth");
  const auto& chain = x.chain();
  const auto& w = x.data.window;
  PeriodReport rep;
  rep.level = level;
  rep.per_cells.assign(x.data.alphabet.size(), {});
  std::map<Cell, std::vector<int>> orbits;
  for (size_t i = 0; i < w.size(); ++i)
    orbits[chain.coset(level, w.cell(i))].push_back(static_cast<int>(i));
  for (const auto& [cls, cells] : orbits) {
    // holes carry no evidence; an orbit qualifies when at least two visible
    // values exist and they all agree
    std::vector<int> known;
    for (int p : cells)
      if (x.data.symbols[static_cast<size_t>(p)] != kHole) known.push_back(p);
    int verdict = kMixedOrbit;
    if (known.size() < 2) {
      verdict = kThinOrbit;
    } else {
      ++rep.orbit_count;
      int sym = x.data.symbols[static_cast<size_t>(known.front())];
      bool constant = std::all_of(known.begin(), known.end(), [&](int p) {
        return x.data.symbols[static_cast<size_t>(p)] == sym;
      });
      if (constant) {
        verdict = sym;
        rep.per_cells[static_cast<size_t>(sym)].insert(
            rep.per_cells[static_cast<size_t>(sym)].end(), known.begin(),
            known.end());
      }
    }
    rep.orbit_verdicts.emplace(cls, verdict);
  }
  return rep;
}

std::string layout_key(const PeriodReport& r) {
  // the period layout of a translate is determined by which orbits carry
  // which constant symbol; cell positions would leak boundary holes
  std::string key;
  for (const auto& [cls, verdict] : r.orbit_verdicts) {
    key += std::to_string(cls) + ":";
    key += verdict == kMixedOrbit ? "m" : verdict == kThinOrbit ? "i"
                                        : std::to_string(verdict);
    key += ";";
  }
  return key;
}

EssentialVerdict essential_test(const ToeplitzWindow& x, int level, int radius) {
  const auto& chain = x.chain();
  PeriodReport base = per_sets(x, level);
  long long certified = 0;
  for (const auto& cells : base.per_cells) certified += static_cast<long long>(cells.size());
  if (certified == 0)
    return {EssentialVerdict::Kind::Inconclusive, 0, chain.make_identity(),
            "no certified period cells in the window"};

  const auto& w = x.data.window;
  // orbit-mate lists by class at this level, for violation scans
  std::map<Cell, std::vector<int>> orbits;
  for (size_t i = 0; i < w.size(); ++i)
    orbits[chain.coset(level, w.cell(i))].push_back(static_cast<int>(i));

  bool any_insufficient = false;
  for (const auto& g : word_ball(chain.backend(), chain.rank(), radius)) {
    if (chain.coset(level, g) == 0) continue;  // inside the subgroup
    auto shifted = generate_toeplitz_at(x.tower, x.marking, x.depth, w,
                                        act(g, x.base));
    bool violated = false;
    long long evidence = 0;
    for (size_t a = 0; a < base.per_cells.size() && !violated; ++a) {
      for (int p : base.per_cells[a]) {
        Cell cls = chain.coset(level, w.cell(static_cast<size_t>(p)));
        for (int mate : orbits[cls]) {
          int v = shifted.data.symbols[static_cast<size_t>(mate)];
          if (v == kHole) continue;
          ++evidence;
          if (v != static_cast<int>(a)) {
            violated = true;
            break;
          }
        }
        if (violated) break;
      }
    }
    if (!violated) {
      if (evidence > 0)
        return {EssentialVerdict::Kind::NotEssential, radius, g,
                "shift preserves every certified period cell on the window"};
      any_insufficient = true;
    }
  }
  if (any_insufficient)
    return {EssentialVerdict::Kind::Inconclusive, radius, chain.make_identity(),
            "some shifts left no visible evidence"};
  return {EssentialVerdict::Kind::Essential, radius, chain.make_identity(), ""};
}

LayoutClassReport layout_class_check(const ToeplitzWindow& x, int level,
                                     const std::vector<GroupWord>& translators) {
  LayoutClassReport rep;
  std::map<std::string, Cell> key_class;
  std::map<Cell, std::string> class_key;
  for (const auto& g : translators) {
    auto tw = generate_toeplitz_at(x.tower, x.marking, x.depth, x.data.window,
                                   act(g, x.base));
    std::string key = layout_key(per_sets(tw, level));
    Cell cls = tw.base.cell(level);
    rep.classes[key].push_back(g);
    auto [it, fresh] = key_class.emplace(key, cls);
    if (!fresh && it->second != cls)
      rep.violations.push_back("translators of classes " + std::to_string(cls) +
                               " and " + std::to_string(it->second) +
                               " share a layout");
    auto [it2, fresh2] = class_key.emplace(cls, key);
    if (!fresh2 && it2->second != key)
      rep.violations.push_back("class " + std::to_string(cls) +
                               " shows two different layouts");
  }
  return rep;
}

FactorResult factor_to_odometer(const ToeplitzWindow& x, int depth) {
  if (depth < 1 || depth > x.depth)
    throw LevelOutOfRange("factor depth outside the generation depth");
  const auto& chain = x.chain();
  auto tower = x.tower;
  const auto& w = x.data.window;
  // which symbols some stage in (n, generation depth] can still produce
  std::vector<std::vector<char>> producible(static_cast<size_t>(depth) + 1,
                                            std::vector<char>(x.data.alphabet.size(), 0));
  for (int n = 0; n <= depth; ++n)
    for (int s = n + 1; s <= x.depth; ++s)
      producible[static_cast<size_t>(n)]
                [static_cast<size_t>(x.marking.symbol_index(s))] = 1;

  std::vector<Cell> chosen;
  for (int n = 1; n <= depth; ++n) {
    Resolver resolver(tower, LevelView::identity(n));
    std::vector<Cell> candidates;
    long long size = chain.index(n);
    for (Cell c = 0; c < size; ++c) {
      if (n > 1 && chain.project(n, c) != chosen.back()) continue;
      OdometerPoint hyp = OdometerPoint::from_top_cell(tower->chain(), n, c);
      bool ok = true;
      for (size_t i = 0; i < w.size() && ok; ++i) {
        CellResolution r = resolver.resolve(hyp, w.cell(i));
        int sym = x.data.symbols[i];
        if (r.resolved()) {
          // captured cells must show exactly the stage symbol
          if (sym != x.marking.symbol_index(r.stage)) ok = false;
        } else if (sym != kHole) {
          // a visible symbol no stage beyond n can produce refutes the
          // hypothesis that the cell is still uncaptured
          if (!producible[static_cast<size_t>(n)][static_cast<size_t>(sym)]) ok = false;
        }
      }
      if (ok) candidates.push_back(c);
    }
    if (candidates.size() != 1) {
      FactorResult res;
      res.note = "level " + std::to_string(n) + ": " +
                 std::to_string(candidates.size()) + " candidate classes";
      return res;
    }
    chosen.push_back(candidates.front());
  }
  FactorResult res;
  res.point = OdometerPoint(tower->chain(), std::move(chosen));
  return res;
}

}  // namespace odoforge

#include "odoforge/tower.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "odoforge/errors.hpp"

namespace odoforge {

using nlohmann::json;

namespace {

// Deterministic shortest-word lift of every class of the given level:
// breadth-first over the quotient, letters in generator order, inverses
// after the generator. First arrival is the (length, lex)-minimal word.
std::vector<GroupWord> bfs_class_words(const QuotientChain& chain, int level) {
  if (chain.backend() != Backend::Table)
    throw Error("bfs_class_words is table-backend only");
  long long size = chain.index(level);
  std::vector<GroupWord> words(static_cast<size_t>(size));
  std::vector<char> seen(static_cast<size_t>(size), 0);
  std::deque<Cell> queue;
  words[0] = chain.make_identity();
  seen[0] = 1;
  queue.push_back(0);
  std::vector<std::pair<GroupWord, Cell>> steps;
  for (int g = 1; g <= chain.rank(); ++g) {
    GroupWord gen = GroupWord::table({g});
    steps.emplace_back(gen, chain.coset(level, gen));
    GroupWord ginv = gen.inverse();
    steps.emplace_back(ginv, chain.coset(level, ginv));
  }
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    for (const auto& [gen, img] : steps) {
      Cell nc = chain.qmul(level, c, img);
      if (seen[static_cast<size_t>(nc)]) continue;
      seen[static_cast<size_t>(nc)] = 1;
      words[static_cast<size_t>(nc)] = words[static_cast<size_t>(c)] * gen;
      queue.push_back(nc);
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw ChainInvalid("generator images do not generate the level-" +
                       std::to_string(level) + " quotient");
  return words;
}

// Least-nonnegative-residue lift of a Z^d class.
GroupWord zd_class_word(const QuotientChain& chain, int level, Cell c) {
  const auto& m = chain.moduli(level);
  std::vector<long long> v(m.size());
  long long rem = c;
  for (size_t i = 0; i < m.size(); ++i) {
    v[i] = rem % m[i];
    rem /= m[i];
  }
  return GroupWord::zd(std::move(v));
}

}  // namespace

TransversalTower TransversalTower::build(ChainPtr chain) {
  TransversalTower t;
  t.chain_ = std::move(chain);
  const auto& ch = *t.chain_;
  Level base;
  base.words.push_back(ch.make_identity());
  t.levels_.push_back(std::move(base));

  for (int n = 0; n < ch.depth(); ++n) {
    // kernel classes of level n+1 over level n (all classes at n = 0)
    std::vector<Cell> kernel_cells;
    long long hi = ch.index(n + 1);
    for (Cell c = 0; c < hi; ++c) {
      Cell down = n == 0 ? 0 : ch.project_to(n + 1, n, c);
      if (down == 0) kernel_cells.push_back(c);
    }
    std::vector<GroupWord> reps;
    if (ch.backend() == Backend::Zd) {
      reps.reserve(kernel_cells.size());
      for (Cell c : kernel_cells) reps.push_back(zd_class_word(ch, n + 1, c));
    } else {
      auto lifts = bfs_class_words(ch, n + 1);
      reps.reserve(kernel_cells.size());
      for (Cell c : kernel_cells) reps.push_back(lifts[static_cast<size_t>(c)]);
    }
    // identity class first keeps D_n a prefix of D_{n+1}
    if (kernel_cells.empty() || kernel_cells.front() != 0)
      throw ChainInvalid("kernel of the level-" + std::to_string(n + 1) +
                         " projection lacks the identity class");
    Level next;
    next.kernel_reps = std::move(reps);
    const auto& prev = t.levels_[static_cast<size_t>(n)].words;
    next.words.reserve(next.kernel_reps.size() * prev.size());
    for (const auto& v : next.kernel_reps)
      for (const auto& d : prev) next.words.push_back(t.compose(v, d));
    t.levels_.push_back(std::move(next));
  }
  t.build_indexes();
  return t;
}

GroupWord TransversalTower::compose(const GroupWord& v, const GroupWord& d) const {
  return chain_->side() == Side::Right ? v * d : d * v;
}

void TransversalTower::build_indexes() {
  image_of_prev_.assign(levels_.size(), {});
  for (int n = 1; n <= depth(); ++n) {
    auto& map = image_of_prev_[static_cast<size_t>(n)];
    const auto& words = levels_[static_cast<size_t>(n)].words;
    for (size_t i = 0; i < words.size(); ++i)
      map.emplace(chain_->coset(n, words[i]), static_cast<int>(i));
  }
}

const std::vector<GroupWord>& TransversalTower::level(int n) const {
  if (n < 0 || n > depth()) throw LevelOutOfRange("tower has no level " + std::to_string(n));
  return levels_[static_cast<size_t>(n)].words;
}

const std::vector<GroupWord>& TransversalTower::kernel_reps(int n) const {
  if (n < 1 || n > depth()) throw LevelOutOfRange("no kernel transversal at level " + std::to_string(n));
  return levels_[static_cast<size_t>(n)].kernel_reps;
}

long long TransversalTower::size(int n) const {
  return static_cast<long long>(level(n).size());
}

GroupWord TransversalTower::rep(int n, int idx) const {
  return level(n)[static_cast<size_t>(idx)];
}

GroupWord TransversalTower::translator(int n, int idx) const {
  const GroupWord& d = level(n)[static_cast<size_t>(idx)];
  return chain_->side() == Side::Right ? d.inverse() : d;
}

int TransversalTower::rep_index_by_class(int n, int level_q, Cell c) const {
  if (n == 0) return c == 0 || level_q == 0 ? 0 : -1;
  if (level_q == n) {
    const auto& map = image_of_prev_[static_cast<size_t>(n)];
    auto it = map.find(c);
    return it == map.end() ? -1 : it->second;
  }
  const auto& words = levels_[static_cast<size_t>(n)].words;
  for (size_t i = 0; i < words.size(); ++i)
    if (chain_->coset(level_q, words[i]) == c) return static_cast<int>(i);
  return -1;
}

std::pair<GroupWord, GroupWord> TransversalTower::witness(int n, int idx,
                                                          int j) const {
  if (j < 0 || j > n) throw LevelOutOfRange("witness level outside 0..n");
  GroupWord v = chain_->make_identity();
  long long i = idx;
  for (int l = n; l > j; --l) {
    long long prev_size = size(l - 1);
    long long v_idx = i / prev_size;
    i = i % prev_size;
    const GroupWord& step = levels_[static_cast<size_t>(l)].kernel_reps[static_cast<size_t>(v_idx)];
    v = chain_->side() == Side::Right ? v * step : step * v;
  }
  return {v, level(j)[static_cast<size_t>(i)]};
}

int TransversalTower::coverage_radius() const {
  std::unordered_set<GroupWord, WordHash> have(level(depth()).begin(),
                                               level(depth()).end());
  long long max_norm = 0;
  for (const auto& w : level(depth())) max_norm = std::max(max_norm, w.norm());
  int r = 0;
  while (r < max_norm) {
    bool full = true;
    for (const auto& w : word_ball(chain_->backend(), chain_->rank(), r + 1)) {
      if (w.norm() == r + 1 && !have.count(w)) {
        full = false;
        break;
      }
    }
    if (!full) break;
    ++r;
  }
  return r;
}

json TransversalTower::to_json() const {
  json j;
  j["depth"] = depth();
  json levels = json::array();
  for (int n = 0; n <= depth(); ++n) {
    json lv;
    json words = json::array();
    for (const auto& w : level(n)) words.push_back(w.str());
    lv["words"] = words;
    if (n >= 1) {
      json reps = json::array();
      for (const auto& w : kernel_reps(n)) reps.push_back(w.str());
      lv["kernel_reps"] = reps;
      // factorization triples against the previous level
      json wit = json::array();
      for (size_t i = 0; i < level(n).size(); ++i) {
        auto [v, d] = witness(n, static_cast<int>(i), n - 1);
        wit.push_back(json::array(
            {level(n)[i].str(), v.str(), d.str()}));
      }
      lv["witnesses"] = wit;
    }
    levels.push_back(std::move(lv));
  }
  j["levels"] = levels;
  return j;
}

TransversalTower TransversalTower::from_json(ChainPtr chain, const json& j) {
  TransversalTower t;
  t.chain_ = std::move(chain);
  int depth = j.at("depth").get<int>();
  if (depth != t.chain_->depth())
    throw FormatError("tower depth differs from chain depth");
  const auto& levels = j.at("levels");
  if (static_cast<int>(levels.size()) != depth + 1)
    throw FormatError("tower level count mismatch");
  for (int n = 0; n <= depth; ++n) {
    Level lv;
    for (const auto& ws : levels[static_cast<size_t>(n)].at("words"))
      lv.words.push_back(t.chain_->parse_word(ws.get<std::string>()));
    if (n >= 1)
      for (const auto& ws : levels[static_cast<size_t>(n)].at("kernel_reps"))
        lv.kernel_reps.push_back(t.chain_->parse_word(ws.get<std::string>()));
    t.levels_.push_back(std::move(lv));
  }
  t.build_indexes();
  return t;
}

TowerReport verify_tower(const TransversalTower& t) {
  TowerReport rep;
  const auto& chain = *t.chain();
  auto fail = [&rep](bool& flag, const std::string& msg) {
    flag = false;
    rep.violations.push_back(msg);
  };

  if (t.level(0).size() != 1 || !t.level(0)[0].is_identity())
    fail(rep.nesting_ok, "level 0 must be exactly the identity");
  if (std::find(t.level(1).begin(), t.level(1).end(), chain.make_identity()) ==
      t.level(1).end())
    fail(rep.nesting_ok, "identity missing from level 1");
  for (int n = 0; n < t.depth(); ++n) {
    std::unordered_set<GroupWord, WordHash> next(t.level(n + 1).begin(),
                                                 t.level(n + 1).end());
    for (const auto& w : t.level(n))
      if (!next.count(w)) {
        fail(rep.nesting_ok, "nesting: " + w.str() + " in level " +
                                 std::to_string(n) + " but not level " +
                                 std::to_string(n + 1));
        break;
      }
  }

  for (int n = 1; n <= t.depth(); ++n) {
    std::unordered_set<Cell> classes;
    bool dup = false;
    for (const auto& w : t.level(n))
      if (!classes.insert(chain.coset(n, w)).second) {
        fail(rep.transversal_ok, "duplicate class of " + w.str() +
                                     " at level " + std::to_string(n));
        dup = true;
        break;
      }
    if (!dup && static_cast<long long>(classes.size()) != chain.index(n))
      fail(rep.transversal_ok,
           "level " + std::to_string(n) + " misses " +
               std::to_string(chain.index(n) -
                              static_cast<long long>(classes.size())) +
               " classes");
  }

  for (int n = 0; n < t.depth(); ++n) {
    std::unordered_set<GroupWord, WordHash> target(t.level(n + 1).begin(),
                                                   t.level(n + 1).end());
    for (int j = 1; j <= n && rep.factorization_ok; ++j) {
      std::unordered_set<GroupWord, WordHash> produced;
      for (const auto& v : t.level(n + 1)) {
        if (chain.coset(j, v) != 0) continue;  // keep only v in the level-j subgroup
        for (const auto& d : t.level(j)) {
          GroupWord w = t.compose(v, d);
          if (!target.count(w)) {
            fail(rep.factorization_ok,
                 "factorization at levels (" + std::to_string(n + 1) + "," +
                     std::to_string(j) + "): product " + w.str() +
                     " escapes the level");
            break;
          }
          if (!produced.insert(w).second) {
            fail(rep.factorization_ok,
                 "factorization at levels (" + std::to_string(n + 1) + "," +
                     std::to_string(j) + "): product " + w.str() +
                     " produced twice");
            break;
          }
        }
        if (!rep.factorization_ok) break;
      }
      if (rep.factorization_ok && produced.size() != target.size())
        fail(rep.factorization_ok,
             "factorization at levels (" + std::to_string(n + 1) + "," +
                 std::to_string(j) + "): covers " +
                 std::to_string(produced.size()) + " of " +
                 std::to_string(target.size()) + " elements");
    }
  }

  for (int n = 1; n <= t.depth() && rep.witnesses_ok; ++n) {
    std::unordered_set<GroupWord, WordHash> here(t.level(n).begin(),
                                                 t.level(n).end());
    for (int j = 0; j <= n - 1 && rep.witnesses_ok; ++j) {
      for (size_t i = 0; i < t.level(n).size(); ++i) {
        auto [v, d] = t.witness(n, static_cast<int>(i), j);
        if (t.compose(v, d) != t.level(n)[i]) {
          fail(rep.witnesses_ok, "witness of " + t.level(n)[i].str() +
                                     " at level " + std::to_string(j) +
                                     " does not reconstruct");
          break;
        }
        if (j >= 1 && chain.coset(j, v) != 0) {
          fail(rep.witnesses_ok, "witness factor " + v.str() +
                                     " escapes the level-" + std::to_string(j) +
                                     " subgroup");
          break;
        }
        if (!here.count(v)) {
          fail(rep.witnesses_ok,
               "witness factor " + v.str() + " is not a level-" +
                   std::to_string(n) + " element");
          break;
        }
      }
    }
  }
  return rep;
}

json tower_report_json(const TowerReport& r) {
  json j;
  j["nesting"] = r.nesting_ok;
  j["transversal"] = r.transversal_ok;
  j["factorization"] = r.factorization_ok;
  j["witnesses"] = r.witnesses_ok;
  j["violations"] = r.violations;
  j["pass"] = r.pass();
  return j;
}

ThinningPlan thin_for_p7(const TransversalTower& t, std::optional<int> count) {
  ThinningPlan plan;
  long long prev_size = 1;
  int prev_level = 0;
  for (int i = 1;; ++i) {
    if (count && static_cast<int>(plan.length()) == *count) break;
    Rational bound = pow2(-(i + 1));
    int chosen = 0;
    for (int n = prev_level + 1; n <= t.depth(); ++n) {
      if (Rational(prev_size, t.size(n)) < bound) {
        chosen = n;
        break;
      }
    }
    if (chosen == 0) {
      if (plan.length() == 0)
        throw DepthExhausted("no level satisfies the first ratio bound", 1);
      if (count)
        throw DepthExhausted("chain depth exhausted after " +
                                 std::to_string(plan.length()) + " indices",
                             i);
      break;
    }
    plan.levels.push_back(chosen);
    plan.ratios.push_back(Rational(prev_size, t.size(chosen)));
    prev_size = t.size(chosen);
    prev_level = chosen;
  }
  return plan;
}

Rational full_capture_bound(const TransversalTower& t, const ThinningPlan& p) {
  long long prev = 1;
  for (size_t i = 0; i < p.length(); ++i) {
    int lvl = p.levels[i];
    if (lvl < 1 || lvl > t.depth())
      throw PlanMismatch("plan level outside the tower depth");
    if (i > 0 && lvl <= p.levels[i - 1])
      throw PlanMismatch("plan levels must increase");
    if (p.ratios[i] != Rational(prev, t.size(lvl)))
      throw PlanMismatch("plan ratio differs from the tower sizes at index " +
                         std::to_string(i + 1));
    if (!(p.ratios[i] < pow2(-static_cast<long>(i) - 2)))
      throw PlanMismatch("plan ratio violates the decay bound at index " +
                         std::to_string(i + 1));
    prev = t.size(lvl);
  }
  Rational sum = 0;
  for (const auto& r : p.ratios) sum += r;
  return sum;
}

json plan_to_json(const ThinningPlan& p) {
  json j;
  j["levels"] = p.levels;
  json ratios = json::array();
  for (const auto& r : p.ratios) ratios.push_back(rational_str(r));
  j["ratios"] = ratios;
  return j;
}

ThinningPlan plan_from_json(const json& j) {
  ThinningPlan p;
  p.levels = j.at("levels").get<std::vector<int>>();
  for (const auto& rs : j.at("ratios"))
    p.ratios.push_back(parse_rational(rs.get<std::string>()));
  if (p.levels.size() != p.ratios.size())
    throw FormatError("plan levels and ratios differ in length");
  return p;
}

}  // namespace odoforge

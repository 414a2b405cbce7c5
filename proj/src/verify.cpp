#include "odoforge/verify.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include <nlohmann/json.hpp>

#include "odoforge/errors.hpp"
#include "odoforge/extension.hpp"
#include "odoforge/measure.hpp"
#include "odoforge/parallel.hpp"
#include "odoforge/toeplitz.hpp"

namespace odoforge {

using nlohmann::json;

namespace {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  // unbiased draw in [0, bound)
  std::uint64_t u(std::uint64_t bound) {
    std::uint64_t limit = ~0ULL - (~0ULL % bound);
    for (;;) {
      std::uint64_t v = eng();
      if (v < limit) return v % bound;
    }
  }
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(u(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

std::uint64_t mix_seed(std::uint64_t seed, const std::string& tag) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (char c : tag) h = (h ^ static_cast<std::uint64_t>(c)) * 0x100000001b3ULL;
  return h;
}

GroupWord random_word(const QuotientChain& chain, Rng& rng, int span) {
  if (chain.backend() == Backend::Zd) {
    std::vector<long long> v(static_cast<size_t>(chain.rank()));
    for (auto& c : v) c = rng.range(-span, span);
    return GroupWord::zd(std::move(v));
  }
  int len = static_cast<int>(rng.u(static_cast<std::uint64_t>(span) + 1));
  std::vector<int> letters;
  letters.reserve(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) {
    for (;;) {
      int g = static_cast<int>(rng.u(static_cast<std::uint64_t>(chain.rank()))) + 1;
      int l = rng.u(2) ? g : -g;
      if (!letters.empty() && letters.back() == -l) continue;
      letters.push_back(l);
      break;
    }
  }
  return GroupWord::table(std::move(letters));
}

Window default_window(const QuotientChain& chain) {
  if (chain.backend() == Backend::Zd && chain.rank() == 1)
    return Window::parse(chain, "-16..16");
  if (chain.backend() == Backend::Zd && chain.rank() == 2)
    return Window::parse(chain, "-3..3,-3..3");
  return Window::parse(chain, "ball:4");
}

}  // namespace

long long VerifyReport::violations_total() const {
  long long n = 0;
  for (const auto& c : checks) n += c.violations;
  return n;
}

VerifyReport run_verify_all(const VerifyConfig& config) {
  const ChainPtr chain = config.chain;
  const int depth = config.tower_depth > 0 ? config.tower_depth : chain->depth();
  auto tower = std::make_shared<TransversalTower>(TransversalTower::build(chain));

  std::optional<ThinningPlan> plan;
  std::string plan_note;
  try {
    plan = thin_for_p7(*tower);
  } catch (const DepthExhausted& e) {
    plan_note = e.what();
  }

  const Window window = default_window(*chain);
  const Marking marking = Marking::cycle("ab");
  // exhaustive enumeration depth: largest level with a modest cell count
  int enum_depth = 1;
  for (int n = 1; n <= depth; ++n)
    if (chain->index(n) <= 1024) enum_depth = n;
  const int sweep = config.sweep_cases;
  const std::uint64_t seed = config.seed;

  using CheckFn = std::function<CheckResult()>;
  std::vector<CheckFn> checks;

  checks.push_back([=]() {
    CheckResult r{"chain.structure", true, 0, 0, ""};
    try {
      chain->validate();
      r.cases = chain->depth();
    } catch (const std::exception& e) {
      r.pass = false;
      r.violations = 1;
      r.detail = e.what();
    }
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"chain.coset_homomorphism", true, 0, 0, ""};
    Rng rng(mix_seed(seed, "coset_homomorphism"));
    for (int i = 0; i < 10000; ++i) {
      GroupWord g = random_word(*chain, rng, 16);
      GroupWord h = random_word(*chain, rng, 16);
      int n = static_cast<int>(rng.u(static_cast<std::uint64_t>(depth))) + 1;
      ++r.cases;
      if (chain->coset(n, g * h) !=
          chain->qmul(n, chain->coset(n, g), chain->coset(n, h))) {
        ++r.violations;
        if (r.detail.empty())
          r.detail = "level " + std::to_string(n) + ", words " + g.str() +
                     " and " + h.str();
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"chain.projection_compat", true, 0, 0, ""};
    Rng rng(mix_seed(seed, "projection_compat"));
    for (int i = 0; i < 10000; ++i) {
      GroupWord g = random_word(*chain, rng, 16);
      int n = depth >= 2
                  ? static_cast<int>(rng.u(static_cast<std::uint64_t>(depth - 1))) + 2
                  : 2;
      if (n > depth) break;
      ++r.cases;
      if (chain->project(n, chain->coset(n, g)) != chain->coset(n - 1, g)) {
        ++r.violations;
        if (r.detail.empty())
          r.detail = "level " + std::to_string(n) + ", word " + g.str();
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  // tower properties split per facet so failures name the property
  auto tower_report = std::make_shared<TowerReport>(verify_tower(*tower));
  auto tower_check = [=](const std::string& id, bool TowerReport::* flag) {
    return [=]() {
      CheckResult r{id, (*tower_report).*flag, 1, 0, ""};
      if (!r.pass) {
        r.violations = 1;
        for (const auto& v : tower_report->violations)
          if (r.detail.empty()) r.detail = v;
      }
      return r;
    };
  };
  checks.push_back(tower_check("tower.nesting", &TowerReport::nesting_ok));
  checks.push_back(tower_check("tower.transversal", &TowerReport::transversal_ok));
  checks.push_back(tower_check("tower.factorization", &TowerReport::factorization_ok));
  checks.push_back(tower_check("tower.witnesses", &TowerReport::witnesses_ok));

  checks.push_back([=]() {
    CheckResult r{"plan.ratios", true, 0, 0, ""};
    if (!plan) {
      r.detail = "no admissible plan: " + plan_note;
      return r;
    }
    for (size_t i = 0; i < plan->length(); ++i) {
      ++r.cases;
      if (!(plan->ratios[i] < pow2(-static_cast<long>(i) - 2))) {
        ++r.violations;
        r.detail = "ratio " + rational_str(plan->ratios[i]) + " at index " +
                   std::to_string(i + 1);
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"plan.capture_bound", true, 0, 0, ""};
    if (!plan) {
      r.detail = "no admissible plan: " + plan_note;
      return r;
    }
    Rational bound = full_capture_bound(*tower, *plan);
    r.cases = 1;
    r.detail = rational_str(bound);
    if (!(bound <= Rational(1, 2))) {
      r.pass = false;
      r.violations = 1;
    }
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"stages.partition", true, 0, 0, ""};
    Resolver resolver(tower, LevelView::identity(depth));
    const auto& ch = *chain;
    // direct route: stage-n membership through transversal elements whose
    // own capture stage is exactly n
    std::vector<std::vector<Cell>> fresh(static_cast<size_t>(depth) + 1);
    for (int n = 1; n <= depth; ++n)
      for (const auto& d : tower->level(n - 1))
        if (resolver.min_stage(d).stage == n) fresh[static_cast<size_t>(n)].push_back(ch.coset(n, d));
    Resolver shallow(tower, LevelView::identity(enum_depth));
    for (const auto& z : enumerate_points(chain, enum_depth)) {
      for (const auto& g : window.cells()) {
        ++r.cases;
        int direct_stage = 0;
        int direct_hits = 0;
        for (int n = 1; n <= enum_depth; ++n) {
          Cell target = ch.qmul(n, ch.qinv(n, z.cell(n)), ch.coset(n, g));
          const auto& fr = fresh[static_cast<size_t>(n)];
          if (std::find(fr.begin(), fr.end(), target) != fr.end()) {
            ++direct_hits;
            if (direct_stage == 0) direct_stage = n;
          }
        }
        CellResolution v = shallow.resolve(z, g);
        if (direct_hits > 1 || v.stage != direct_stage) {
          ++r.violations;
          if (r.detail.empty())
            r.detail = "cell " + g.str() + " at point " + z.str() +
                       ": direct stage " + std::to_string(direct_stage) +
                       " (hits " + std::to_string(direct_hits) +
                       ") vs verdict " + std::to_string(v.stage);
        }
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"stages.invariance", true, 0, 0, ""};
    Resolver resolver(tower, LevelView::identity(depth));
    Rng rng(mix_seed(seed, "stages.invariance"));
    for (int i = 0; i < sweep; ++i) {
      GroupWord g = random_word(*chain, rng, 8);
      CellResolution v = resolver.min_stage(g);
      if (!v.resolved()) continue;
      // a word in the level-j subgroup for some j >= stage: draw from the
      // kernel transversals above the stage
      int j = static_cast<int>(
                  rng.u(static_cast<std::uint64_t>(depth - v.stage + 1))) +
              v.stage;
      if (j >= depth) continue;
      const auto& reps = tower->kernel_reps(j + 1);
      GroupWord gamma = reps[rng.u(reps.size())];
      if (chain->coset(j, gamma) != 0) continue;
      ++r.cases;
      CellResolution w = resolver.min_stage(gamma * g);
      if (w.stage != v.stage) {
        ++r.violations;
        if (r.detail.empty())
          r.detail = "word " + g.str() + " stage " + std::to_string(v.stage) +
                     " moved to " + std::to_string(w.stage) + " by " +
                     gamma.str();
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"stages.translation_equivariance", true, 0, 0, ""};
    Resolver resolver(tower, LevelView::identity(depth));
    Rng rng(mix_seed(seed, "stages.translation_equivariance"));
    for (int i = 0; i < sweep; ++i) {
      GroupWord g = random_word(*chain, rng, 8);
      OdometerPoint z = OdometerPoint::from_top_cell(
          chain, depth, static_cast<Cell>(rng.u(static_cast<std::uint64_t>(chain->index(depth)))));
      auto rep = stage_equivariance_check(resolver, z, g, window);
      r.cases += rep.cases;
      r.violations += static_cast<long long>(rep.violations.size());
      if (r.detail.empty() && !rep.violations.empty()) r.detail = rep.violations.front();
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"phi.monotone", true, 0, 0, ""};
    auto sys = PointedWindowSystem::odometer_system(tower, depth, std::min(4, depth));
    Rng rng(mix_seed(seed, "phi.monotone"));
    int rounds = std::max(1, sweep / 20);
    for (int i = 0; i < rounds; ++i) {
      GroupWord y = random_word(*chain, rng, 8);
      auto prev = phi_stage(sys, y, 0, window);
      for (int s = 1; s <= depth; ++s) {
        auto cur = phi_stage(sys, y, s, window);
        for (size_t c = 0; c < window.size(); ++c) {
          if (prev[c].tag == PhiTag::Marker) {
            ++r.cases;
            if (cur[c].tag != PhiTag::Marker ||
                !(cur[c].marker_rep == prev[c].marker_rep)) {
              ++r.violations;
              if (r.detail.empty())
                r.detail = "marker at " + window.cell(c).str() +
                           " changed between stages " + std::to_string(s - 1) +
                           " and " + std::to_string(s);
            }
          }
        }
        prev = std::move(cur);
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"phi.equivariance", true, 0, 0, ""};
    auto sys = PointedWindowSystem::odometer_system(tower, depth, std::min(4, depth));
    Rng rng(mix_seed(seed, "phi.equivariance"));
    for (int i = 0; i < sweep; ++i) {
      GroupWord y = random_word(*chain, rng, 8);
      GroupWord h = random_word(*chain, rng, 8);
      int s = static_cast<int>(rng.u(static_cast<std::uint64_t>(depth))) + 1;
      auto rep = phi_equivariance_check(sys, y, h, s, window);
      r.cases += rep.cases;
      r.violations += static_cast<long long>(rep.violations.size());
      if (r.detail.empty() && !rep.violations.empty()) r.detail = rep.violations.front();
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"phi.pending_exact", true, 0, 0, ""};
    auto sys = PointedWindowSystem::odometer_system(tower, depth, std::min(4, depth));
    Rng rng(mix_seed(seed, "phi.pending_exact"));
    int rounds = std::max(1, sweep / 10);
    Resolver resolver(tower, LevelView::identity(depth));
    for (int i = 0; i < rounds; ++i) {
      GroupWord y = random_word(*chain, rng, 8);
      OdometerPoint b = sys.base(y);
      auto lim = phi_limit(sys, y, window);
      for (size_t c = 0; c < window.size(); ++c) {
        ++r.cases;
        bool unresolved = !resolver.resolve(b, window.cell(c)).resolved();
        if ((lim[c].tag == PhiTag::Pending) != unresolved) {
          ++r.violations;
          if (r.detail.empty()) r.detail = "cell " + window.cell(c).str();
        }
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"extension.fiber_agreement", true, 0, 0, ""};
    int sys_depth = std::max(1, enum_depth - 2);
    int h_level = std::min(depth, sys_depth + 2);
    auto sys = PointedWindowSystem::odometer_system(tower, sys_depth,
                                                    std::min(3, sys_depth));
    std::vector<GroupWord> hs = tower->level(h_level);
    auto samples = sample_extension_window(sys, hs, window, /*dedup=*/false);
    auto rep = fiber_agreement_check(sys, samples, window);
    r.cases = rep.groups;
    r.violations = static_cast<long long>(rep.violations.size());
    if (!rep.violations.empty()) r.detail = rep.violations.front();
    if (rep.nontrivial_groups == 0) r.detail = "no shared-base groups sampled";
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"extension.fiber_relation", true, 0, 0, ""};
    auto sys = PointedWindowSystem::odometer_system(tower, depth, std::min(4, depth));
    Rng rng(mix_seed(seed, "extension.fiber_relation"));
    const auto& ch = *chain;
    for (int i = 0; i < sweep; ++i) {
      GroupWord y = random_word(*chain, rng, 8);
      GroupWord g = random_word(*chain, rng, 8);
      int n = static_cast<int>(rng.u(static_cast<std::uint64_t>(depth))) + 1;
      GroupWord t_y = sys.fiber_coordinate(n, sys.base(y));
      GroupWord t_gy = sys.fiber_coordinate(n, sys.base(g * y));
      ++r.cases;
      // g * t_{n,y} and t_{n,gy} must lie in the same level-n class
      if (ch.coset(n, g * t_y) != ch.coset(n, t_gy)) {
        ++r.violations;
        if (r.detail.empty())
          r.detail = "level " + std::to_string(n) + ", y " + y.str() + ", g " + g.str();
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"toeplitz.periodicity", true, 0, 0, ""};
    auto x = generate_toeplitz(tower, marking, depth, window);
    auto violations = window_periodicity_violations(x);
    r.cases = static_cast<long long>(window.size());
    r.violations = static_cast<long long>(violations.size());
    if (!violations.empty()) r.detail = violations.front();
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"toeplitz.per_disjoint", true, 0, 0, ""};
    auto x = generate_toeplitz(tower, marking, depth, window);
    for (int level = 1; level <= std::min(4, depth); ++level) {
      auto rep = per_sets(x, level);
      std::vector<int> seen;
      ++r.cases;
      for (const auto& cells : rep.per_cells)
        for (int p : cells) {
          if (std::find(seen.begin(), seen.end(), p) != seen.end()) {
            ++r.violations;
            if (r.detail.empty())
              r.detail = "cell position " + std::to_string(p) +
                         " in two period sets at level " + std::to_string(level);
          }
          seen.push_back(p);
        }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"toeplitz.hole_density", true, 0, 0, ""};
    for (int wl = 2; wl <= std::min(depth - 1, 6); ++wl) {
      for (int cutoff : {wl - 1, wl, std::min(wl + 1, depth)}) {
        auto rep = hole_density_check(tower, marking, wl, cutoff);
        ++r.cases;
        if (!rep.pass()) {
          ++r.violations;
          if (r.detail.empty())
            r.detail = "window level " + std::to_string(wl) + " cutoff " +
                       std::to_string(cutoff) + ": " + rational_str(rep.fraction) +
                       " > " + rational_str(rep.bound);
        }
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"toeplitz.factor_roundtrip", true, 0, 0, ""};
    int fdepth = std::min(3, depth);
    // a three-symbol marking keeps consecutive stages visually distinct, so
    // modest windows already separate the candidate classes
    Marking factor_marking = Marking::cycle("abc");
    Rng rng(mix_seed(seed, "toeplitz.factor_roundtrip"));
    int rounds = std::max(1, sweep / 50);
    for (int i = 0; i < rounds; ++i) {
      GroupWord g = random_word(*chain, rng, 8);
      auto tw = translate_toeplitz(tower, factor_marking, depth, window, g);
      auto res = factor_to_odometer(tw, fdepth);
      ++r.cases;
      if (!res.point) {
        ++r.violations;
        if (r.detail.empty()) r.detail = "translate " + g.str() + ": " + res.note;
        continue;
      }
      for (int n = 1; n <= fdepth; ++n)
        if (res.point->cell(n) != chain->coset(n, g)) {
          ++r.violations;
          if (r.detail.empty())
            r.detail = "translate " + g.str() + " misread at level " + std::to_string(n);
          break;
        }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"measure.metric_nesting", true, 0, 0, ""};
    int hi = std::min(depth, 8);
    if (hi < 5) {
      r.detail = "chain too shallow for the nesting ladder";
      return r;
    }
    auto nu = CylinderFamily::uniform(chain, hi);
    auto delta = CylinderFamily::point_mass(OdometerPoint::basepoint(chain, hi), hi);
    for (int n = 1; n + 4 <= hi; ++n) {
      auto coarse = metric_distance(nu, delta, n);
      auto fine = metric_distance(nu, delta, n + 4);
      ++r.cases;
      bool inside = coarse.partial <= fine.partial &&
                    fine.partial + fine.tail <= coarse.partial + coarse.tail;
      if (!inside) {
        ++r.violations;
        if (r.detail.empty())
          r.detail = "levels " + std::to_string(n) + " vs " + std::to_string(n + 4);
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"measure.average_uniform", true, 0, 0, ""};
    int hi = std::min(depth, 4);
    Rng rng(mix_seed(seed, "measure.average_uniform"));
    // point mass plus random rational families
    std::vector<CylinderFamily> inputs;
    inputs.push_back(CylinderFamily::point_mass(
        OdometerPoint::basepoint(chain, hi), hi));
    for (int t = 0; t < 3; ++t) {
      std::vector<Rational> w(static_cast<size_t>(chain->index(hi)));
      Rational total = 0;
      for (auto& v : w) {
        v = Rational(1 + static_cast<long long>(rng.u(16)), 1);
        total += v;
      }
      for (auto& v : w) v /= total;
      inputs.push_back(CylinderFamily::from_level_weights(chain, hi, w, hi));
    }
    for (const auto& lam : inputs) {
      for (int n = 1; n <= hi; ++n) {
        auto avg = average_over_transversal(lam, *tower, n);
        for (int m = 1; m <= n; ++m) {
          ++r.cases;
          Rational want(1, BigInt(chain->index(m)));
          for (const auto& v : avg.level_weights(m))
            if (v != want) {
              ++r.violations;
              if (r.detail.empty())
                r.detail = "marginal at level " + std::to_string(m) +
                           " after averaging at " + std::to_string(n);
              break;
            }
        }
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  checks.push_back([=]() {
    CheckResult r{"measure.defect_chain", true, 0, 0, ""};
    if (!plan) {
      r.detail = "no admissible plan: " + plan_note;
      return r;
    }
    int len = static_cast<int>(plan->length());
    for (int n = 1; n <= len; ++n) {
      long long window_size = tower->size(plan->levels[static_cast<size_t>(n - 1)]);
      for (int k = 0; k <= len + 1; ++k) {
        for (int m = 1; m <= len; ++m) {
          long long points = chain->index(plan->levels[static_cast<size_t>(m - 1)]);
          if (window_size * points > 30000000LL) continue;
          auto bound = vkn_bound(*tower, *plan, n, k, m);
          Rational empirical =
              empirical_unresolved_fraction(*tower, *plan, n, k, m);
          Rational cap = Rational(tower->size(
                             plan->levels[static_cast<size_t>(n - 1)])) *
                         pow2(-k);
          ++r.cases;
          if (!(empirical <= bound.total() && bound.total() <= cap)) {
            ++r.violations;
            if (r.detail.empty())
              r.detail = "(n,k,m) = (" + std::to_string(n) + "," +
                         std::to_string(k) + "," + std::to_string(m) + ")";
          }
        }
      }
    }
    r.pass = r.violations == 0;
    return r;
  });

  VerifyReport report;
  report.checks.resize(checks.size());
  parallel_for(checks.size(), config.jobs,
               [&](size_t i) { report.checks[i] = checks[i](); });
  return report;
}

json verify_report_json(const VerifyConfig& config, const VerifyReport& report) {
  json j;
  j["chain"] = config.chain_label;
  j["seed"] = config.seed;
  j["sweep_cases"] = config.sweep_cases;
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"id", c.id},
                      {"pass", c.pass},
                      {"cases", c.cases},
                      {"violations", c.violations},
                      {"detail", c.detail}});
  }
  j["checks"] = checks;
  j["violations_total"] = report.violations_total();
  j["pass"] = report.pass();
  return j;
}

}  // namespace odoforge

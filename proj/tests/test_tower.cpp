#include <doctest.h>

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "odoforge/errors.hpp"
#include "odoforge/tower.hpp"
#include "test_helpers.hpp"

using namespace odoforge;
using odoforge::test::dyadic_chain;
using odoforge::test::table_chain;
using odoforge::test::z2_chain;

namespace {

// independent greedy oracle over plain integer sizes
std::vector<int> greedy_plan_oracle(const std::vector<long long>& sizes) {
  std::vector<int> out;
  long long prev = 1;
  int last = 0;
  for (int i = 1;; ++i) {
    int chosen = 0;
    for (int n = last + 1; n <= static_cast<int>(sizes.size()); ++n) {
      // prev / sizes[n-1] < 2^-(i+1)  <=>  prev * 2^(i+1) < sizes[n-1]
      if (prev * (1LL << (i + 1)) < sizes[static_cast<size_t>(n - 1)]) {
        chosen = n;
        break;
      }
    }
    if (!chosen) return out;
    out.push_back(chosen);
    prev = sizes[static_cast<size_t>(chosen - 1)];
    last = chosen;
  }
}

std::set<std::vector<long long>> word_set(const std::vector<GroupWord>& ws) {
  std::set<std::vector<long long>> out;
  for (const auto& w : ws) out.insert(w.coords());
  return out;
}

}  // namespace

TEST_CASE("dyadic towers are the nonnegative residues") {
  auto tower = TransversalTower::build(dyadic_chain());
  for (int n = 0; n <= 4; ++n) {
    std::set<std::vector<long long>> want;
    for (long long i = 0; i < (1LL << n); ++i) want.insert({i});
    CHECK(word_set(tower.level(n)) == want);
  }
  // factorization at (j=2, n=2): {0,4} + {0..3}
  auto v_and_d = tower.witness(3, 5, 2);
  CHECK(tower.compose(v_and_d.first, v_and_d.second) == tower.level(3)[5]);
}

TEST_CASE("Z^2 towers biject onto the quotients") {
  auto chain = z2_chain();
  auto tower = TransversalTower::build(chain);
  for (int n = 1; n <= 4; ++n) {
    CHECK(tower.size(n) == chain->index(n));
    std::set<Cell> classes;
    for (const auto& w : tower.level(n)) classes.insert(chain->coset(n, w));
    CHECK(static_cast<long long>(classes.size()) == chain->index(n));
    for (const auto& w : tower.level(n))
      for (long long c : w.coords()) {
        CHECK(c >= 0);
        CHECK(c < (1LL << n));
      }
  }
}

TEST_CASE("built towers verify on all fixtures") {
  for (auto chain : {dyadic_chain(), z2_chain(), table_chain()}) {
    auto tower = TransversalTower::build(chain);
    auto rep = verify_tower(tower);
    CHECK(rep.pass());
    CHECK(rep.violations.empty());
  }
}

TEST_CASE("a corrupted level is caught with a witness") {
  auto chain = dyadic_chain();
  auto tower = TransversalTower::build(chain);
  auto j = tower.to_json();
  // swap the D_2 element 1 for its class-mate 5: still a transversal, but
  // nesting and factorization break
  j["levels"][2]["words"][1] = "5";
  auto bad = TransversalTower::from_json(chain, j);
  auto rep = verify_tower(bad);
  CHECK(!rep.pass());
  CHECK((!rep.nesting_ok || !rep.factorization_ok));
  CHECK(!rep.violations.empty());
  // transversal property survives the swap
  CHECK(rep.transversal_ok);
}

TEST_CASE("depth-0 towers are trivially fine") {
  auto chain = std::make_shared<QuotientChain>(dyadic_chain()->truncated(1));
  auto tower = TransversalTower::build(chain);
  CHECK(tower.level(0).size() == 1);
  CHECK(tower.level(0)[0].is_identity());
  CHECK(verify_tower(tower).pass());
}

TEST_CASE("greedy thinning reproduces the derived sequences") {
  auto dy = TransversalTower::build(dyadic_chain());
  auto plan = thin_for_p7(dy);
  CHECK(plan.levels == std::vector<int>{3, 7, 12});
  std::vector<long long> sizes;
  for (int n = 1; n <= dy.depth(); ++n) sizes.push_back(dy.size(n));
  CHECK(plan.levels == greedy_plan_oracle(sizes));
  CHECK(plan.ratios == std::vector<Rational>{Rational(1, 8), Rational(1, 16),
                                             Rational(1, 32)});

  auto qu = TransversalTower::build(z2_chain());
  auto qplan = thin_for_p7(qu);
  CHECK(qplan.levels == std::vector<int>{2, 4, 7});
  std::vector<long long> qsizes;
  for (int n = 1; n <= qu.depth(); ++n) qsizes.push_back(qu.size(n));
  CHECK(qplan.levels == greedy_plan_oracle(qsizes));

  auto tb = TransversalTower::build(table_chain());
  auto tplan = thin_for_p7(tb);
  CHECK(tplan.levels == std::vector<int>{1, 5});
  CHECK(tplan.ratios == std::vector<Rational>{Rational(1, 6), Rational(1, 16)});
}

TEST_CASE("ratio bounds hold strictly") {
  for (auto chain : {dyadic_chain(), z2_chain(), table_chain()}) {
    auto tower = TransversalTower::build(chain);
    auto plan = thin_for_p7(tower);
    for (size_t i = 0; i < plan.length(); ++i)
      CHECK(plan.ratios[i] < pow2(-static_cast<long>(i) - 2));
  }
}

TEST_CASE("thinning fails cleanly when the chain is too shallow") {
  auto chain = std::make_shared<QuotientChain>(dyadic_chain()->truncated(2));
  auto tower = TransversalTower::build(chain);
  // largest index is 4: the first strict bound 1/|D| < 1/4 is unreachable
  CHECK_THROWS_AS(thin_for_p7(tower), DepthExhausted);
  try {
    thin_for_p7(tower);
  } catch (const DepthExhausted& e) {
    CHECK(e.deepest == 1);
  }
  auto deep = TransversalTower::build(dyadic_chain());
  CHECK_THROWS_AS(thin_for_p7(deep, 5), DepthExhausted);
}

TEST_CASE("capture bound is the exact ratio sum") {
  auto tower = TransversalTower::build(dyadic_chain());
  auto plan = thin_for_p7(tower);
  CHECK(full_capture_bound(tower, plan) == Rational(7, 32));
  ThinningPlan empty;
  CHECK(full_capture_bound(tower, empty) == 0);
  for (auto chain : {dyadic_chain(), z2_chain(), table_chain()}) {
    auto t = TransversalTower::build(chain);
    auto p = thin_for_p7(t);
    CHECK(full_capture_bound(t, p) <= Rational(1, 2));
  }
  // tampered ratios are rejected
  plan.ratios[0] = Rational(1, 4);
  CHECK_THROWS_AS(full_capture_bound(tower, plan), PlanMismatch);
}

TEST_CASE("towers round trip through json") {
  auto chain = table_chain();
  auto tower = TransversalTower::build(chain);
  auto back = TransversalTower::from_json(chain, tower.to_json());
  for (int n = 0; n <= tower.depth(); ++n) CHECK(back.level(n) == tower.level(n));
  CHECK(verify_tower(back).pass());
}

TEST_CASE("coverage radius reports the honest word-ball") {
  auto tower = TransversalTower::build(dyadic_chain());
  // nonnegative residues never contain -1
  CHECK(tower.coverage_radius() == 0);
}

TEST_CASE("witnesses reconstruct on every fixture") {
  for (auto chain : {dyadic_chain(), z2_chain(), table_chain()}) {
    auto tower = TransversalTower::build(chain);
    int top = std::min(4, tower.depth());
    for (int n = 1; n <= top; ++n)
      for (int j = 0; j < n; ++j)
        for (int idx = 0; idx < tower.size(n); ++idx) {
          auto [v, d] = tower.witness(n, idx, j);
          CHECK(tower.compose(v, d) == tower.level(n)[static_cast<size_t>(idx)]);
          if (j >= 1) CHECK(chain->coset(j, v) == 0);
        }
  }
}

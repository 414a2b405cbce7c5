#include <doctest.h>

#include <limits>
#include <random>
#include <type_traits>

#include "odoforge/errors.hpp"
#include "odoforge/measure.hpp"
#include "test_helpers.hpp"

using namespace odoforge;
using odoforge::test::dyadic_chain;
using odoforge::test::table_chain;
using odoforge::test::z2_chain;

// ---- type-level audit: the measure surface is rational end to end ----
static_assert(std::numeric_limits<Rational>::is_exact);
static_assert(!std::numeric_limits<Rational>::is_iec559);
static_assert(!std::is_floating_point_v<Rational>);
static_assert(std::is_same_v<decltype(std::declval<MetricTruncation>().partial), Rational>);
static_assert(std::is_same_v<decltype(std::declval<MetricTruncation>().tail), Rational>);
static_assert(std::is_same_v<decltype(std::declval<DefectBound>().total()), Rational>);
static_assert(
    std::is_same_v<decltype(cell_measure(std::declval<const QuotientChain&>(), 1)),
                   Rational>);
static_assert(std::is_same_v<decltype(empirical_unresolved_fraction(
                                 std::declval<const TransversalTower&>(),
                                 std::declval<const ThinningPlan&>(), 1, 1, 1,
                                 1)),
                             Rational>);
static_assert(
    std::is_same_v<std::decay_t<decltype(std::declval<const CylinderFamily&>()
                                             .weight(1, 0))>,
                   Rational>);

namespace {

// closed-form oracle for the distance between the uniform family and the
// point mass at the basepoint on the dyadic chain:
//   level n contributes 2 (1 - 2^-n) / 4^n; the series sums to 8/21
Rational dyadic_distance_oracle(int level) {
  Rational sum = 0;
  for (int n = 1; n <= level; ++n)
    sum += (pow2(1) - pow2(1 - n)) / (pow2(2 * n));
  return sum;
}

}  // namespace

TEST_CASE("metric partials match the closed form and trap 8/21") {
  auto chain = dyadic_chain();
  auto nu = CylinderFamily::uniform(chain, 14);
  auto delta = CylinderFamily::point_mass(OdometerPoint::basepoint(chain, 14), 14);
  Rational limit(8, 21);
  for (int level : {6, 10, 14}) {
    auto d = metric_distance(nu, delta, level);
    CHECK(d.partial == dyadic_distance_oracle(level));
    CHECK(d.contains(limit));
    CHECK(d.tail == pow2(1 - level));
  }
  // symmetry and identity
  auto swapped = metric_distance(delta, nu, 10);
  CHECK(swapped.partial == metric_distance(nu, delta, 10).partial);
  auto zero = metric_distance(nu, nu, 10);
  CHECK(zero.partial == 0);
  CHECK(zero.contains(Rational(0)));
}

TEST_CASE("re-running the metric four levels deeper lands inside the interval") {
  auto chain = dyadic_chain();
  auto nu = CylinderFamily::uniform(chain, 12);
  auto delta = CylinderFamily::point_mass(
      OdometerPoint::of_word(chain, 12, GroupWord::zd({3})), 12);
  for (int n = 1; n + 4 <= 12; ++n) {
    auto coarse = metric_distance(nu, delta, n);
    auto fine = metric_distance(nu, delta, n + 4);
    CHECK(coarse.partial <= fine.partial);
    CHECK(fine.partial + fine.tail <= coarse.partial + coarse.tail);
  }
}

TEST_CASE("mismatched partitions are rejected") {
  auto nu = CylinderFamily::uniform(dyadic_chain(), 5);
  auto other = CylinderFamily::uniform(z2_chain(), 5);
  CHECK_THROWS_AS(metric_distance(nu, other, 5), FormatError);
}

TEST_CASE("families keep exact marginal consistency") {
  auto chain = z2_chain();
  std::mt19937_64 rng(31);
  std::vector<Rational> weights(static_cast<size_t>(chain->index(3)));
  Rational total = 0;
  for (auto& w : weights) {
    w = Rational(1 + static_cast<long long>(rng() % 9), 1);
    total += w;
  }
  for (auto& w : weights) w /= total;
  auto fam = CylinderFamily::from_level_weights(chain, 3, weights, 5);
  fam.validate();
  for (int n = 1; n <= 5; ++n) {
    Rational sum = 0;
    for (const auto& w : fam.level_weights(n)) sum += w;
    CHECK(sum == 1);
  }
}

TEST_CASE("averaging the invariant family is the identity") {
  auto chain = dyadic_chain();
  auto tower = TransversalTower::build(chain);
  auto nu = CylinderFamily::uniform(chain, 5);
  auto avg = average_over_transversal(nu, tower, 3);
  for (int n = 1; n <= 5; ++n)
    CHECK(avg.level_weights(n) == nu.level_weights(n));
}

TEST_CASE("averaging a point mass flattens the low levels") {
  auto chain = dyadic_chain();
  auto tower = TransversalTower::build(chain);
  auto delta = CylinderFamily::point_mass(OdometerPoint::basepoint(chain, 5), 5);
  auto avg2 = average_over_transversal(delta, tower, 2);
  CHECK(avg2.level_weights(2) ==
        std::vector<Rational>(4, Rational(1, 4)));
  auto avg3 = average_over_transversal(delta, tower, 3);
  CHECK(avg3.level_weights(1) == std::vector<Rational>(2, Rational(1, 2)));
  avg3.validate();
}

TEST_CASE("averages have uniform marginals for random rational inputs") {
  std::mt19937_64 rng(37);
  for (auto chain : {dyadic_chain(), z2_chain(), table_chain()}) {
    int depth = std::min(4, chain->depth());
    auto tower = TransversalTower::build(chain);
    std::vector<Rational> weights(static_cast<size_t>(chain->index(depth)));
    Rational total = 0;
    for (auto& w : weights) {
      w = Rational(1 + static_cast<long long>(rng() % 17), 1);
      total += w;
    }
    for (auto& w : weights) w /= total;
    auto fam = CylinderFamily::from_level_weights(chain, depth, weights, depth);
    for (int n = 1; n <= depth; ++n) {
      auto avg = average_over_transversal(fam, tower, n);
      for (int m = 1; m <= n; ++m) {
        Rational want(1, BigInt(chain->index(m)));
        for (const auto& v : avg.level_weights(m)) CHECK(v == want);
      }
    }
  }
}

TEST_CASE("defect bound reproduces the worked dyadic numbers") {
  auto tower = TransversalTower::build(dyadic_chain());
  auto plan = thin_for_p7(tower);
  REQUIRE(plan.levels == std::vector<int>{3, 7, 12});
  auto b = vkn_bound(tower, plan, 1, 2, 3);
  // |D_3| * ratio_3 = 8/32, plus the geometric tail 8 * 2^-4
  CHECK(b.partial == Rational(1, 4));
  CHECK(b.tail == Rational(1, 2));
  CHECK(b.total() == Rational(3, 4));

  // stage cutoff at or past the horizon: pure tail
  auto pure = vkn_bound(tower, plan, 1, 3, 3);
  CHECK(pure.partial == 0);
  CHECK(pure.tail == Rational(8) * pow2(-4));
  auto deep_cut = vkn_bound(tower, plan, 1, 5, 3);
  CHECK(deep_cut.partial == 0);
  CHECK(deep_cut.tail == Rational(8) * pow2(-6));

  CHECK_THROWS_AS(vkn_bound(tower, plan, 1, 1, 9), PlanMismatch);
}

TEST_CASE("defect bounds cap at window size over 2^k") {
  for (auto chain : {dyadic_chain(), z2_chain(), table_chain()}) {
    auto tower = TransversalTower::build(chain);
    auto plan = thin_for_p7(tower);
    int len = static_cast<int>(plan.length());
    for (int n = 1; n <= len; ++n)
      for (int k = 0; k <= len + 2; ++k)
        for (int m = 1; m <= len; ++m) {
          auto b = vkn_bound(tower, plan, n, k, m);
          Rational cap =
              Rational(tower.size(plan.levels[static_cast<size_t>(n - 1)])) *
              pow2(-k);
          CHECK(b.total() <= cap);
        }
  }
}

TEST_CASE("witnessed fractions stay under the bounds") {
  long long swept = 0;
  for (auto chain : {dyadic_chain(), z2_chain(), table_chain()}) {
    auto tower = TransversalTower::build(chain);
    auto plan = thin_for_p7(tower);
    int len = static_cast<int>(plan.length());
    for (int n = 1; n <= len; ++n) {
      long long wsize = tower.size(plan.levels[static_cast<size_t>(n - 1)]);
      for (int k = 0; k <= len + 1; ++k)
        for (int m = 1; m <= len; ++m) {
          long long pts = chain->index(plan.levels[static_cast<size_t>(m - 1)]);
          if (wsize * pts > 20000000LL) continue;
          auto bound = vkn_bound(tower, plan, n, k, m);
          auto frac = empirical_unresolved_fraction(tower, plan, n, k, m);
          CHECK(frac <= bound.total());
          ++swept;
        }
    }
  }
  CHECK(swept >= 60);
}

TEST_CASE("the single-cell residue example counts three of thirty-two") {
  auto chain = dyadic_chain();
  auto tower = TransversalTower::build(chain);
  // independent residue enumeration over Z_32: capture stage of the cell -1
  // falls in (3, 5] for exactly three base points
  long long expect = 0;
  for (long long z = 0; z < 32; ++z) {
    int stage = 0;
    for (int n = 1; n <= 5; ++n) {
      long long m = 1LL << n;
      long long r = ((-1 - z) % m + m) % m;
      if (r < m / 2) {
        stage = n;
        break;
      }
    }
    if (stage > 3) ++expect;
  }
  CHECK(expect == 3);
  Window w(std::vector<GroupWord>{GroupWord::zd({-1})});
  auto frac = empirical_unresolved_fraction(tower, LevelView::identity(5), w, 3, 5);
  CHECK(frac == Rational(expect, 32));

  // monotone in the cutoff
  Rational prev = 1;
  for (int k = 0; k <= 5; ++k) {
    auto f = empirical_unresolved_fraction(tower, LevelView::identity(5), w, k, 5);
    CHECK(f <= prev);
    prev = f;
  }
}

TEST_CASE("enumeration guards trip on oversized requests") {
  auto tower = TransversalTower::build(dyadic_chain());
  Window w(std::vector<GroupWord>{GroupWord::zd({0})});
  CHECK_THROWS_AS(empirical_unresolved_fraction(tower, LevelView::identity(14),
                                                w, 1, 14, 1000),
                  EnumerationTooLarge);
}

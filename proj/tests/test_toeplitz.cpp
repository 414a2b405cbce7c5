#include <doctest.h>

#include <set>

#include "odoforge/toeplitz.hpp"
#include "test_helpers.hpp"

using namespace odoforge;
using odoforge::test::dyadic_chain;
using odoforge::test::table_chain;
using odoforge::test::z2_chain;

namespace {

std::shared_ptr<const TransversalTower> dyadic_tower() {
  static auto tower =
      std::make_shared<TransversalTower>(TransversalTower::build(dyadic_chain()));
  return tower;
}

}  // namespace

TEST_CASE("the ruler window reads a b a a a b a b") {
  auto x = generate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 5,
                             Window::parse(*dyadic_chain(), "0..7"));
  CHECK(x.data.row_string() == "abaaabab");
  CHECK(window_periodicity_violations(x).empty());
}

TEST_CASE("singleton windows mark the first stage") {
  auto x = generate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 4,
                             Window(std::vector<GroupWord>{GroupWord::zd({0})}));
  CHECK(x.data.row_string() == "a");
}

TEST_CASE("the only depth-4 hole in [-8..8] is -1") {
  auto x = generate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 4,
                             Window::parse(*dyadic_chain(), "-8..8"));
  std::vector<long long> holes;
  for (size_t i = 0; i < x.data.window.size(); ++i)
    if (x.data.symbols[i] == kHole)
      holes.push_back(x.data.window.cell(i).coords()[0]);
  CHECK(holes == std::vector<long long>{-1});
}

TEST_CASE("periodicity audit is exhaustive on all backends") {
  for (auto chain : {dyadic_chain(), z2_chain(), table_chain()}) {
    auto tower = std::make_shared<TransversalTower>(TransversalTower::build(chain));
    Window w = chain->backend() == Backend::Zd
                   ? (chain->rank() == 1 ? Window::parse(*chain, "-12..12")
                                         : Window::parse(*chain, "-3..3,-3..3"))
                   : Window::parse(*chain, "ball:4");
    auto x = generate_toeplitz(tower, Marking::cycle("ab"), chain->depth(), w);
    CHECK(window_periodicity_violations(x).empty());
  }
}

TEST_CASE("period sets at level one split by parity") {
  auto x = generate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 5,
                             Window::parse(*dyadic_chain(), "0..7"));
  auto rep = per_sets(x, 1);
  // even cells all carry 'a'; odd cells are mixed and qualify for nothing
  std::set<int> a_cells(rep.per_cells[0].begin(), rep.per_cells[0].end());
  CHECK(a_cells == std::set<int>{0, 2, 4, 6});
  CHECK(rep.per_cells[1].empty());

  // disjointness across symbols
  for (int p : rep.per_cells[0])
    CHECK(std::find(rep.per_cells[1].begin(), rep.per_cells[1].end(), p) ==
          rep.per_cells[1].end());
}

TEST_CASE("constant windows are periodic everywhere") {
  // threshold beyond the depth keeps every cell on the first symbol
  auto marking = Marking::threshold(10, "ab");
  auto x = generate_toeplitz(dyadic_tower(), marking, 5,
                             Window::parse(*dyadic_chain(), "0..15"));
  CHECK(x.data.row_string() == "aaaaaaaaaaaaaaaa");
  // every level whose orbits stay visible twice certifies the whole window
  for (int n = 1; n <= 3; ++n) {
    auto rep = per_sets(x, n);
    CHECK(rep.per_cells[0].size() == 16);
  }
}

TEST_CASE("top-level period sets need visible orbit mates") {
  auto x = generate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 5,
                             Window::parse(*dyadic_chain(), "0..7"));
  auto rep = per_sets(x, 3);
  // level-3 orbits within [0..7] are singletons: nothing qualifies
  CHECK(rep.orbit_count == 0);
  for (const auto& cells : rep.per_cells) CHECK(cells.empty());

  auto wide = generate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 5,
                                Window::parse(*dyadic_chain(), "0..15"));
  auto rep3 = per_sets(wide, 3);
  CHECK(rep3.orbit_count == 8);
}

TEST_CASE("essential verdicts: ruler is essential, constants are not") {
  auto ruler = generate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 5,
                                 Window::parse(*dyadic_chain(), "0..7"));
  auto v = essential_test(ruler, 1, 8);
  CHECK(v.kind == EssentialVerdict::Kind::Essential);

  auto flat = generate_toeplitz(dyadic_tower(), Marking::threshold(10, "ab"), 5,
                                Window::parse(*dyadic_chain(), "0..7"));
  auto nv = essential_test(flat, 1, 8);
  CHECK(nv.kind == EssentialVerdict::Kind::NotEssential);
  CHECK(dyadic_chain()->coset(1, nv.witness) != 0);

  auto tiny = generate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 5,
                                Window(std::vector<GroupWord>{GroupWord::zd({0})}));
  CHECK(essential_test(tiny, 1, 4).kind == EssentialVerdict::Kind::Inconclusive);
}

TEST_CASE("layout classes match translator congruence") {
  auto x = generate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 6,
                             Window::parse(*dyadic_chain(), "0..15"));
  std::vector<GroupWord> ts;
  for (long long g = 0; g < 16; ++g) ts.push_back(GroupWord::zd({g}));
  auto rep = layout_class_check(x, 2, ts);
  CHECK(rep.pass());
  CHECK(rep.classes.size() == 4);
  for (const auto& [key, members] : rep.classes) {
    CHECK(members.size() == 4);
    for (const auto& g : members)
      CHECK(dyadic_chain()->coset(2, g) ==
            dyadic_chain()->coset(2, members.front()));
  }

  // a first-stage-constant marking has two level-one classes
  auto flat1 = generate_toeplitz(dyadic_tower(), Marking::threshold(1, "ab"), 6,
                                 Window::parse(*dyadic_chain(), "0..15"));
  auto rep1 = layout_class_check(flat1, 1, ts);
  CHECK(rep1.pass());
  CHECK(rep1.classes.size() == 2);

  auto self = layout_class_check(x, 2, {GroupWord::zd({0})});
  CHECK(self.pass());
  CHECK(self.classes.size() == 1);
}

TEST_CASE("factor map reads translates back") {
  auto chain = dyadic_chain();
  auto x = translate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 5,
                              Window::parse(*chain, "0..7"), GroupWord::zd({5}));
  auto res = factor_to_odometer(x, 3);
  REQUIRE(res.point.has_value());
  CHECK(res.point->cells() == std::vector<Cell>{1, 1, 5});

  // base window too small to separate classes
  auto tiny = translate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 5,
                                 Window(std::vector<GroupWord>{GroupWord::zd({0})}),
                                 GroupWord::zd({5}));
  CHECK(!factor_to_odometer(tiny, 3).point.has_value());
}

TEST_CASE("factor map is equivariant on sampled translates") {
  auto chain = dyadic_chain();
  Window w = Window::parse(*chain, "-16..16");
  for (long long g = -5; g <= 5; ++g) {
    auto tw = translate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 6, w,
                                 GroupWord::zd({g}));
    auto res = factor_to_odometer(tw, 3);
    REQUIRE(res.point.has_value());
    for (int n = 1; n <= 3; ++n) CHECK(res.point->cell(n) == chain->coset(n, GroupWord::zd({g})));
    // factoring the h-translate matches acting on the factor image
    GroupWord h = GroupWord::zd({3});
    auto moved = translate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 6, w,
                                    h * GroupWord::zd({g}));
    auto res2 = factor_to_odometer(moved, 3);
    REQUIRE(res2.point.has_value());
    CHECK(*res2.point == act(h, res.point->truncated(3)));
  }
}

TEST_CASE("hole fractions obey the exact tail sums") {
  auto tower = dyadic_tower();
  for (int wl = 2; wl <= 6; ++wl)
    for (int cutoff = 1; cutoff <= wl + 1; ++cutoff) {
      auto rep = hole_density_check(tower, Marking::cycle("ab"), wl, cutoff);
      CHECK(rep.pass());
    }
  // at cutoff >= level + 1 every transversal cell resolves
  auto full = hole_density_check(tower, Marking::cycle("ab"), 4, 5);
  CHECK(full.fraction == 0);
}

TEST_CASE("translate windows agree with the literal translation") {
  // resolve h at base g equals resolving g^-1 h at the basepoint
  auto chain = dyadic_chain();
  Window w = Window::parse(*chain, "-6..6");
  for (long long g = -4; g <= 4; ++g) {
    auto via_point = translate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 6,
                                        w, GroupWord::zd({g}));
    auto literal = generate_toeplitz(dyadic_tower(), Marking::cycle("ab"), 6,
                                     w.translated(GroupWord::zd({-g})));
    for (size_t i = 0; i < w.size(); ++i)
      CHECK(via_point.data.symbols[i] == literal.data.symbols[i]);
  }
}

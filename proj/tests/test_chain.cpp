#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "odoforge/errors.hpp"
#include "odoforge/tower.hpp"
#include "test_helpers.hpp"

using namespace odoforge;
using odoforge::test::dyadic_chain;
using odoforge::test::table_chain;
using odoforge::test::z2_chain;

TEST_CASE("dyadic cosets are residues") {
  auto chain = dyadic_chain();
  // 13 mod 8
  CHECK(chain->coset(3, GroupWord::zd({13})) == 5);
  CHECK(chain->coset(3, chain->make_identity()) == 0);
  CHECK(chain->index(3) == 8);
}

TEST_CASE("Z^2 cosets are componentwise residues") {
  auto chain = z2_chain();
  // (5,-1) mod 4 = (1,3); id = 1 + 4*3
  CHECK(chain->coset(2, GroupWord::zd({5, -1})) == 1 + 4 * 3);
  CHECK(chain->index(2) == 16);
}

TEST_CASE("coset map is a homomorphism on random words") {
  std::mt19937_64 rng(7);
  for (auto chain : {dyadic_chain(), z2_chain(), table_chain()}) {
    for (int i = 0; i < 500; ++i) {
      GroupWord g = chain->backend() == Backend::Zd
                        ? GroupWord::zd(std::vector<long long>(
                              chain->rank(),
                              static_cast<long long>(rng() % 64) - 32))
                        : word_ball(Backend::Table, chain->rank(), 4)[rng() % 161];
      GroupWord h = chain->backend() == Backend::Zd
                        ? GroupWord::zd(std::vector<long long>(
                              chain->rank(),
                              static_cast<long long>(rng() % 64) - 32))
                        : word_ball(Backend::Table, chain->rank(), 4)[rng() % 161];
      int n = static_cast<int>(rng() % chain->depth()) + 1;
      CHECK(chain->coset(n, g * h) ==
            chain->qmul(n, chain->coset(n, g), chain->coset(n, h)));
      if (n >= 2)
        CHECK(chain->project(n, chain->coset(n, g)) == chain->coset(n - 1, g));
    }
  }
}

TEST_CASE("index sizes grow strictly and divide") {
  for (auto chain : {dyadic_chain(), z2_chain(), table_chain()}) {
    for (int n = 1; n < chain->depth(); ++n) {
      CHECK(chain->index(n) < chain->index(n + 1));
      CHECK(chain->index(n + 1) % chain->index(n) == 0);
    }
  }
}

TEST_CASE("broken tables are rejected") {
  auto j = table_chain()->to_json();
  j["table"]["quotients"][0]["mul"][0][0] = 1;  // identity row broken
  CHECK_THROWS_AS(QuotientChain::from_json(j), ChainInvalid);

  auto j2 = dyadic_chain()->to_json();
  j2["zd"]["moduli"][1] = {3};  // 2 does not divide 3
  CHECK_THROWS_AS(QuotientChain::from_json(j2), ChainInvalid);
}

TEST_CASE("conjugation by the identity and on abelian chains is trivial") {
  auto chain = dyadic_chain();
  std::vector<GroupWord> zs(static_cast<size_t>(chain->depth()),
                            chain->make_identity());
  auto conj = chain->conjugated(zs);
  CHECK(conj.to_json() == chain->to_json());
  std::vector<GroupWord> any(static_cast<size_t>(chain->depth()),
                             GroupWord::zd({3}));
  CHECK(chain->conjugated(any).to_json() == chain->to_json());
}

TEST_CASE("table conjugation relabels while preserving membership") {
  auto chain = table_chain();
  // projection-compatible sequence: the same word at every level
  GroupWord z = GroupWord::table({2, 1});  // ba
  std::vector<GroupWord> zs(static_cast<size_t>(chain->depth()), z);
  auto conj = chain->conjugated(zs);
  for (int n = 1; n <= chain->depth(); ++n)
    CHECK(conj.index(n) == chain->index(n));

  // brute-force membership oracle: words gamma in the level subgroup must
  // conjugate into the relabelled subgroup
  auto ball = word_ball(Backend::Table, chain->rank(), 5);
  int checked = 0;
  for (int n = 1; n <= chain->depth(); ++n) {
    for (const auto& gamma : ball) {
      if (chain->coset(n, gamma) != 0) continue;
      CHECK(conj.coset(n, z * gamma * z.inverse()) == 0);
      ++checked;
      if (checked >= 100) break;
    }
    if (checked >= 100) break;
  }
  CHECK(checked >= 100);

  // relabelling law: the new class of g is the old class conjugated
  for (const auto& g : ball) {
    for (int n = 1; n <= chain->depth(); n += 2) {
      Cell c = chain->coset(n, z);
      Cell expect = chain->qmul(n, chain->qmul(n, chain->qinv(n, c), chain->coset(n, g)), c);
      CHECK(conj.coset(n, g) == expect);
    }
  }
}

TEST_CASE("incompatible conjugating sequences are rejected") {
  auto chain = table_chain();
  std::vector<GroupWord> zs(static_cast<size_t>(chain->depth()),
                            chain->make_identity());
  zs[2] = GroupWord::table({2});  // class changes at level 2
  CHECK_THROWS_AS(chain->conjugated(zs), FormatError);
}

#include <doctest.h>

#include "odoforge/errors.hpp"
#include "odoforge/words.hpp"

using namespace odoforge;

TEST_CASE("Z^d product is componentwise addition") {
  auto a = GroupWord::zd({1, 2});
  auto b = GroupWord::zd({3, -2});
  CHECK((a * b) == GroupWord::zd({4, 0}));
  CHECK((a * a.inverse()).is_identity());
}

TEST_CASE("table words reduce freely") {
  // ab * b^-1 a = a^2
  auto ab = GroupWord::table({1, 2});
  auto bia = GroupWord::table({-2, 1});
  CHECK((ab * bia) == GroupWord::table({1, 1}));
  auto w = GroupWord::table({1, 2, -2, -1});
  CHECK(w.is_identity());
  CHECK((ab * ab.inverse()).is_identity());
}

TEST_CASE("backend mixing is rejected") {
  auto a = GroupWord::zd({1});
  auto b = GroupWord::table({1});
  CHECK_THROWS_AS(a * b, BackendMismatch);
  CHECK_THROWS_AS(GroupWord::zd({1}) * GroupWord::zd({1, 2}), BackendMismatch);
}

TEST_CASE("word round trips through text") {
  auto a = GroupWord::zd({5, -1});
  CHECK(GroupWord::parse(Backend::Zd, 2, a.str()) == a);
  auto w = GroupWord::table({1, -2, 1});
  CHECK(w.str() == "ab'a");
  CHECK(GroupWord::parse(Backend::Table, 2, "ab'a") == w);
  CHECK(GroupWord::parse(Backend::Table, 2, "e").is_identity());
}

TEST_CASE("word balls enumerate by norm without repeats") {
  auto ball = word_ball(Backend::Zd, 1, 3);
  REQUIRE(ball.size() == 7);
  CHECK(ball.front().is_identity());
  for (size_t i = 1; i < ball.size(); ++i)
    CHECK(ball[i - 1].norm() <= ball[i].norm());

  auto fball = word_ball(Backend::Table, 2, 2);
  // 1 + 4 + 12 reduced words
  CHECK(fball.size() == 17);
  for (size_t i = 0; i < fball.size(); ++i)
    for (size_t j = i + 1; j < fball.size(); ++j) CHECK(!(fball[i] == fball[j]));
}

TEST_CASE("associativity on random triples") {
  std::vector<GroupWord> pool;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) pool.push_back(GroupWord::zd({i, j}));
  for (size_t a = 0; a < pool.size(); a += 3)
    for (size_t b = 1; b < pool.size(); b += 5)
      for (size_t c = 2; c < pool.size(); c += 7)
        CHECK(((pool[a] * pool[b]) * pool[c]) == (pool[a] * (pool[b] * pool[c])));
  auto words = word_ball(Backend::Table, 2, 2);
  for (size_t a = 0; a < words.size(); a += 2)
    for (size_t b = 0; b < words.size(); b += 3)
      for (size_t c = 0; c < words.size(); c += 5)
        CHECK(((words[a] * words[b]) * words[c]) ==
              (words[a] * (words[b] * words[c])));
}

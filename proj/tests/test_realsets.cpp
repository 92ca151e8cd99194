#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arcs/realsets.hpp"

#include <random>

using namespace arcs;

namespace
{
// independent middle-thirds recursion on (lo, hi) pairs
std::vector<std::pair<Rational, Rational>> cantor_oracle(int level)
{
  std::vector<std::pair<Rational, Rational>> v{{Rational(0), Rational(1)}};
  for (int k = 0; k < level; ++k) {
    std::vector<std::pair<Rational, Rational>> next;
    for (const auto & [a, b] : v) {
      Rational w = (b - a) / 3;
      next.push_back({a, Rational(a + w)});
      next.push_back({Rational(b - w), b});
    }
    v = next;
  }
  return v;
}
}  // namespace

TEST_CASE("cantor levels 0 and 1")
{
  ClosedSet c0 = make_cantor(0, 0, 1);
  REQUIRE(c0.size() == 1);
  CHECK(c0.pieces()[0].lo == 0);
  CHECK(c0.pieces()[0].hi == 1);
  ClosedSet c1 = make_cantor(1, 0, 1);
  REQUIRE(c1.size() == 2);
  CHECK(c1.pieces()[0].hi == Rational(1, 3));
  CHECK(c1.pieces()[1].lo == Rational(2, 3));
}

TEST_CASE("cantor level 2 matches the recursion")
{
  ClosedSet c = make_cantor(2, 0, 1);
  auto o = cantor_oracle(2);
  REQUIRE(c.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(c.pieces()[i].lo == o[i].first);
    CHECK(c.pieces()[i].length() == Rational(1, 9));
  }
  CHECK(c.pieces()[0].hi == Rational(1, 9));
}

TEST_CASE("cantor rejects bad levels")
{
  CHECK_THROWS_AS(make_cantor(-1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_cantor(21, 0, 1), std::invalid_argument);
}

TEST_CASE("cantor refinement is nested and doubles")
{
  for (int k = 0; k < 8; ++k) {
    ClosedSet a = make_cantor(k, 0, 1), b = make_cantor(k + 1, 0, 1);
    CHECK(b.size() == 2 * a.size());
    for (const auto & p : b.pieces()) {
      bool inside = false;
      for (const auto & q : a.pieces()) inside = inside || (q.lo <= p.lo && p.hi <= q.hi);
      CHECK(inside);
    }
  }
}

TEST_CASE("gaps of the level-1 set on the line")
{
  GapList g = gaps(make_cantor(1, 0, 1), Ambient::line());
  REQUIRE(g.bounded.size() == 1);
  CHECK(g.bounded[0].a == Rational(1, 3));
  CHECK(g.bounded[0].b == Rational(2, 3));
  REQUIRE(g.left_ray);
  REQUIRE(g.right_ray);
  CHECK(*g.left_ray == 0);
  CHECK(*g.right_ray == 1);
}

TEST_CASE("gaps of an interval on the line")
{
  GapList g = gaps(ClosedSet({{Rational(0), Rational(1)}}), Ambient::line());
  CHECK(g.bounded.empty());
  CHECK(g.left_ray);
  CHECK(g.right_ray);
}

TEST_CASE("gaps of the level-2 set in [0, 1]")
{
  GapList g = gaps(make_cantor(2, 0, 1), Ambient::interval(0, 1));
  REQUIRE(g.bounded.size() == 3);
  CHECK(g.bounded[0].a == Rational(1, 9));
  CHECK(g.bounded[0].b == Rational(2, 9));
  CHECK(g.bounded[1].a == Rational(1, 3));
  CHECK(g.bounded[1].b == Rational(2, 3));
  CHECK(g.bounded[2].a == Rational(7, 9));
  CHECK(g.bounded[2].b == Rational(8, 9));
  CHECK(!g.left_ray);
  CHECK(!g.left_edge);
  CHECK_THROWS_AS(gaps(ClosedSet(), Ambient::line()), std::invalid_argument);
}

TEST_CASE("gaps and pieces partition the ambient interval")
{
  for (int k = 0; k < 7; ++k) {
    ClosedSet d = make_cantor(k, Rational(1, 7), Rational(5, 7));
    Ambient amb = Ambient::interval(0, 1);
    GapList g = gaps(d, amb);
    Rational total = 0;
    for (const auto & p : d.pieces()) total += p.length();
    for (const auto & q : g.bounded) total += q.b - q.a;
    if (g.left_edge) total += g.left_edge->b - g.left_edge->a;
    if (g.right_edge) total += g.right_edge->b - g.right_edge->a;
    CHECK(total == 1);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      CHECK(g.bounded[i].a == d.pieces()[i].hi);
      CHECK(g.bounded[i].b == d.pieces()[i + 1].lo);
    }
  }
}

TEST_CASE("membership")
{
  ClosedSet c1 = make_cantor(1, 0, 1);
  CHECK(contains(c1, Rational(1, 3)));
  CHECK(!contains(c1, Rational(1, 2)));
  CHECK(contains(make_cantor(2, 0, 1), Rational(2, 9)));
}

TEST_CASE("membership agrees with a linear scan")
{
  ClosedSet d = make_cantor(5, 0, 1);
  auto o = cantor_oracle(5);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-50, 3 * 243 + 50);
  for (int i = 0; i < 1000; ++i) {
    Rational x = ratio(num(rng), 3 * 243);
    bool in = false;
    for (const auto & [a, b] : o) in = in || (a <= x && x <= b);
    CHECK(contains(d, x) == in);
  }
}

TEST_CASE("closed set validation and json round trip")
{
  CHECK_THROWS_AS(ClosedSet({{Rational(1), Rational(0)}}), std::invalid_argument);
  CHECK_THROWS_AS(ClosedSet({{Rational(0), Rational(2)}, {Rational(1), Rational(3)}}), std::invalid_argument);
  ClosedSet d = make_cantor(3, 0, 1);
  ClosedSet e = closed_set_from_json(to_json(d));
  REQUIRE(e.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(e.pieces()[i].lo == d.pieces()[i].lo);
}

TEST_CASE("point sets are degenerate pieces")
{
  ClosedSet p = ClosedSet::points({Rational(0), Rational(1, 2)});
  CHECK(p.all_degenerate());
  CHECK(p.endpoints().size() == 2);
  CHECK(cantor_points(3, 0, 1).size() == 8);
}

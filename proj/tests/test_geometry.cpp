#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arcs/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace arcs;

namespace
{
const double kPi = std::numbers::pi;

// spread of direction angle th (mod pi): worst chord distance to +-v over all pairs
double spread_at(const PointSet & p, double th)
{
  double worst = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      double a = std::atan2(p[j][1] - p[i][1], p[j][0] - p[i][0]);
      double d = std::fmod(std::fabs(a - th), kPi);
      d = std::min(d, kPi - d);
      worst = std::max(worst, 2 * std::sin(d / 2));
    }
  return worst;
}

// 3600-direction grid over [0, pi), then a fine grid around the best cell
double grid_oracle(const PointSet & p, bool refine)
{
  double best = INFINITY, arg = 0;
  for (int i = 0; i < 3600; ++i) {
    double th = kPi * i / 3600, v = spread_at(p, th);
    if (v < best) best = v, arg = th;
  }
  if (!refine) return best;
  double h = kPi / 3600;
  for (int i = -5000; i <= 5000; ++i) best = std::min(best, spread_at(p, arg + h * i / 5000));
  return best;
}

// t strictly inside triangle abc: the barycentric numerators share the sign of the area
// (integer inputs keep every product exact)
bool inside(const Point & a, const Point & b, const Point & c, const Point & t)
{
  auto cross = [](const Point & p, const Point & q, const Point & r) { return (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]); };
  double det = cross(a, b, c);
  if (det == 0) return false;
  double l1 = cross(t, b, c), l2 = cross(a, t, c), l3 = cross(a, b, t);
  return l1 * det > 0 && l2 * det > 0 && l3 * det > 0;
}

PointSet square() { return PointSet::from_doubles({{0, 0}, {1, 0}, {0, 1}, {1, 1}}); }
PointSet triangle_centroid() { return PointSet::from_rationals({{Rational(0), Rational(0)}, {Rational(3), Rational(0)}, {Rational(0), Rational(3)}, {Rational(1), Rational(1)}}); }
}  // namespace

TEST_CASE("direction")
{
  Point r = direction({1, 0}, {0, 0});
  CHECK(r[0] == 1);
  CHECK(r[1] == 0);
  Point s = direction({1, 1}, {0, 0});
  CHECK(s[0] == doctest::Approx(std::sqrt(0.5)));
  Point t = direction({0, 0}, {1, 1});
  CHECK(t[0] == doctest::Approx(-std::sqrt(0.5)));
  CHECK(t[1] == doctest::Approx(-std::sqrt(0.5)));
  CHECK_THROWS_AS(direction({1, 2}, {1, 2}), std::invalid_argument);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 100; ++i) {
    Point x{u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng)};
    Point a = direction(x, y), b = direction(y, x);
    for (int k = 0; k < 3; ++k) CHECK(a[k] == -b[k]);
  }
}

TEST_CASE("trivial directedness")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> pts;
  for (int i = 0; i < 20; ++i) pts.push_back({u(rng), u(rng)});
  CHECK(epsilon_directed(PointSet::from_doubles(pts), std::sqrt(2.0)).directed);
  PointSet line = PointSet::from_rationals({{Rational(0), Rational(0)}, {Rational(1), Rational(2)}, {Rational(3), Rational(6)}});
  CHECK(epsilon_directed(line, 0).directed);
  CHECK(min_direction_spread(line).eps == 0);
}

TEST_CASE("unit square corners")
{
  double expect = 2 * std::sin(33.75 * kPi / 180);
  CHECK(!epsilon_directed(square(), 1.0).directed);
  CHECK(min_direction_spread(square()).eps == doctest::Approx(expect).epsilon(1e-12));
  CHECK(grid_oracle(square(), false) == doctest::Approx(expect).epsilon(1e-3));
  CHECK_THROWS_AS(rotate_to_graph(square()), GeometryError);
}

TEST_CASE("graph of x^2 matches the grid oracle")
{
  std::vector<Point> pts;
  for (int i = 0; i <= 10; ++i) pts.push_back({i / 10.0, i * i / 100.0});
  PointSet p = PointSet::from_doubles(pts);
  CHECK(std::fabs(min_direction_spread(p).eps - grid_oracle(p, true)) <= 1e-6);
}

TEST_CASE("minimal spread is tight")
{
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int s = 0; s < 20; ++s) {
    std::vector<Point> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({u(rng), u(rng)});
    PointSet p = PointSet::from_doubles(pts);
    double e = min_direction_spread(p).eps;
    CHECK(epsilon_directed(p, e).directed);
    CHECK(!epsilon_directed(p, e * (1 - 1e-6)).directed);
    CHECK(std::fabs(e - grid_oracle(p, false)) <= 1e-3);
  }
}

TEST_CASE("squiggles")
{
  SquiggleVerdict v = nonsquiggly_check(triangle_centroid());
  CHECK(!v.nonsquiggly);
  REQUIRE(v.witness);
  CHECK((*v.witness)[3] == 3);
  std::vector<Point> circle;
  for (int i = 0; i < 12; ++i) circle.push_back({std::cos(2 * kPi * i / 12), std::sin(2 * kPi * i / 12)});
  CHECK(nonsquiggly_check(PointSet::from_doubles(circle)).nonsquiggly);
  CHECK(nonsquiggly_check(triangle_centroid(), 1.0).nonsquiggly);
  // a point on an edge is not strictly inside
  PointSet edge = PointSet::from_rationals({{Rational(0), Rational(0)}, {Rational(2), Rational(0)}, {Rational(0), Rational(2)}, {Rational(1), Rational(0)}});
  CHECK(nonsquiggly_check(edge).nonsquiggly);
}

TEST_CASE("four-point sets agree with a barycentric test")
{
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> u(-6, 6);
  for (int s = 0; s < 500; ++s) {
    std::vector<Point> pts;
    while (pts.size() < 4) {
      Point q{double(u(rng)), double(u(rng))};
      if (std::find(pts.begin(), pts.end(), q) == pts.end()) pts.push_back(q);
    }
    bool sq = false;
    for (int t = 0; t < 4; ++t) {
      std::vector<Point> o;
      for (int k = 0; k < 4; ++k)
        if (k != t) o.push_back(pts[k]);
      sq = sq || inside(o[0], o[1], o[2], pts[t]);
    }
    CHECK(nonsquiggly_check(PointSet::from_doubles(pts)).nonsquiggly == !sq);
  }
}

TEST_CASE("non-squiggliness is invariant under similarities")
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int s = 0; s < 30; ++s) {
    std::vector<Point> pts, moved;
    double th = 2 * kPi * u(rng), sc = 0.1 + 5 * u(rng), dx = u(rng), dy = u(rng);
    for (int i = 0; i < 7; ++i) {
      Point q{u(rng), u(rng)};
      pts.push_back(q);
      moved.push_back({sc * (std::cos(th) * q[0] - std::sin(th) * q[1]) + dx, sc * (std::sin(th) * q[0] + std::cos(th) * q[1]) + dy});
    }
    double delta = 0.2 + u(rng);
    CHECK(nonsquiggly_check(PointSet::from_doubles(pts), delta).nonsquiggly ==
          nonsquiggly_check(PointSet::from_doubles(moved), delta * sc).nonsquiggly);
  }
}

TEST_CASE("greedy non-squiggly extraction")
{
  std::vector<Point> circle;
  for (int i = 0; i < 9; ++i) circle.push_back({std::cos(2 * kPi * i / 9), std::sin(2 * kPi * i / 9)});
  CHECK(extract_nonsquiggly(PointSet::from_doubles(circle)).size() == 9);
  auto tri = extract_nonsquiggly(triangle_centroid());
  CHECK(tri.size() == 3);
  CHECK(nonsquiggly_check(triangle_centroid().subset(tri)).nonsquiggly);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> pts;
  for (int i = 0; i < 100; ++i) pts.push_back({u(rng), u(rng)});
  PointSet p = PointSet::from_doubles(pts);
  auto idx = extract_nonsquiggly(p);
  PointSet sub = p.subset(idx);
  CHECK(idx.size() >= 4);
  CHECK(nonsquiggly_check(sub).nonsquiggly);
  CHECK(extract_nonsquiggly(sub).size() == idx.size());
}

TEST_CASE("rotation to a graph")
{
  std::vector<Point> diag, shallow;
  for (int i = 0; i <= 10; ++i) {
    diag.push_back({i / 10.0, i / 10.0});
    shallow.push_back({i / 10.0, 0.2 * i / 10.0});
  }
  GraphTable g = rotate_to_graph(PointSet::from_doubles(diag));
  CHECK(g.max_abs_slope <= 1e-12);
  GraphTable h = rotate_to_graph(PointSet::from_doubles(shallow));
  CHECK(h.max_abs_slope <= 1);
  for (std::size_t i = 1; i < h.x.size(); ++i) CHECK(h.x[i] > h.x[i - 1]);
}

TEST_CASE("exact predicates")
{
  PointQ a{Rational(0), Rational(0)}, b{Rational(1), Rational(1)}, c{Rational(2), Rational(2)}, d{Rational(0), Rational(1)};
  CHECK(orientation_q(a, b, c) == 0);
  CHECK(orientation_q(a, b, d) == 1);
  CHECK(segments_intersect(a, c, b, d));
  CHECK(!segments_intersect(a, b, d, PointQ{Rational(-1), Rational(1)}));
  CHECK_THROWS_AS(PointSet::from_doubles({{0, 0}, {0, 0}}), std::invalid_argument);
}

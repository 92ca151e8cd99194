#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arcs/constructions.hpp"

#include <cmath>

using namespace arcs;

namespace
{
const C2AvoidConstruction & level5()
{
  static const C2AvoidConstruction c = c2_avoider(ClosedSet::points(cantor_points(5, 0, 1)));
  return c;
}
}  // namespace

TEST_CASE("vanishing-derivative function on an interval is degenerate")
{
  VanishingDerivativeF f(ClosedSet({{Rational(0), Rational(1)}}), Ambient::interval(0, 1));
  CHECK(f.degenerate());
  CHECK(!f.strictly_increasing());
  CHECK(f(0.3) == f(0.8));
}

TEST_CASE("vanishing-derivative function on the level-1 set")
{
  ClosedSet d = make_cantor(1, 0, 1);
  VanishingDerivativeF f(d, Ambient::interval(0, 1));
  CHECK(f.derivative(0.5, 1) > 0);
  CHECK(f.derivative(1.0 / 3, 1) == 0);
  CHECK(f.derivative(0.1, 1) == 0);
  // increments agree with quadrature of h_U
  const BumpSum & h = f.h();
  for (auto [a, b] : {std::pair{0.3, 0.5}, std::pair{0.34, 0.66}, std::pair{0.0, 1.0}})
    CHECK(f(b) - f(a) == doctest::Approx(integrate([&](double x) { return h(x); }, a, b, 1e-13)).epsilon(1e-9));
  CHECK(f(1) > f(0));
  CHECK(f(0.2) == f(0.3));
  CHECK(!f.strictly_increasing());
}

TEST_CASE("vanishing-derivative function on a point")
{
  VanishingDerivativeF f(ClosedSet::points({Rational(1, 2)}), Ambient::interval(0, 1));
  CHECK(f.strictly_increasing());
  CHECK(f.derivative(0.5, 1) == 0);
  for (double x : {0.01, 0.2, 0.49, 0.51, 0.9}) CHECK(f.derivative(x, 1) > 0);
  // within 0.05 of the flat point the increments drop below double resolution
  double prev = -INFINITY;
  for (int i = 0; i <= 100; ++i) {
    if (std::fabs(i - 50) < 5) continue;
    double v = f(i / 100.0);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("inverse round trip on the set")
{
  ClosedSet pts = ClosedSet::points(cantor_points(4, 0, 1));
  VanishingDerivativeF f(pts, Ambient::line(), 2, CoeffRule::per_gap);
  const auto & e = f.endpoints();
  const auto & v = f.endpoint_values();
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(f(e[i].get_d()) == doctest::Approx(v[i].get_d()).epsilon(1e-12));
    CHECK(f.inverse(v[i].get_d()) == doctest::Approx(e[i].get_d()).epsilon(1e-9).scale(1));
  }
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
}

TEST_CASE("convex construction is non-squiggly")
{
  const auto & c = level5();
  PointSet p = c.graph();
  CHECK(p.size() == 32);
  CHECK(nonsquiggly_check(p).nonsquiggly);
  // exact convexity of the graph: consecutive chord slopes increase
  for (std::size_t i = 2; i < c.k().size(); ++i) {
    Rational s1 = (c.psi_k()[i - 1] - c.psi_k()[i - 2]) / (c.k()[i - 1] - c.k()[i - 2]);
    Rational s2 = (c.psi_k()[i] - c.psi_k()[i - 1]) / (c.k()[i] - c.k()[i - 1]);
    CHECK(s2 > s1);
  }
  CHECK_THROWS_AS(c2_avoider(ClosedSet::points({Rational(0)})), std::invalid_argument);
}

TEST_CASE("phi is nondecreasing and inverts f")
{
  const auto & c = level5();
  auto s = c.sample(10000);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].phi >= s[i - 1].phi);
  for (std::size_t i = 0; i < c.k().size(); ++i) CHECK(c.phi(c.k()[i].get_d()) == doctest::Approx(c.set().endpoints()[i].get_d()).epsilon(1e-9).scale(1));
}

TEST_CASE("psi is a primitive of phi")
{
  const auto & c = level5();
  double a = c.k()[3].get_d(), b = c.k()[9].get_d();
  // midpoint rule: phi is monotone, so the error is at most (b - a) (phi(b) - phi(a)) / n
  const int n = 100000;
  double q = 0;
  for (int i = 0; i < n; ++i) q += c.phi(a + (i + 0.5) * (b - a) / n);
  q *= (b - a) / n;
  CHECK(std::fabs(c.psi(b) - c.psi(a) - q) <= (b - a) * (c.phi(b) - c.phi(a)) / n);
}

TEST_CASE("double inequality near K")
{
  DoubleInequalityReport r = check_double_inequality(level5(), {1e-3, 1e-5});
  CHECK(r.checks > 0);
  CHECK(r.violations == 0);
}

TEST_CASE("second difference quotient in comparison mode")
{
  auto psi = [](double x) { return x * x; };
  auto phi = [](double x) { return 2 * x; };
  for (double x : {-0.7, 0.0, 0.3, 2.0}) {
    StarTable t = star_divergence_test(psi, phi, x, default_t_ladder());
    CHECK(std::fabs(t.rows.back().q - 1) <= 1e-3);
  }
}

TEST_CASE("second difference quotient diverges on K")
{
  const auto & c = level5();
  for (std::size_t i : {std::size_t{0}, std::size_t{7}, std::size_t{20}}) {
    StarTable t = star_divergence_test(c, c.k()[i].get_d(), default_t_ladder());
    CHECK(t.rows.back().q > 1e3);
    CHECK(t.increasing_tail);
  }
  CHECK_THROWS_AS(star_divergence_test(c, c.k()[1].get_d(), {1e-20}), std::domain_error);
}

TEST_CASE("second difference quotient stays bounded in a gap")
{
  const auto & c = level5();
  double y = 0.5 * (c.k()[15].get_d() + c.k()[16].get_d());
  double h = 1e-3 * (c.k()[16].get_d() - c.k()[15].get_d());
  double dphi = (c.phi(y + h) - c.phi(y - h)) / (2 * h);
  double gap = c.k()[16].get_d() - c.k()[15].get_d();
  StarTable t = star_divergence_test(c, y, {gap * 1e-2, gap * 1e-3, gap * 1e-4});
  CHECK(t.rows.back().q == doctest::Approx(dphi / 2).epsilon(1e-3));
}

TEST_CASE("taylor scan")
{
  std::vector<Rational> x, y, z;
  for (int i = 0; i < 10; ++i) {
    Rational q(i * i + 1, 7);
    x.push_back(q);
    y.push_back(q * q);
    z.push_back(3 * q - 2);
  }
  TaylorReport sq = taylor_contradiction_scan(x, y, -INFINITY, INFINITY);
  CHECK(sq.min_dd2 == doctest::Approx(1));
  CHECK(sq.max_dd2 == doctest::Approx(1));
  TaylorReport lin = taylor_contradiction_scan(x, z, -INFINITY, INFINITY);
  CHECK(lin.max_dd2 == 0);
  CHECK_THROWS(taylor_contradiction_scan(x, y, 100, 200));

  C2AvoidConstruction c = c2_avoider(ClosedSet::points(cantor_points(6, 0, 1)));
  TaylorReport r = taylor_contradiction_scan(c.k(), c.psi_k(), -INFINITY, INFINITY);
  CHECK(r.max_dd2 > 100 * r.min_dd2);
  CHECK(r.loglog_slope < 0);
}

TEST_CASE("squiggle witness demo")
{
  SquiggleDemo deep = squiggle_witness_demo(make_cantor(5, 0, 1), 5);
  CHECK(!deep.verdict.nonsquiggly);
  REQUIRE(deep.verdict.witness);
  CHECK(!nonsquiggly_check(deep.points.subset({(*deep.verdict.witness)[0], (*deep.verdict.witness)[1], (*deep.verdict.witness)[2],
                                                (*deep.verdict.witness)[3]}))
             .nonsquiggly);
  SquiggleDemo shallow = squiggle_witness_demo(make_cantor(1, 0, 1), 1);
  CHECK(!shallow.note.empty());
}

TEST_CASE("c1 arc through (x, x^2) on a Cantor sample")
{
  std::vector<Point> pts;
  for (const auto & q : make_cantor(4, 0, Rational(2, 5)).endpoints()) pts.push_back({q.get_d(), q.get_d() * q.get_d()});
  C1Arc arc = c1_arc_through(PointSet::from_doubles(pts), 6);
  CHECK(arc.frame == C1Arc::Frame::identity);
  CHECK(arc.max_interp_error <= 1e-9);
  for (const auto & p : pts) CHECK(arc.at(p[0])[0] == doctest::Approx(p[1]).epsilon(1e-12).scale(1));
  const SampledDiagonal & s = arc.slope[0];
  for (std::size_t i = 0; i < arc.x.size(); ++i) CHECK(std::fabs(s.ghat[i] - 2 * arc.x[i]) <= std::ldexp(1.0, -6) + s.mesh);
  // the derivative of the arc is continuous across the samples
  const PiecewiseC1 & a = arc.coords[0];
  for (double x : arc.x) {
    double tau = 1e-7;
    double left = (a.value(x) - a.value(x - tau)) / tau, right = (a.value(x + tau) - a.value(x)) / tau;
    CHECK(std::fabs(left - right) <= 1e-4);
  }
}

TEST_CASE("c1 arc through collinear points is the line")
{
  std::vector<Point> pts;
  for (int i = 0; i < 9; ++i) pts.push_back({i / 8.0, 0.5 * i / 8.0 + 1});
  C1Arc arc = c1_arc_through(PointSet::from_doubles(pts), 6);
  for (double x : {0.05, 0.33, 0.71}) CHECK(arc.at(x)[0] == doctest::Approx(0.5 * x + 1).epsilon(1e-12));
}

TEST_CASE("c1 arc through the convex construction")
{
  const auto & c = level5();
  std::vector<PointQ> pts;
  for (std::size_t i = 0; i < c.k().size(); ++i) pts.push_back({c.k()[i], Rational(c.psi_k()[i] / 2)});
  C1Arc arc = c1_arc_through(PointSet::from_rationals(pts), 6);
  CHECK(arc.max_interp_error <= 1e-9);
  CHECK(arc.max_abs_slope <= 1);
}

TEST_CASE("c1 arc rejects undirected input")
{
  CHECK_THROWS_AS(c1_arc_through(PointSet::from_doubles({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 4), GeometryError);
}

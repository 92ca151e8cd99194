#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arcs/flatinterp.hpp"

#include <cmath>
#include <random>

using namespace arcs;

namespace
{
PolygonalArc axis_data(unsigned J)
{
  std::vector<PointQ> xs;
  for (unsigned j = 0; j < J; ++j) xs.push_back({pow_of(Rational(1, 2), j * j), Rational(0)});
  return polygonal_arc_data(xs);
}

FlatPathData two_points(const PointQ & p, const PointQ & q) { return {{Rational(0), Rational(1)}, {p, q}}; }
}  // namespace

TEST_CASE("flatness constants of the axis sequence")
{
  PolygonalArc arc = axis_data(6);
  for (unsigned a = 0; a <= 6; ++a) CHECK(certify_flatness_bound(arc.data, static_cast<int>(a), pow_of(Rational(2), 1 + a + a * a)));
  FlatnessTable t = flatness_constants(arc.data, 6);
  for (int a = 0; a <= 6; ++a) CHECK(t.M[static_cast<std::size_t>(a)] <= std::ldexp(1.0, 1 + a + a * a));
  // M_0 is the diameter of the samples
  CHECK(t.M[0] == 1);
}

TEST_CASE("flatness constants by exhaustive pairs")
{
  FlatPathData c{{Rational(0), Rational(1, 3), Rational(1)}, {{Rational(5)}, {Rational(5)}, {Rational(5)}}};
  for (double m : flatness_constants(c, 4).M) CHECK(m == 0);
  FlatPathData id{{Rational(0), Rational(1, 2), Rational(1)}, {{Rational(0)}, {Rational(1, 2)}, {Rational(1)}}};
  FlatnessTable t = flatness_constants(id, 2);
  CHECK(t.M[1] == doctest::Approx(1));
  CHECK(t.M[2] == doctest::Approx(2));
  CHECK(certify_flatness_bound(id, 2, 2));
  CHECK(!certify_flatness_bound(id, 2, Rational(199, 100)));
}

TEST_CASE("single-gap interpolation")
{
  FlatPathData d = two_points({Rational(1), Rational(-2)}, {Rational(3), Rational(4)});
  SmoothFn psi = smooth_step(6);
  InterpolatedPath g = psi_interpolate(d, psi);
  for (double u : {0.0, 0.1, 0.5, 0.77, 1.0}) {
    Point v = g.value(u);
    CHECK(v[0] == doctest::Approx(1 + 2 * psi(u)).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(-2 + 6 * psi(u)).epsilon(1e-12));
  }
  CHECK(g.value(0.5)[0] == doctest::Approx(2).epsilon(1e-12));
  CHECK(g.value(0.5)[1] == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("identity step gives the polygonal chain")
{
  FlatPathData d{{Rational(0), Rational(1, 4), Rational(1)}, {{Rational(0), Rational(0)}, {Rational(1), Rational(2)}, {Rational(3), Rational(2)}}};
  InterpolatedPath g = psi_interpolate(d, linear_step());
  CHECK(g.value(0.125)[0] == doctest::Approx(0.5));
  CHECK(g.value(0.125)[1] == doctest::Approx(1));
  CHECK(g.value(0.625)[0] == doctest::Approx(2));
  CHECK(g.value(0.625)[1] == doctest::Approx(2));
}

TEST_CASE("step functions must fix 0 and 1")
{
  SmoothFn bad([](double x, int k) { return k == 0 ? 0.5 * x : (k == 1 ? 0.5 : 0.0); }, 3, "half");
  CHECK_THROWS_AS(psi_interpolate(two_points({Rational(0)}, {Rational(1)}), bad), std::invalid_argument);
}

TEST_CASE("interpolation identity on gaps")
{
  PolygonalArc arc = axis_data(6);
  SmoothFn psi = smooth_step(12);
  InterpolatedPath g = psi_interpolate(arc.data, psi);
  const auto & d = arc.data.d;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    double a = d[i].get_d(), b = d[i + 1].get_d();
    double ga = arc.data.g[i][0].get_d(), gb = arc.data.g[i + 1][0].get_d();
    for (double s : {0.1, 0.5, 0.9}) {
      double u = a + s * (b - a);
      CHECK(std::fabs(g.value(u)[0] - ga - (gb - ga) * psi(s)) <= 1e-12);
    }
  }
}

TEST_CASE("derivative bounds on the axis sequence")
{
  InterpolatedPath g = psi_interpolate(axis_data(6).data, smooth_step(12));
  FlatBoundReport r = verify_flat_bounds(g, 3, 1000);
  CHECK(r.all_passed);
  REQUIRE(r.rows.size() == 4);
  for (const auto & row : r.rows) {
    CHECK(row.passed);
    CHECK(row.checks > 0);
  }
  CHECK(r.off_set_failure.has_value());
  std::vector<double> b = flat_bound_constants(r.M, r.S, 3);
  for (int k = 0; k <= 3; ++k) CHECK(r.rows[static_cast<std::size_t>(k)].B == b[static_cast<std::size_t>(k)]);
}

TEST_CASE("derivative bounds on a straight segment")
{
  FlatPathData d{{Rational(0), Rational(1, 2), Rational(1)}, {{Rational(0), Rational(0)}, {Rational(1, 2), Rational(1, 2)}, {Rational(1), Rational(1)}}};
  FlatBoundReport r = verify_flat_bounds(psi_interpolate(d, smooth_step(12)), 3, 200);
  CHECK(r.all_passed);
}

TEST_CASE("derivatives are flat at the samples")
{
  InterpolatedPath g = psi_interpolate(axis_data(5).data, smooth_step(12));
  for (double u : {0.0625, 0.5}) {
    for (int k = 1; k <= 3; ++k) {
      CHECK(g.derivative(u, k)[0] == 0);
      double prev = INFINITY;
      for (double tau : {1e-2, 5e-3, 2.5e-3}) {
        double fd = std::fabs(g.derivative(u + tau, k - 1)[0] - g.derivative(u, k - 1)[0]) / tau;
        CHECK(fd <= prev);
        prev = fd;
      }
    }
  }
}

TEST_CASE("polygonal data conditions")
{
  std::vector<PointQ> xs;
  for (unsigned j = 0; j < 6; ++j) xs.push_back({pow_of(Rational(1, 2), j * j), Rational(0)});
  xs[4] = {Rational(0), xs[3][0]};
  try {
    polygonal_arc_data(xs);
    FAIL("expected a rejection");
  } catch (const FlatDataError & e) {
    CHECK(e.index() == 4);
  }
  xs[4] = {Rational(0), Rational(1, 1000)};
  CHECK_THROWS_AS(polygonal_arc_data(xs), FlatDataError);
}

TEST_CASE("polygonal data along a spiral")
{
  // rational points on the unit circle from Pythagorean triples
  const int tri[6][2] = {{1, 0}, {3, 4}, {5, 12}, {8, 15}, {7, 24}, {20, 21}};
  const int hyp[6] = {1, 5, 13, 17, 25, 29};
  std::vector<PointQ> xs;
  for (unsigned j = 0; j < 6; ++j) {
    Rational r = pow_of(Rational(1, 2), j * j);
    xs.push_back({r * Rational(tri[j][0], hyp[j]), r * Rational(tri[j][1], hyp[j])});
  }
  PolygonalArc arc = polygonal_arc_data(xs);
  CHECK(arc.segment_check_done);
  CHECK(arc.segments_meet_only_at_vertices);
  InterpolatedPath g = psi_interpolate(arc.data, smooth_step(6));
  // the step is within rounding of 0 or 1 near gap ends, so sample the gap cores
  std::vector<std::pair<double, Point>> pts;
  const auto & d = arc.data.d;
  for (std::size_t k = 0; k + 1 < d.size(); ++k)
    for (int i = 0; i <= 300; ++i) {
      double u = d[k].get_d() + (0.05 + 0.9 * i / 300.0) * Rational(d[k + 1] - d[k]).get_d();
      pts.push_back({u, g.value(u)});
    }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) CHECK((pts[i].second != pts[j].second));
}

TEST_CASE("cantor arc data along the diagonal")
{
  BoxTree boxes = diagonal_shrink_boxes(2, 2);
  FlatPathData d = cantor_arc_data(2, boxes);
  CHECK(d.d.size() == 5);
  for (std::size_t i = 1; i < d.g.size(); ++i) CHECK(d.g[i][0] > d.g[i - 1][0]);

  InterpolatedPath g = psi_interpolate(d, smooth_step(6));
  // parameters in the cores of the gaps, where the step is resolvable in doubles
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> core(0.05, 0.95);
  std::uniform_int_distribution<std::size_t> gap(0, d.d.size() - 2);
  auto param = [&] {
    std::size_t k = gap(rng);
    return d.d[k].get_d() + core(rng) * Rational(d.d[k + 1] - d.d[k]).get_d();
  };
  for (int i = 0; i < 10000; ++i) {
    double a = param(), b = param();
    if (a == b) continue;
    Point pa = g.value(a), pb = g.value(b);
    CHECK((pa != pb));
    if (a < b) CHECK(pa[0] <= pb[0]);
  }

  FlatPathData z = cantor_arc_data(0, boxes);
  CHECK(z.d.size() == 2);
}

TEST_CASE("cantor arc data rejects oversized boxes")
{
  BoxTree boxes = diagonal_shrink_boxes(2, 2);
  BoxQ & b = boxes.at("01");
  b.hi = {b.lo[0] + Rational(1, 9), b.lo[1]};
  try {
    cantor_arc_data(2, boxes);
    FAIL("expected a rejection");
  } catch (const FlatDataError & e) {
    CHECK(e.address() == "01");
  }
}

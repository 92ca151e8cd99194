#include "arcs/verify.hpp"

#include "arcs/coloring.hpp"
#include "arcs/constructions.hpp"
#include "arcs/flatinterp.hpp"
#include "arcs/geometry.hpp"
#include "arcs/hermite.hpp"
#include "arcs/realsets.hpp"
#include "arcs/smoothtools.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace arcs
{
namespace
{
struct Outcome
{
  bool passed;
  std::string detail;
};

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Outcome hermite_bounds(std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-10, 10), width(1e-3, 10), slope(-10, 10);
  double slope_dev = 0, value_dev = 0, secant_dev = 0;
  bool ok = true;
  for (int i = 0; i < 1000; ++i) {
    double a1 = pos(rng), a2 = a1 + width(rng);
    auto seg = hermite_cubic(a1, a2, pos(rng), pos(rng), slope(rng), slope(rng));
    BoundReport r = verify_hermite_bounds(seg, 1024);
    ok = ok && r.within(1e-9);
    slope_dev = std::max(slope_dev, r.max_slope_dev);
    value_dev = std::max(value_dev, r.max_value_dev);
    secant_dev = std::max(secant_dev, r.max_secant_dev);
  }
  return {ok, "1000 segments; max normalized deviations: slope " + num(slope_dev) + " (<= 3), value " + num(value_dev) +
                  " (<= 2), secant " + num(secant_dev) + " (<= 3)"};
}

// max over D endpoints of |central difference of the extension - h| at step s, in exact arithmetic
Rational central_error(const PiecewiseC1Q & ext, const Rational & s)
{
  Rational worst = 0;
  for (std::size_t i = 0; i < ext.knots().size(); ++i) {
    const Rational & x = ext.knots()[i];
    Rational cd = (ext.value(x + s) - ext.value(x - s)) / (2 * s);
    worst = std::max(worst, abs_of(Rational(cd - ext.slopes()[i])));
  }
  return worst;
}

Outcome c1_extension()
{
  ClosedSet d = make_cantor(6, 0, 1);
  std::ostringstream detail;
  bool ok = true;
  const Rational steps[] = {Rational(1, 100), Rational(1, 1000), Rational(1, 10000), Rational(1, 100000)};
  struct Case
  {
    const char * name;
    std::function<Rational(const Rational &)> f, h;
  };
  const Case cases[] = {
      {"x^2", [](const Rational & x) { return Rational(x * x); }, [](const Rational & x) { return Rational(2 * x); }},
      {"x^4", [](const Rational & x) { return Rational(x * x * x * x); }, [](const Rational & x) { return Rational(4 * x * x * x); }},
  };
  for (const auto & c : cases) {
    PiecewiseC1Q ext = c1_extend(d, c.f, c.h);
    bool interp = true;
    for (const auto & x : ext.knots()) interp = interp && ext.value(x) == c.f(x);
    Rational prev = -1;
    bool decreasing = true;
    detail << c.name << ": interpolation " << (interp ? "exact" : "BROKEN") << ", errors";
    for (const auto & s : steps) {
      Rational e = central_error(ext, s);
      if (prev >= 0 && !(e < prev)) decreasing = false;
      prev = e;
      detail << " " << num(e.get_d());
    }
    detail << (decreasing ? " (decreasing); " : " (NOT decreasing); ");
    ok = ok && interp && decreasing;
  }
  detail << d.endpoints().size() << " endpoints";
  return {ok, detail.str()};
}

Outcome bump_zero_set()
{
  ClosedSet d = make_cantor(6, 0, 1);
  BumpSum h = bump_complement(d, Ambient::hull(d));
  bool zero = true, positive = true, flat = true;
  std::size_t count = 0;
  for (const auto & e : d.endpoints()) {
    ++count;
    zero = zero && h(e.get_d()) == 0;
  }
  for (const auto & t : h.terms())
    if (t.kind == BumpTerm::Kind::bounded) positive = positive && h(0.5 * (t.a + t.b)) > 0;
  // forward, backward and central differences of orders 1..4
  const double s = 1e-3;
  double worst = 0;
  for (const auto & e : d.endpoints()) {
    const double x = e.get_d();
    for (int k = 1; k <= 4; ++k) {
      for (double shift : {0.0, -0.5 * k, -1.0 * k}) {
        double acc = 0, binom = 1;
        for (int j = 0; j <= k; ++j) {
          acc += ((k - j) % 2 ? -binom : binom) * h(x + (j + shift) * s);
          binom = binom * (k - j) / (j + 1);
        }
        worst = std::max(worst, std::fabs(acc / std::pow(s, k)));
      }
    }
  }
  flat = worst <= 1e-6;
  return {zero && positive && flat && count == 128, std::to_string(count) + " endpoints with h = 0: " + (zero ? "yes" : "NO") +
                                                        "; gap midpoints positive: " + (positive ? "yes" : "NO") +
                                                        "; max |finite difference| orders 1-4: " + num(worst) + " (<= 1e-6)"};
}

Outcome star_divergence()
{
  auto c = c2_avoider(ClosedSet::points(cantor_points(5, 0, 1)));
  const std::size_t m = c.k().size();
  bool ok = true;
  double min_last = std::numeric_limits<double>::infinity();
  std::size_t increasing = 0;
  for (int i = 0; i < 10; ++i) {
    std::size_t idx = static_cast<std::size_t>(i) * (m - 2) / 9;  // non-maximal K points, evenly spread
    StarTable tab = star_divergence_test(c, c.k()[idx].get_d(), default_t_ladder());
    min_last = std::min(min_last, tab.rows.back().q);
    ok = ok && tab.rows.back().q > 1e3 && tab.increasing_tail;
    increasing += tab.increasing_tail ? 1 : 0;
  }
  StarTable ctl = star_divergence_test([](double x) { return x * x; }, [](double x) { return 2 * x; }, 0.3, default_t_ladder());
  double ctl_err = std::fabs(ctl.rows.back().q - 1);
  ok = ok && ctl_err <= 1e-3;
  return {ok, "10 K points: min Q(x, 1e-4) = " + num(min_last) + " (> 1e3), increasing tails " + std::to_string(increasing) +
                  "/10; control |Q - 1| = " + num(ctl_err)};
}

Outcome squiggle()
{
  auto c = c2_avoider(ClosedSet::points(cantor_points(5, 0, 1)));
  PointSet p = c.graph();
  SquiggleVerdict convex = nonsquiggly_check(p);
  SquiggleDemo demo = squiggle_witness_demo(make_cantor(5, 0, 1), 5);
  bool ok = p.size() == 32 && convex.nonsquiggly && demo.verdict.witness.has_value();
  return {ok, "convex graph (" + std::to_string(p.size()) + " points) non-squiggly: " + (convex.nonsquiggly ? "yes" : "NO") +
                  "; vanishing-derivative graph (" + std::to_string(demo.points.size()) +
                  " points) witness: " + (demo.verdict.witness ? "found" : "none")};
}

Outcome coloring_trees()
{
  CantorAmbient e;
  PairColoring w = distance_coloring(0.1);
  std::ostringstream detail;
  bool ok = true;
  DichotomyResult r = soca_dichotomy(e, w, 6);
  if (const auto * t = std::get_if<ColoringTree>(&r)) {
    TreeCheck chk = verify_connected_tree(*t, w);
    ok = ok && chk.ok;
    detail << "depth-6 tree: " << t->nodes.size() << " nodes, " << chk.pairs_checked << " leaf pairs, " << (chk.ok ? "verified" : "REJECTED");
  } else {
    const auto & f = std::get<FreeSetReport>(r);
    ok = false;
    detail << "depth-6 tree NOT built: no certified split below node '" << f.address << "' [" << num(f.box.lo) << ", "
           << num(f.box.hi) << "] through level " << f.probe_level;
  }
  const char * names[] = {"x^2", "x^3", "sin"};
  std::function<double(double)> fs[] = {[](double x) { return x * x; }, [](double x) { return x * x * x; },
                                        [](double x) { return std::sin(x); }};
  std::function<double(double)> ds[] = {[](double x) { return 2 * x; }, [](double x) { return 3 * x * x; },
                                        [](double x) { return std::cos(x); }};
  for (int i = 0; i < 3; ++i) {
    auto f = fs[i];
    DiagonalExtension de = diagonal_extend([f](double x, double y) { return (f(x) - f(y)) / (x - y); }, e, 6);
    double err = 0;
    for (const auto & l : de.leaves) err = std::max(err, std::fabs(l.ghat - ds[i](l.x)));
    double bound = std::ldexp(1.0, -6) + de.mesh;
    ok = ok && err <= bound;
    detail << "; " << names[i] << " leaf error " << num(err) << " (<= " << num(bound) << ")";
  }
  return {ok, detail.str()};
}

Outcome arc_pipeline()
{
  ClosedSet d = make_cantor(4, 0, Rational(2, 5));
  std::vector<Point> pts;
  for (const auto & q : d.endpoints()) {
    double x = q.get_d();
    pts.push_back({x, x * x});
  }
  C1Arc arc = c1_arc_through(PointSet::from_doubles(pts), 6);
  double err = 0;
  for (std::size_t j = 0; j < arc.x.size(); ++j) err = std::max(err, std::fabs(arc.slope[0].ghat[j] - 2 * arc.x[j]));
  double bound = std::ldexp(1.0, -6) + arc.slope[0].mesh;
  bool ok = arc.frame == C1Arc::Frame::identity && arc.max_interp_error == 0 && err <= bound;
  return {ok, std::to_string(pts.size()) + " samples, max slope " + num(arc.max_abs_slope) + "; interpolation error " +
                  num(arc.max_interp_error) + "; |h - 2x| <= " + num(err) + " (bound " + num(bound) + ")"};
}

Outcome flat_constants()
{
  std::vector<PointQ> xs;
  for (unsigned j = 0; j < 6; ++j) xs.push_back({pow_of(Rational(1, 2), j * j), Rational(0)});
  PolygonalArc arc = polygonal_arc_data(xs);
  bool certified = true;
  for (unsigned a = 0; a <= 6; ++a) certified = certified && certify_flatness_bound(arc.data, static_cast<int>(a), pow_of(Rational(2), 1 + a + a * a));
  InterpolatedPath path = psi_interpolate(arc.data, smooth_step(12));
  FlatBoundReport rep = verify_flat_bounds(path, 3, 1000);
  std::ostringstream detail;
  detail << "M_alpha <= 2^(1+alpha+alpha^2) for alpha <= 6: " << (certified ? "yes" : "NO") << "; derivative bounds k <= 3:";
  for (const auto & r : rep.rows) detail << " k=" << r.k << (r.passed ? " ok" : " FAIL") << " (worst ratio " << num(r.worst_ratio) << ")";
  return {certified && rep.all_passed, detail.str()};
}

Outcome directed_exactness(std::uint64_t seed)
{
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  bool sqrt2 = true;
  const int grid = 3600;
  for (int s = 0; s < 100; ++s) {
    std::vector<Point> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({u(rng), u(rng)});
    PointSet p = PointSet::from_doubles(pts);
    SpreadResult exact = min_direction_spread(p);
    double oracle = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid; ++k) {
      double th = std::numbers::pi * k / grid;
      Point v{std::cos(th), std::sin(th)};
      double spread = 0;
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) {
          Point r = direction(p[i], p[j]);
          double dm = std::hypot(r[0] - v[0], r[1] - v[1]), dp = std::hypot(r[0] + v[0], r[1] + v[1]);
          spread = std::max(spread, std::min(dm, dp));
        }
      oracle = std::min(oracle, spread);
    }
    worst = std::max(worst, std::fabs(oracle - exact.eps));
    DirectionVerdict v = epsilon_directed(p, std::sqrt(2.0));
    sqrt2 = sqrt2 && v.directed && v.certified;
  }
  return {worst <= 1e-3 && sqrt2, "100 sets: max |exact - grid oracle| = " + num(worst) + " (<= 1e-3); every set sqrt(2)-directed: " +
                                      (sqrt2 ? "yes" : "NO")};
}

struct Spec
{
  const char * name;
  double budget;
};

const Spec kSpecs[kCriterionCount] = {
    {"Hermite segment bounds", 5},      {"C1 extension from a Cantor set", 5}, {"bump zero set", 5},
    {"second-difference divergence", 30}, {"non-squiggly convex graph and squiggle witness", 10},
    {"coloring trees and diagonal extension", 20}, {"C1 arc through a directed Cantor sample", 20},
    {"flat constants and interpolation bounds", 10}, {"exact epsilon-directedness", 5},
};
}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed)
{
  if (id < 1 || id > kCriterionCount) throw std::invalid_argument("criterion id must be in 1.." + std::to_string(kCriterionCount));
  CriterionResult r;
  r.id = id;
  r.name = kSpecs[id - 1].name;
  r.budget = kSpecs[id - 1].budget;
  auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    switch (id) {
      case 1: o = hermite_bounds(seed); break;
      case 2: o = c1_extension(); break;
      case 3: o = bump_zero_set(); break;
      case 4: o = star_divergence(); break;
      case 5: o = squiggle(); break;
      case 6: o = coloring_trees(); break;
      case 7: o = arc_pipeline(); break;
      case 8: o = flat_constants(); break;
      case 9: o = directed_exactness(seed); break;
    }
  } catch (const std::exception & e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.passed = o.passed && r.seconds < r.budget;
  r.detail = o.detail;
  if (o.passed && !r.passed) r.detail += "; over the time budget";
  return r;
}

std::vector<CriterionResult> run_all(std::uint64_t seed)
{
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, seed));
  return out;
}

std::string format_line(const CriterionResult & r)
{
  char head[160];
  std::snprintf(head, sizeof head, "%s [%d] %s (%.2f s / %.0f s): ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds, r.budget);
  return head + r.detail;
}

nlohmann::json to_json(const CriterionResult & r)
{
  return {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}, {"budget", r.budget}};
}

}  // namespace arcs

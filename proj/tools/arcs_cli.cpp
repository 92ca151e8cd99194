// arcs: command-line front end for the constructions and their verification suites.
#include "arcs/coloring.hpp"
#include "arcs/constructions.hpp"
#include "arcs/flatinterp.hpp"
#include "arcs/geometry.hpp"
#include "arcs/hermite.hpp"
#include "arcs/io.hpp"
#include "arcs/realsets.hpp"
#include "arcs/smoothtools.hpp"
#include "arcs/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>

using namespace arcs;
using nlohmann::json;

namespace
{
// invalid parameter values found after parsing
struct UsageError : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

struct Context
{
  std::string out = "arcs_out";
  std::uint64_t seed = kDefaultSeed;
  std::filesystem::path dir;

  void json_file(const std::string & name, json j, const std::string & ref) const
  {
    j["paper_ref"] = ref;
    write_atomic(dir / name, dump_json(j));
    std::cout << "wrote " << (dir / name).string() << "\n";
  }
  void csv_file(const std::string & name, const std::vector<std::string> & header, const std::vector<std::vector<double>> & rows) const
  {
    write_atomic(dir / name, make_csv(header, rows));
    std::cout << "wrote " << (dir / name).string() << "\n";
  }
};

Rational rational_arg(const std::string & s, const char * what)
{
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument &) {
    throw UsageError(std::string(what) + ": expected p/q or an integer, got '" + s + "'");
  }
}

PointSet read_points(const std::string & path)
{
  auto rows = read_csv(path);
  if (rows.empty()) throw UsageError(path + ": no points");
  return PointSet::from_doubles(rows);
}

std::vector<double> grid(double lo, double hi, std::size_t n)
{
  std::vector<double> g;
  for (std::size_t i = 0; i < n; ++i) g.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return g;
}

int cmd_cantor(const Context & c, int level, const std::string & lo, const std::string & hi)
{
  ClosedSet d = make_cantor(level, rational_arg(lo, "--lo"), rational_arg(hi, "--hi"));
  std::vector<std::vector<double>> rows;
  for (const auto & p : d.pieces()) rows.push_back({p.lo.get_d(), p.hi.get_d()});
  c.csv_file("cantor.csv", {"lo", "hi"}, rows);
  c.json_file("cantor.json", {{"level", level}, {"set", to_json(d)}, {"pieces", d.size()}}, "middle-thirds Cantor approximation");
  return 0;
}

int cmd_hermite(const Context & c, const std::string & demo, int level, int samples)
{
  std::function<Rational(const Rational &)> f, h;
  if (demo == "identity") {
    f = [](const Rational & x) { return x; };
    h = [](const Rational &) { return Rational(1); };
  } else if (demo == "square") {
    f = [](const Rational & x) { return Rational(x * x); };
    h = [](const Rational & x) { return Rational(2 * x); };
  } else {
    throw UsageError("--demo must be identity or square");
  }
  ClosedSet d = make_cantor(level, 0, 1);
  PiecewiseC1Q ext = c1_extend(d, f, h);
  bool exact = true;
  for (const auto & x : ext.knots()) exact = exact && ext.value(x) == f(x) && ext.slope(x) == h(x);
  BoundReport worst;
  for (const auto & s : to_double(ext).segments()) {
    BoundReport r = verify_hermite_bounds(s);
    worst.max_slope_dev = std::max(worst.max_slope_dev, r.max_slope_dev);
    worst.max_value_dev = std::max(worst.max_value_dev, r.max_value_dev);
    worst.max_secant_dev = std::max(worst.max_secant_dev, r.max_secant_dev);
  }
  std::vector<std::vector<double>> rows;
  for (double x : grid(-0.1, 1.1, static_cast<std::size_t>(samples))) {
    Rational q(x);
    rows.push_back({x, ext.value(q).get_d(), ext.slope(q).get_d()});
  }
  c.csv_file("extension.csv", {"x", "value", "slope"}, rows);
  c.json_file("report.json",
              {{"demo", demo},
               {"level", level},
               {"segments", ext.segments().size()},
               {"interpolates_exactly", exact},
               {"max_slope_deviation", worst.max_slope_dev},
               {"max_value_deviation", worst.max_value_dev},
               {"max_secant_deviation", worst.max_secant_dev},
               {"within_bounds", worst.within()}},
              "C1 extension by bounded Hermite cubics");
  return exact && worst.within() ? 0 : 1;
}

int cmd_bump(const Context & c, int level, int order, const std::string & rule, int samples)
{
  ClosedSet d = make_cantor(level, 0, 1);
  BumpSum h = bump_complement(d, Ambient::hull(d), order, parse_coeff_rule(rule));
  bool zero = true, positive = true;
  for (const auto & e : d.endpoints()) zero = zero && h(e.get_d()) == 0;
  for (const auto & t : h.terms())
    if (t.kind == BumpTerm::Kind::bounded) positive = positive && h(0.5 * (t.a + t.b)) > 0;
  std::vector<std::vector<double>> rows;
  for (double x : grid(0, 1, static_cast<std::size_t>(samples))) rows.push_back({x, h(x), h.derivative(x, 1)});
  c.csv_file("bump.csv", {"x", "h", "h1"}, rows);
  c.json_file("report.json",
              {{"level", level}, {"order", order}, {"rule", rule}, {"terms", h.terms().size()}, {"zero_on_endpoints", zero},
               {"positive_on_gaps", positive}},
              "smooth function vanishing exactly on a closed set");
  return zero && positive ? 0 : 1;
}

int cmd_step(const Context & c, int samples)
{
  const SmoothStep & s = SmoothStep::instance();
  std::vector<std::vector<double>> rows;
  for (double t : grid(0, 1, static_cast<std::size_t>(samples))) rows.push_back({t, s.value(t), s.derivative(t, 1), s.derivative(t, 2)});
  c.csv_file("step.csv", {"t", "psi", "psi1", "psi2"}, rows);
  bool symmetric = std::fabs(s.value(0.5) - 0.5) < 1e-12;
  c.json_file("report.json", {{"norm_constant", s.norm_constant()}, {"sup_norms", s.sup_norms()}, {"psi_half", s.value(0.5)}},
              "smooth step from the standard bump");
  return symmetric ? 0 : 1;
}

int cmd_soca(const Context & c, int depth, const std::string & coloring, double threshold, bool dyadic)
{
  CantorAmbient e;
  if (dyadic) e.kind = CantorAmbient::Kind::dyadic;
  PairColoring w;
  if (coloring == "distance") w = distance_coloring(threshold);
  else if (coloring == "off-diagonal") w = off_diagonal_coloring();
  else if (coloring == "empty") w = empty_coloring();
  else throw UsageError("--coloring must be distance, off-diagonal or empty");
  DichotomyResult r = soca_dichotomy(e, w, depth);
  if (const auto * t = std::get_if<ColoringTree>(&r)) {
    TreeCheck chk = verify_connected_tree(*t, w);
    json j = to_json(*t);
    j["coloring"] = w.name;
    j["verified"] = chk.ok;
    j["pairs_checked"] = chk.pairs_checked;
    j["problems"] = chk.problems;
    c.json_file("tree.json", j, "W-connected Cantor tree");
    return chk.ok ? 0 : 1;
  }
  json j = to_json(std::get<FreeSetReport>(r));
  j["coloring"] = w.name;
  c.json_file("free_set.json", j, "W-free node of the dichotomy");
  return 0;
}

int cmd_directed(const Context & c, const std::string & input, int random_n, double eps)
{
  PointSet p;
  if (!input.empty()) {
    p = read_points(input);
  } else if (random_n >= 2) {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Point> pts;
    for (int i = 0; i < random_n; ++i) pts.push_back({u(rng), u(rng)});
    p = PointSet::from_doubles(pts);
  } else {
    throw UsageError("give --input or --random N (N >= 2)");
  }
  DirectionVerdict v = epsilon_directed(p, eps);
  json j = to_json(v);
  j["points"] = p.size();
  c.json_file("verdict.json", j, "epsilon-directed sets");
  return 0;
}

int cmd_squiggle(const Context & c, const std::string & input, int level, double delta)
{
  if (!input.empty()) {
    PointSet p = read_points(input);
    SquiggleVerdict v = nonsquiggly_check(p, delta);
    c.json_file("verdict.json", to_json(v, p), "non-squiggly sets");
    return 0;
  }
  SquiggleDemo demo = squiggle_witness_demo(make_cantor(level, 0, 1), level);
  json j = to_json(demo.verdict, demo.points);
  j["note"] = demo.note;
  j["level"] = level;
  c.json_file("verdict.json", j, "graph of a smooth increasing function with flat points on a Cantor set");
  return 0;
}

C2AvoidConstruction build_c2(int level, const std::string & rule, int order)
{
  return c2_avoider(ClosedSet::points(cantor_points(level, 0, 1)), {parse_coeff_rule(rule), order});
}

int cmd_c2avoid(const Context & c, int level, int samples, const std::string & rule, int order)
{
  C2AvoidConstruction con = build_c2(level, rule, order);
  PointSet p = con.graph();
  SquiggleVerdict v = nonsquiggly_check(p);
  std::vector<std::vector<double>> prow, srow;
  for (std::size_t i = 0; i < p.size(); ++i) prow.push_back({p[i][0], p[i][1]});
  for (const auto & s : con.sample(static_cast<std::size_t>(samples))) srow.push_back({s.y, s.phi, s.psi});
  c.csv_file("P.csv", {"x", "psi"}, prow);
  c.csv_file("psi.csv", {"y", "phi", "psi"}, srow);
  DoubleInequalityReport di = check_double_inequality(con, {1e-3, 1e-5, 1e-7});
  TaylorReport tr = taylor_contradiction_scan(con.k(), con.psi_k(), -INFINITY, INFINITY);
  json pts = json::array();
  for (std::size_t i = 0; i < con.k().size(); ++i) pts.push_back({to_string(con.k()[i]), to_string(con.psi_k()[i])});
  bool mono = true;
  for (std::size_t i = 1; i < srow.size(); ++i) mono = mono && srow[i][1] >= srow[i - 1][1];
  c.json_file("report.json",
              {{"level", level},
               {"rule", rule},
               {"order", order},
               {"points", p.size()},
               {"nonsquiggly", v.nonsquiggly},
               {"phi_nondecreasing", mono},
               {"double_inequality", {{"checks", di.checks}, {"violations", di.violations}, {"worst_slack", di.worst_slack}}},
               {"second_differences", to_json(tr)},
               {"exact_points", pts}},
              "convex graph over a Cantor set meeting every C2 arc finitely");
  return v.nonsquiggly && mono && di.violations == 0 ? 0 : 1;
}

int cmd_star(const Context & c, int level, int index, double x, std::vector<double> ts, const std::string & rule, int order)
{
  C2AvoidConstruction con = build_c2(level, rule, order);
  if (std::isnan(x)) {
    if (index < 0 || static_cast<std::size_t>(index) >= con.k().size())
      throw UsageError("--index must be in [0, " + std::to_string(con.k().size() - 1) + "]");
    x = con.k()[static_cast<std::size_t>(index)].get_d();
  }
  if (ts.empty()) ts = default_t_ladder();
  StarTable tab = star_divergence_test(con, x, ts);
  json j = to_json(tab);
  j["level"] = level;
  c.json_file("star.json", j, "second difference quotient divergence on K");
  return 0;
}

int cmd_c1arc(const Context & c, const std::string & input, int level, int depth, bool shrink, int samples)
{
  PointSet p;
  if (!input.empty()) {
    p = read_points(input);
  } else {
    std::vector<Point> pts;
    for (const auto & q : make_cantor(level, 0, Rational(2, 5)).endpoints()) pts.push_back({q.get_d(), q.get_d() * q.get_d()});
    p = PointSet::from_doubles(pts);
  }
  C1Arc arc = c1_arc_through(p, depth, shrink);
  std::vector<std::string> header{"x"};
  for (std::size_t i = 0; i < arc.coords.size(); ++i) header.push_back("A" + std::to_string(i + 1));
  std::vector<std::vector<double>> rows;
  for (double x : grid(arc.x.front(), arc.x.back(), static_cast<std::size_t>(samples))) {
    std::vector<double> row{x};
    for (double v : arc.at(x)) row.push_back(v);
    rows.push_back(row);
  }
  c.csv_file("arc.csv", header, rows);
  json slopes = json::array();
  for (const auto & s : arc.slope) slopes.push_back({{"ghat", s.ghat}, {"mesh", s.mesh}});
  const char * frames[] = {"identity", "shrink", "rotation"};
  c.json_file("report.json",
              {{"points", p.size()},
               {"frame", frames[static_cast<int>(arc.frame)]},
               {"shrink", arc.shrink},
               {"rotation", arc.rotation},
               {"max_abs_slope", arc.max_abs_slope},
               {"max_interpolation_error", arc.max_interp_error},
               {"abscissae", arc.x},
               {"slopes", slopes}},
              "C1 arc through a directed Cantor sample");
  return arc.max_interp_error <= 1e-9 ? 0 : 1;
}

int cmd_flat(const Context & c, const std::string & mode, int J, int level, int dim, int k_max, int samples)
{
  FlatPathData data;
  json extra;
  if (mode == "polygonal") {
    std::vector<PointQ> xs;
    for (int j = 0; j < J; ++j) {
      PointQ x(static_cast<std::size_t>(dim), Rational(0));
      x[0] = pow_of(Rational(1, 2), static_cast<unsigned>(j * j));
      xs.push_back(x);
    }
    PolygonalArc arc = polygonal_arc_data(xs);
    data = arc.data;
    extra["segments_meet_only_at_vertices"] = arc.segments_meet_only_at_vertices;
    json cert = json::array();
    for (int a = 0; a <= 6; ++a)
      cert.push_back(certify_flatness_bound(data, a, pow_of(Rational(2), static_cast<unsigned>(1 + a + a * a))));
    extra["certified_2_pow_1_a_a2"] = cert;
  } else if (mode == "cantor") {
    data = cantor_arc_data(level, diagonal_shrink_boxes(level, static_cast<std::size_t>(dim)));
  } else {
    throw UsageError("--mode must be polygonal or cantor");
  }
  InterpolatedPath path = psi_interpolate(data, smooth_step(12));
  FlatBoundReport rep = verify_flat_bounds(path, k_max, samples);
  std::vector<std::string> header{"t"};
  for (int i = 0; i < dim; ++i) header.push_back("g" + std::to_string(i + 1));
  std::vector<std::vector<double>> rows;
  for (double t : grid(0, 1, static_cast<std::size_t>(samples))) {
    std::vector<double> row{t};
    for (double v : path.value(t)) row.push_back(v);
    rows.push_back(row);
  }
  c.csv_file("path.csv", header, rows);
  json j = to_json(rep);
  j["mode"] = mode;
  j["points"] = data.d.size();
  j["flatness"] = to_json(flatness_constants(data, k_max + 4));
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  c.json_file("report.json", j, "flat interpolation through a countable set");
  return rep.all_passed ? 0 : 1;
}

int cmd_verify_all(const Context & c)
{
  json results = json::array();
  bool ok = true;
  double total = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    CriterionResult r = run_criterion(id, c.seed);
    std::cout << format_line(r) << std::endl;
    results.push_back(to_json(r));
    ok = ok && r.passed;
    total += r.seconds;
  }
  std::printf("%s: %s (%.2f s)\n", ok ? "PASS" : "FAIL", "verify-all", total);
  c.json_file("verify_all.json", {{"seed", c.seed}, {"passed", ok}, {"seconds", total}, {"criteria", results}},
              "acceptance criteria 1-9");
  return ok ? 0 : 1;
}
}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Constructions for smooth arcs through Cantor sets, with verification suites"};
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx;
  app.add_option("--out", ctx.out, "Output directory (overridden by $" + std::string(kOutDirEnv) + ")");
  app.add_option("--seed", ctx.seed, "Seed for randomized checks");

  int level = 3, depth = 3, order = 6, samples = 1000, index = 0, random_n = 0, J = 6, dim = 2, k_max = 3;
  std::string lo = "0", hi = "1", demo = "identity", rule = "geometric", coloring = "distance", input, mode = "polygonal";
  double threshold = 0.1, eps = directed_45_eps(), delta = INFINITY, x = NAN;
  bool dyadic = false, shrink = false;
  std::vector<double> ts;
  std::function<int()> run;

  auto * cantor = app.add_subcommand("cantor", "Level-k middle-thirds set");
  cantor->add_option("--level", level)->check(CLI::Range(0, 20));
  cantor->add_option("--lo", lo);
  cantor->add_option("--hi", hi);
  cantor->callback([&] { run = [&] { return cmd_cantor(ctx, level, lo, hi); }; });

  auto * herm = app.add_subcommand("hermite-extend", "C1 extension of demo data from a Cantor set");
  herm->add_option("--demo", demo)->check(CLI::IsMember({"identity", "square"}));
  herm->add_option("--level", level)->check(CLI::Range(0, 12));
  herm->add_option("--samples", samples)->check(CLI::Range(2, 1000000));
  herm->callback([&] { run = [&] { return cmd_hermite(ctx, demo, level, samples); }; });

  auto * bump = app.add_subcommand("bump", "Bump sum vanishing exactly on a Cantor set");
  bump->add_option("--level", level)->check(CLI::Range(0, 12));
  bump->add_option("--order", order)->check(CLI::Range(0, kBumpOrderCap - 1));
  bump->add_option("--rule", rule)->check(CLI::IsMember({"geometric", "per_gap", "uniform"}));
  bump->add_option("--samples", samples)->check(CLI::Range(2, 1000000));
  bump->callback([&] { run = [&] { return cmd_bump(ctx, level, order, rule, samples); }; });

  auto * step = app.add_subcommand("step", "Smooth step table");
  step->add_option("--samples", samples)->check(CLI::Range(2, 1000000));
  step->callback([&] { run = [&] { return cmd_step(ctx, samples); }; });

  auto * soca = app.add_subcommand("soca", "Connected tree or free node for a coloring of a Cantor set");
  soca->add_option("--depth", depth)->check(CLI::Range(0, 12));
  soca->add_option("--coloring", coloring)->check(CLI::IsMember({"distance", "off-diagonal", "empty"}));
  soca->add_option("--threshold", threshold)->check(CLI::Range(0.0, 1.0));
  soca->add_flag("--dyadic", dyadic, "Use dyadic boxes on [0, 1]");
  soca->callback([&] { run = [&] { return cmd_soca(ctx, depth, coloring, threshold, dyadic); }; });

  auto * dir = app.add_subcommand("directed", "Exact epsilon-directedness of a planar point set");
  dir->add_option("--input", input, "CSV with a header row, one point per row")->check(CLI::ExistingFile);
  dir->add_option("--random", random_n, "Use N uniform random points instead")->check(CLI::Range(2, 100000));
  dir->add_option("--eps", eps)->check(CLI::Range(0.0, 2.0));
  dir->callback([&] { run = [&] { return cmd_directed(ctx, input, random_n, eps); }; });

  auto * sq = app.add_subcommand("squiggle", "Non-squiggly check of a CSV, or the Cantor-graph witness demo");
  sq->add_option("--input", input)->check(CLI::ExistingFile);
  sq->add_option("--level", level)->check(CLI::Range(1, 7));
  sq->add_option("--delta", delta)->check(CLI::PositiveNumber);
  sq->callback([&] { run = [&] { return cmd_squiggle(ctx, input, level, delta); }; });

  auto * c2 = app.add_subcommand("c2avoid", "Convex graph over K = f(D)");
  c2->add_option("--level", level)->check(CLI::Range(1, 8));
  c2->add_option("--samples", samples)->check(CLI::Range(2, 1000000));
  c2->add_option("--rule", rule)->check(CLI::IsMember({"geometric", "per_gap", "uniform"}));
  c2->add_option("--order", order)->check(CLI::Range(0, kBumpOrderCap - 1));
  c2->callback([&] {
    if (c2->count("--rule") == 0) rule = "per_gap";
    if (c2->count("--order") == 0) order = 2;
    run = [&] { return cmd_c2avoid(ctx, level, samples, rule, order); };
  });

  auto * star = app.add_subcommand("star-test", "Second difference quotients of psi at a point");
  star->add_option("--level", level)->check(CLI::Range(1, 8));
  star->add_option("--index", index, "Index of the K point");
  star->add_option("--x", x, "Arbitrary abscissa instead of a K point");
  star->add_option("--t", ts, "Step list (nonzero)");
  star->add_option("--rule", rule)->check(CLI::IsMember({"geometric", "per_gap", "uniform"}));
  star->add_option("--order", order)->check(CLI::Range(0, kBumpOrderCap - 1));
  star->callback([&] {
    if (star->count("--rule") == 0) rule = "per_gap";
    if (star->count("--order") == 0) order = 2;
    run = [&] { return cmd_star(ctx, level, index, x, ts, rule, order); };
  });

  auto * arc = app.add_subcommand("c1-arc", "C1 arc through a directed sample");
  arc->add_option("--input", input)->check(CLI::ExistingFile);
  arc->add_option("--level", level)->check(CLI::Range(0, 8));
  arc->add_option("--depth", depth)->check(CLI::Range(0, 30));
  arc->add_flag("--shrink", shrink, "Shrink ordinates instead of rotating when slopes exceed 1");
  arc->add_option("--samples", samples)->check(CLI::Range(2, 1000000));
  arc->callback([&] {
    if (arc->count("--level") == 0) level = 4;
    if (arc->count("--depth") == 0) depth = 6;
    run = [&] { return cmd_c1arc(ctx, input, level, depth, shrink, samples); };
  });

  auto * flat = app.add_subcommand("flat-interp", "Flat interpolation through a polygonal or Cantor skeleton");
  flat->add_option("--mode", mode)->check(CLI::IsMember({"polygonal", "cantor"}));
  flat->add_option("--J", J)->check(CLI::Range(1, 9));
  flat->add_option("--level", level)->check(CLI::Range(0, 6));
  flat->add_option("--dim", dim)->check(CLI::Range(1, 8));
  flat->add_option("--k-max", k_max)->check(CLI::Range(0, 4));
  flat->add_option("--samples", samples)->check(CLI::Range(2, 100000));
  flat->callback([&] {
    if (flat->count("--level") == 0) level = 2;
    run = [&] { return cmd_flat(ctx, mode, J, level, dim, k_max, samples); };
  });

  auto * all = app.add_subcommand("verify-all", "Run every acceptance check");
  all->callback([&] { run = [&] { return cmd_verify_all(ctx); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return 2;
  }
  try {
    ctx.dir = output_dir(ctx.out);
    return run();
  } catch (const UsageError & e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument & e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

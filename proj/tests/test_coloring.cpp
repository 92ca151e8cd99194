#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arcs/coloring.hpp"

#include <cmath>
#include <numbers>

using namespace arcs;

namespace
{
PairColoring everything()
{
  return {[](double x, double y) { return Verdict{x != y, x != y ? 1e9 : 0.0}; }, "everything"};
}

std::pair<double, double> diagonal(double x) { return {x, x}; }

// leaves below the given child of the root
std::vector<const TreeNode *> leaves_under(const ColoringTree & t, char side)
{
  std::vector<const TreeNode *> out;
  for (auto i : t.leaves())
    if (t.nodes[i].address[0] == side) out.push_back(&t.nodes[i]);
  return out;
}
}  // namespace

TEST_CASE("off-diagonal coloring always gives a full tree")
{
  for (int d = 1; d <= 8; ++d) {
    DichotomyResult r = soca_dichotomy(CantorAmbient{}, off_diagonal_coloring(), d);
    REQUIRE(std::holds_alternative<ColoringTree>(r));
    const auto & t = std::get<ColoringTree>(r);
    CHECK(t.leaves().size() == (std::size_t{1} << d));
    if (d <= 6) CHECK(verify_connected_tree(t, off_diagonal_coloring()).ok);
  }
}

TEST_CASE("empty coloring reports the whole set as free")
{
  DichotomyResult r = soca_dichotomy(CantorAmbient{}, empty_coloring(), 3);
  REQUIRE(std::holds_alternative<FreeSetReport>(r));
  const auto & f = std::get<FreeSetReport>(r);
  CHECK(f.address.empty());
  CHECK(f.box.lo == 0);
  CHECK(f.box.hi == 1);
  CHECK(!f.failed_probes.empty());
}

TEST_CASE("distance coloring at depth 3")
{
  PairColoring w = distance_coloring(0.1);
  DichotomyResult r = soca_dichotomy(CantorAmbient{}, w, 3);
  REQUIRE(std::holds_alternative<ColoringTree>(r));
  const auto & t = std::get<ColoringTree>(r);
  CHECK(verify_connected_tree(t, w).ok);
  // exhaustive: every point of P_0 is more than 1/10 from every point of P_1
  auto p0 = t.nodes[static_cast<std::size_t>(t.find("0"))].box, p1 = t.nodes[static_cast<std::size_t>(t.find("1"))].box;
  CHECK(p1.lo - p0.hi > 0.1);
  for (const auto * a : leaves_under(t, '0'))
    for (const auto * b : leaves_under(t, '1')) CHECK(std::fabs(b->box.lo - a->box.hi) > 0.1);
}

TEST_CASE("tree structure")
{
  DichotomyResult r = soca_dichotomy(CantorAmbient{}, distance_coloring(0.01), 4);
  REQUIRE(std::holds_alternative<ColoringTree>(r));
  const auto & t = std::get<ColoringTree>(r);
  for (const auto & n : t.nodes) {
    CHECK(n.box.diam() <= std::ldexp(1.0, -static_cast<int>(n.address.size())) + 1e-15);
    if (n.child[0] < 0) continue;
    const Box & a = t.nodes[static_cast<std::size_t>(n.child[0])].box;
    const Box & b = t.nodes[static_cast<std::size_t>(n.child[1])].box;
    CHECK(n.box.lo <= a.lo);
    CHECK(b.hi <= n.box.hi);
    CHECK(a.hi < b.lo);
  }
}

TEST_CASE("asymmetric colorings are detected")
{
  PairColoring bad{[](double x, double y) { return Verdict{x < y, 1.0}; }, "lower"};
  CHECK_THROWS_AS(soca_dichotomy(CantorAmbient{}, bad, 2), SymmetryError);
}

TEST_CASE("cover refinement")
{
  DichotomyResult r = cover_refine(CantorAmbient{}, {everything()}, 3);
  REQUIRE(std::holds_alternative<ColoringTree>(r));
  for (const auto & n : std::get<ColoringTree>(r).nodes)
    if (n.split) CHECK(n.cover_index == 0);

  const double pi = std::numbers::pi;
  PairColoring steep = direction_cover(diagonal, std::sqrt(2.0), pi / 2 - 0.1, pi + 0.1, "steep");
  PairColoring flat = direction_cover(diagonal, std::sqrt(2.0), 0, pi / 2, "flat");
  DichotomyResult s = cover_refine(CantorAmbient{}, {steep, flat}, 4);
  REQUIRE(std::holds_alternative<ColoringTree>(s));
  for (const auto & n : std::get<ColoringTree>(s).nodes)
    if (n.split) CHECK(n.cover_index == 1);

  try {
    cover_refine(CantorAmbient{}, {steep}, 2);
    FAIL("expected a cover error");
  } catch (const CoverError & e) {
    CHECK(e.pair().first != e.pair().second);
  }
}

TEST_CASE("diagonal extension of exact slopes")
{
  DiagonalExtension c = diagonal_extend([](double, double) { return 0.75; }, CantorAmbient{}, 5);
  for (const auto & l : c.leaves) CHECK(l.ghat == 0.75);
  DiagonalExtension a = diagonal_extend([](double x, double y) { return ((3 * x + 1) - (3 * y + 1)) / (x - y); }, CantorAmbient{}, 5);
  for (const auto & l : a.leaves) CHECK(l.ghat == doctest::Approx(3).epsilon(1e-12));
}

TEST_CASE("diagonal extension recovers derivatives")
{
  for (int d : {4, 6}) {
    DiagonalExtension e = diagonal_extend([](double x, double y) { return x + y; }, CantorAmbient{}, d);
    double err = 0;
    for (const auto & l : e.leaves) err = std::max(err, std::fabs(l.ghat - 2 * l.x));
    CHECK(err <= std::ldexp(1.0, -d) + e.mesh);
    CHECK(e.leaves.size() == (std::size_t{1} << d));
  }
  DiagonalExtension s = diagonal_extend([](double x, double y) { return x == y ? std::cos(x) : (std::sin(x) - std::sin(y)) / (x - y); },
                                        CantorAmbient{}, 6);
  for (const auto & l : s.leaves) CHECK(std::fabs(l.ghat - std::cos(l.x)) <= std::ldexp(1.0, -6) + s.mesh);
}

TEST_CASE("image boxes shrink along the tree")
{
  DiagonalExtension e = diagonal_extend([](double x, double y) { return x * x + x * y + y * y; }, CantorAmbient{}, 6);
  for (const auto & n : e.tree.nodes) {
    if (n.parent < 0) continue;
    const TreeNode & p = e.tree.nodes[static_cast<std::size_t>(n.parent)];
    CHECK(n.img_lo >= p.img_lo);
    CHECK(n.img_hi <= p.img_hi);
    CHECK(n.img_hi - n.img_lo <= std::ldexp(1.0, -static_cast<int>(n.address.size())));
  }
}

TEST_CASE("sampled diagonal extension")
{
  std::vector<double> xs;
  for (int i = 0; i < 40; ++i) xs.push_back(i / 50.0 + (i % 3) * 1e-3);
  std::sort(xs.begin(), xs.end());
  SampledDiagonal s = diagonal_extend_sampled(xs, [&](std::size_t i, std::size_t j) { return xs[i] + xs[j]; }, 6);
  REQUIRE(s.ghat.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::fabs(s.ghat[i] - 2 * xs[i]) <= std::ldexp(1.0, -6) + s.mesh);
}

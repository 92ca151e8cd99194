#include "arcs/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

namespace arcs
{
double CantorAmbient::width(int level) const
{
  double scale = kind == Kind::triadic ? 3.0 : 2.0;
  return (hi - lo) * std::pow(scale, -level);
}

Box CantorAmbient::box(int level, std::uint64_t index) const
{
  if (level < 0 || level > max_level) throw std::invalid_argument("box level out of range");
  if (level < 64 && index >> level) throw std::invalid_argument("box index out of range");
  const std::uint64_t scale = kind == Kind::triadic ? 3 : 2;
  // ends as integer fractions of [lo, hi]: each is one rounded quotient, so nesting survives rounding
  if (level <= 33) {
    std::uint64_t num = 0, den = 1;
    for (int k = level - 1; k >= 0; --k) {
      num = num * scale + (((index >> k) & 1u) ? scale - 1 : 0);
      den *= scale;
    }
    auto at = [&](std::uint64_t n) { return lo + (hi - lo) * (static_cast<double>(n) / static_cast<double>(den)); };
    return {level, index, at(num), num + 1 == den ? hi : at(num + 1)};
  }
  double l = lo, step = hi - lo;
  for (int k = level - 1; k >= 0; --k) {
    step /= static_cast<double>(scale);
    if ((index >> k) & 1u) l += static_cast<double>(scale - 1) * step;
  }
  return {level, index, l, l + step};
}

int CantorAmbient::level_for_diam(double target) const
{
  for (int l = 0; l <= max_level; ++l)
    if (width(l) <= target) return l;
  throw std::length_error("diameter " + std::to_string(target) + " needs more than " + std::to_string(max_level) + " refinement levels");
}

Box CantorAmbient::descendant(const Box & b, int level, std::uint64_t k) const
{
  if (level < b.level) throw std::invalid_argument("descendant above its ancestor");
  return box(level, (b.index << (level - b.level)) | k);
}

bool CantorAmbient::disjoint(const Box & a, const Box & b) const
{
  if (a.level != b.level) return a.hi < b.lo || b.hi < a.lo;
  if (a.index == b.index) return false;
  if (kind == Kind::triadic) return true;
  auto d = a.index > b.index ? a.index - b.index : b.index - a.index;
  return d >= 2;
}

PairColoring off_diagonal_coloring()
{
  return {[](double x, double y) {
            double d = std::fabs(x - y);
            return Verdict{d > 0, d / 2};
          },
          "off-diagonal"};
}

PairColoring empty_coloring()
{
  return {[](double, double) { return Verdict{false, 0}; }, "empty"};
}

PairColoring distance_coloring(double threshold)
{
  return {[threshold](double x, double y) {
            double d = std::fabs(x - y);
            // moving each coordinate by r changes |x - y| by at most 2r
            return d > threshold ? Verdict{true, (d - threshold) / 2} : Verdict{false, 0};
          },
          "|x-y|>" + std::to_string(threshold)};
}

PairColoring direction_cover(std::function<std::pair<double, double>(double)> gamma, double lipschitz, double lo, double hi,
                             std::string name)
{
  return {[=](double x, double y) {
            if (x == y) return Verdict{false, 0};
            auto [ax, ay] = gamma(x);
            auto [bx, by] = gamma(y);
            double ux = ax - bx, uy = ay - by;
            double len = std::hypot(ux, uy);
            if (len == 0) return Verdict{false, 0};
            const double pi = std::numbers::pi;
            double th = std::fmod(std::atan2(uy, ux), pi);
            if (th < 0) th += pi;
            // place th in the arc's period window
            while (th < lo) th += pi;
            while (th >= lo + pi) th -= pi;
            if (!(th > lo && th < hi)) return Verdict{false, 0};
            double slack = std::min(th - lo, hi - th);
            // endpoints moved by r move u by <= 2 L r, turning it by <= asin(2 L r / |u|)
            double r = len * std::sin(std::min(slack, pi / 2)) / (2 * lipschitz);
            return Verdict{true, std::min(r, std::fabs(x - y) / 2)};
          },
          std::move(name)};
}

std::vector<std::size_t> ColoringTree::leaves() const
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (static_cast<int>(nodes[i].address.size()) == depth) out.push_back(i);
  return out;
}

int ColoringTree::find(const std::string & address) const
{
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].address == address) return static_cast<int>(i);
  return -1;
}

namespace
{
struct Certified
{
  double margin;
  int index;
};

using Certifier = std::function<std::optional<Certified>(const Box &, const Box &, Probe &)>;

struct SplitSearch
{
  bool found = false;
  Box a, b;
  Certified cert{0, -1};
  int level = 0;
  std::vector<Probe> failed;
  std::size_t probes = 0;
};

// Probe pairs of descendants in lexicographic order, level by level, with a budget of
// kProbeBudget; once it runs out, one further level gets a fresh budget.
SplitSearch find_split(const CantorAmbient & e, const Box & node, double child_diam, const Certifier & certify)
{
  SplitSearch s;
  int level = std::max(node.level + 1, e.level_for_diam(child_diam));
  int budget = kProbeBudget;
  bool extra_used = false;
  while (level <= e.max_level && level - node.level < 62) {
    s.level = level;
    const std::uint64_t m = std::uint64_t{1} << (level - node.level);
    bool exhausted = false;
    for (std::uint64_t i = 0; i < m && !exhausted; ++i) {
      Box bi = e.descendant(node, level, i);
      for (std::uint64_t j = i + 1; j < m; ++j) {
        Box bj = e.descendant(node, level, j);
        if (!e.disjoint(bi, bj)) continue;
        if (budget == 0) {
          exhausted = true;
          break;
        }
        --budget;
        ++s.probes;
        Probe p{bi, bj, false, 0};
        if (auto c = certify(bi, bj, p)) {
          s.found = true;
          s.a = bi;
          s.b = bj;
          s.cert = *c;
          return s;
        }
        s.failed.push_back(p);
      }
    }
    if (exhausted) {
      if (extra_used) break;
      extra_used = true;
      budget = kProbeBudget;
    }
    ++level;
  }
  return s;
}

Verdict symmetric_query(const PairColoring & w, double x, double y)
{
  Verdict a = w.oracle(x, y), b = w.oracle(y, x);
  if (a.in_w != b.in_w)
    throw SymmetryError("coloring '" + w.name + "' is not symmetric at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
  return {a.in_w, std::min(a.margin, b.margin)};
}

ColoringTree make_root(const CantorAmbient & e)
{
  ColoringTree t;
  t.ambient = e;
  TreeNode root;
  root.address = "";
  root.box = e.box(e.level_for_diam(1.0), 0);
  t.nodes.push_back(root);
  return t;
}

DichotomyResult build_tree(const CantorAmbient & e, int depth, const Certifier & certify)
{
  if (depth < 1) throw std::invalid_argument("tree depth must be >= 1");
  ColoringTree t = make_root(e);
  t.depth = depth;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t idx = queue.front();
    queue.pop_front();
    const int d = static_cast<int>(t.nodes[idx].address.size());
    if (d == depth) continue;
    Box box = t.nodes[idx].box;
    SplitSearch s = find_split(e, box, std::ldexp(1.0, -(d + 1)), certify);
    t.probes += s.probes;
    if (!s.found) {
      FreeSetReport r;
      r.address = t.nodes[idx].address;
      r.box = box;
      r.probe_level = s.level;
      r.failed_probes = std::move(s.failed);
      t.depth = d;
      r.partial = std::move(t);
      return r;
    }
    t.nodes[idx].split = true;
    t.nodes[idx].margin = s.cert.margin;
    t.nodes[idx].cover_index = s.cert.index;
    for (int c = 0; c < 2; ++c) {
      TreeNode n;
      n.address = t.nodes[idx].address + static_cast<char>('0' + c);
      n.box = c == 0 ? s.a : s.b;
      n.parent = static_cast<int>(idx);
      t.nodes[idx].child[c] = static_cast<int>(t.nodes.size());
      queue.push_back(t.nodes.size());
      t.nodes.push_back(n);
    }
  }
  return t;
}
}  // namespace

DichotomyResult soca_dichotomy(const CantorAmbient & e, const PairColoring & w, int depth)
{
  Certifier cert = [&w](const Box & a, const Box & b, Probe & p) -> std::optional<Certified> {
    Verdict v = symmetric_query(w, a.center(), b.center());
    p.in_w = v.in_w;
    p.margin = v.margin;
    if (v.in_w && v.margin > std::max(a.half(), b.half())) return Certified{v.margin, 0};
    return std::nullopt;
  };
  return build_tree(e, depth, cert);
}

DichotomyResult cover_refine(const CantorAmbient & e, const std::vector<PairColoring> & covers, int depth)
{
  if (covers.empty()) throw std::invalid_argument("cover_refine: no covers");
  Certifier cert = [&covers](const Box & a, const Box & b, Probe & p) -> std::optional<Certified> {
    bool any = false;
    for (std::size_t i = 0; i < covers.size(); ++i) {
      Verdict v = symmetric_query(covers[i], a.center(), b.center());
      if (!v.in_w) continue;
      any = true;
      p.in_w = true;
      p.margin = std::max(p.margin, v.margin);
      if (v.margin > std::max(a.half(), b.half())) return Certified{v.margin, static_cast<int>(i)};
    }
    if (!any)
      throw CoverError("pair (" + std::to_string(a.center()) + ", " + std::to_string(b.center()) + ") lies in no cover", a.center(),
                       b.center());
    return std::nullopt;
  };
  return build_tree(e, depth, cert);
}

TreeCheck verify_connected_tree(const ColoringTree & t, const PairColoring & w)
{
  TreeCheck c;
  const double slack = 1e-12;
  for (const auto & n : t.nodes) {
    double bound = std::ldexp(1.0, -static_cast<int>(n.address.size()));
    if (n.box.diam() > bound * (1 + slack)) c.problems.push_back("node '" + n.address + "' exceeds its diameter bound");
    if (n.child[0] >= 0) {
      const Box & a = t.nodes[static_cast<std::size_t>(n.child[0])].box;
      const Box & b = t.nodes[static_cast<std::size_t>(n.child[1])].box;
      if (!t.ambient.disjoint(a, b)) c.problems.push_back("children of '" + n.address + "' overlap");
      for (const Box * ch : {&a, &b})
        if (ch->lo < n.box.lo || ch->hi > n.box.hi) c.problems.push_back("child of '" + n.address + "' leaves its parent");
    }
  }
  auto leaves = t.leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      const Box & a = t.nodes[leaves[i]].box;
      const Box & b = t.nodes[leaves[j]].box;
      for (double x : {a.lo, a.hi})
        for (double y : {b.lo, b.hi}) {
          ++c.pairs_checked;
          if (!w.oracle(x, y).in_w || !w.oracle(y, x).in_w)
            c.problems.push_back("leaf pair '" + t.nodes[leaves[i]].address + "', '" + t.nodes[leaves[j]].address + "' not in W");
        }
    }
  c.ok = c.problems.empty();
  return c;
}

namespace
{
struct ImageBox
{
  double lo, hi, mesh;
};

ImageBox sampled_image(const std::function<double(double, double)> & g, const CantorAmbient & e, const Box & b, int m)
{
  std::vector<double> s;
  const std::uint64_t cnt = std::uint64_t{1} << m;
  for (std::uint64_t k = 0; k < cnt; ++k) s.push_back(e.descendant(b, b.level + m, k).lo);
  s.push_back(b.hi);
  const std::size_t n = s.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) {
        v[i][j] = g(s[i], s[j]);
        lo = std::min(lo, v[i][j]);
        hi = std::max(hi, v[i][j]);
      }
  // Lipschitz estimate in one coordinate, from pairs sharing the other
  double lip = 0;
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (i != q && j != q) lip = std::max(lip, std::fabs(v[i][q] - v[j][q]) / (s[j] - s[i]));
  double mesh = e.width(b.level + m);
  double infl = 2 * lip * mesh;
  return {lo - infl, hi + infl, mesh};
}
}  // namespace

DiagonalExtension diagonal_extend(const std::function<double(double, double)> & g, const CantorAmbient & e, int depth, int sample_levels)
{
  if (depth < 1) throw std::invalid_argument("diagonal_extend: depth must be >= 1");
  if (sample_levels < 1 || sample_levels > 8) throw std::invalid_argument("diagonal_extend: sample_levels out of range");
  DiagonalExtension out;
  ColoringTree t = make_root(e);
  t.depth = depth;
  ImageBox root = sampled_image(g, e, t.nodes[0].box, sample_levels);
  t.nodes[0].img_lo = root.lo;
  t.nodes[0].img_hi = root.hi;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t idx = queue.front();
    queue.pop_front();
    const int d = static_cast<int>(t.nodes[idx].address.size());
    if (d == depth) {
      out.mesh = std::max(out.mesh, e.width(t.nodes[idx].box.level + sample_levels));
      continue;
    }
    const Box box = t.nodes[idx].box;
    const double target = std::ldexp(1.0, -(d + 1));
    bool done = false;
    for (int level = box.level + 1; level <= e.max_level && !done; ++level) {
      const std::uint64_t m = std::uint64_t{1} << (level - box.level);
      Box kids[2] = {e.descendant(box, level, 0), e.descendant(box, level, m - 1)};
      if (!e.disjoint(kids[0], kids[1]) || kids[0].diam() > target) continue;
      ImageBox im[2] = {sampled_image(g, e, kids[0], sample_levels), sampled_image(g, e, kids[1], sample_levels)};
      if (im[0].hi - im[0].lo > target || im[1].hi - im[1].lo > target) continue;
      done = true;
      t.nodes[idx].split = true;
      for (int c = 0; c < 2; ++c) {
        TreeNode n;
        n.address = t.nodes[idx].address + static_cast<char>('0' + c);
        n.box = kids[c];
        n.parent = static_cast<int>(idx);
        // nested boxes: intersect with the parent's box when they overlap
        double lo = std::max(im[c].lo, t.nodes[idx].img_lo), hi = std::min(im[c].hi, t.nodes[idx].img_hi);
        if (lo > hi) {
          lo = im[c].lo;
          hi = im[c].hi;
        }
        n.img_lo = lo;
        n.img_hi = hi;
        t.nodes[idx].child[c] = static_cast<int>(t.nodes.size());
        queue.push_back(t.nodes.size());
        t.nodes.push_back(n);
      }
    }
    if (!done)
      throw std::runtime_error("diagonal_extend: image diameter 2^-" + std::to_string(d + 1) + " unreachable below node '" +
                               t.nodes[idx].address + "'");
  }
  for (auto i : t.leaves()) {
    const TreeNode & n = t.nodes[i];
    out.leaves.push_back({i, n.box.lo, 0.5 * (n.img_lo + n.img_hi)});
  }
  std::sort(out.leaves.begin(), out.leaves.end(), [](const LeafValue & a, const LeafValue & b) { return a.x < b.x; });
  for (int k = 1; k <= 10; ++k) {
    double delta = std::ldexp(1.0, -k), worst = 0;
    for (std::size_t i = 0; i < out.leaves.size(); ++i)
      for (std::size_t j = i + 1; j < out.leaves.size() && out.leaves[j].x - out.leaves[i].x <= delta; ++j)
        worst = std::max(worst, std::fabs(out.leaves[j].ghat - out.leaves[i].ghat));
    out.modulus.emplace_back(delta, worst);
  }
  out.tree = std::move(t);
  return out;
}

SampledDiagonal diagonal_extend_sampled(const std::vector<double> & xs, const std::function<double(std::size_t, std::size_t)> & g, int depth)
{
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("diagonal_extend_sampled: need at least two samples");
  if (depth < 0 || depth > 40) throw std::invalid_argument("diagonal_extend_sampled: depth out of range");
  for (std::size_t i = 1; i < n; ++i)
    if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("diagonal_extend_sampled: abscissae must increase");
  const double lo = xs.front(), span = xs.back() - xs.front();

  SampledDiagonal out;
  for (std::size_t i = 0; i < n; ++i) {
    double nn = std::numeric_limits<double>::infinity();
    if (i > 0) nn = std::min(nn, xs[i] - xs[i - 1]);
    if (i + 1 < n) nn = std::min(nn, xs[i + 1] - xs[i]);
    out.mesh = std::max(out.mesh, nn);
  }
  // range of g over pairs of samples with indices in [a, b)
  auto range = [&](std::size_t a, std::size_t b) {
    double r0 = std::numeric_limits<double>::infinity(), r1 = -r0;
    for (std::size_t p = a; p < b; ++p)
      for (std::size_t q = p + 1; q < b; ++q) {
        double v = g(p, q);
        r0 = std::min(r0, v);
        r1 = std::max(r1, v);
      }
    return std::make_pair(r0, r1);
  };
  std::vector<std::vector<std::pair<double, double>>> cache(static_cast<std::size_t>(depth) + 1);
  std::vector<std::vector<std::uint64_t>> keys(static_cast<std::size_t>(depth) + 1);

  for (std::size_t i = 0; i < n; ++i) {
    double h_lo = -std::numeric_limits<double>::infinity(), h_hi = -h_lo;
    for (int lev = 0; lev <= depth; ++lev) {
      const double cells = std::ldexp(1.0, lev);
      auto cell_of = [&](double x) {
        double c = std::floor((x - lo) / span * cells);
        return static_cast<std::uint64_t>(std::clamp(c, 0.0, cells - 1));
      };
      const std::uint64_t cell = cell_of(xs[i]);
      std::size_t a = i, b = i + 1;
      while (a > 0 && cell_of(xs[a - 1]) == cell) --a;
      while (b < n && cell_of(xs[b]) == cell) ++b;
      std::pair<double, double> r;
      auto & kv = keys[static_cast<std::size_t>(lev)];
      auto & cv = cache[static_cast<std::size_t>(lev)];
      auto it = std::find(kv.begin(), kv.end(), cell);
      if (b - a < 2) {
        // a lone sample pairs with its nearest neighbour, whose secant is within mesh of the diagonal
        double left = i > 0 ? xs[i] - xs[i - 1] : std::numeric_limits<double>::infinity();
        double right = i + 1 < n ? xs[i + 1] - xs[i] : std::numeric_limits<double>::infinity();
        if (left <= right) --a;
        else ++b;
        r = range(a, b);
      } else if (it == kv.end()) {
        r = range(a, b);
        kv.push_back(cell);
        cv.push_back(r);
      } else {
        r = cv[static_cast<std::size_t>(it - kv.begin())];
      }
      h_lo = std::max(h_lo, r.first);
      h_hi = std::min(h_hi, r.second);
      if (h_lo > h_hi) {
        h_lo = r.first;
        h_hi = r.second;
      }
    }
    out.ghat.push_back(0.5 * (h_lo + h_hi));
    out.final_diam.push_back(h_hi - h_lo);
  }
  return out;
}

namespace
{
nlohmann::json box_json(const Box & b)
{
  return {{"level", b.level}, {"index", b.index}, {"lo", b.lo}, {"hi", b.hi}};
}
}  // namespace

nlohmann::json to_json(const ColoringTree & t)
{
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto & n : t.nodes) {
    nlohmann::json j{{"address", n.address}, {"depth", n.address.size()}, {"box", box_json(n.box)}, {"diam", n.box.diam()}};
    if (n.split) {
      j["certificate"] = "connected";
      j["margin"] = n.margin;
      j["index"] = n.cover_index;
    } else {
      j["certificate"] = "leaf";
    }
    if (n.img_hi > n.img_lo) j["image"] = {n.img_lo, n.img_hi};
    nodes.push_back(j);
  }
  return {{"depth", t.depth}, {"probes", t.probes}, {"nodes", nodes}};
}

nlohmann::json to_json(const FreeSetReport & r)
{
  nlohmann::json probes = nlohmann::json::array();
  for (const auto & p : r.failed_probes)
    probes.push_back({{"first", box_json(p.first)}, {"second", box_json(p.second)}, {"in_w", p.in_w}, {"margin", p.margin}});
  return {{"certificate", "free-candidate"}, {"address", r.address}, {"box", box_json(r.box)}, {"probe_level", r.probe_level},
          {"failed_probes", probes}, {"partial_tree", to_json(r.partial)}};
}

}  // namespace arcs

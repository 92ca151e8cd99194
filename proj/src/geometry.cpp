#include "arcs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace arcs
{
namespace
{
void validate(const std::vector<Point> & pts, std::size_t & dim)
{
  if (pts.empty()) {
    dim = 0;
    return;
  }
  dim = pts.front().size();
  if (dim < 2) throw std::invalid_argument("point sets need dimension >= 2");
  for (const auto & p : pts) {
    if (p.size() != dim) throw std::invalid_argument("mixed dimensions in point set");
    for (double c : p)
      if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
  }
}

double dist2(const Point & a, const Point & b)
{
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double dot(const Point & a, const Point & b)
{
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize(Point & v)
{
  double n = std::sqrt(dot(v, v));
  for (double & c : v) c /= n;
}

// chord distance from rho to the nearer of +v, -v, for unit vectors
double chord(const Point & rho, const Point & v)
{
  double c = std::fabs(dot(rho, v));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(1.0, c)));
}

bool exactly_collinear(const PointSet & p)
{
  if (p.size() <= 2) return true;
  const std::size_t n = p.dim();
  // direction of the first pair, then every 2x2 minor of (d, p_k - p_0) must vanish
  PointQ d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = p.coord_q(1, j) - p.coord_q(0, j);
  for (std::size_t k = 2; k < p.size(); ++k) {
    PointQ e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = p.coord_q(k, j) - p.coord_q(0, j);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (d[a] * e[b] != d[b] * e[a]) return false;
  }
  return true;
}

std::pair<std::size_t, std::size_t> worst_pair(const PointSet & p, const Point & v)
{
  double worst = -1;
  std::pair<std::size_t, std::size_t> wp{0, 1};
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      double c = chord(direction(p[i], p[j]), v);
      if (c > worst) {
        worst = c;
        wp = {i, j};
      }
    }
  return wp;
}

SpreadResult spread_planar(const PointSet & p)
{
  const double pi = std::numbers::pi;
  std::vector<double> ang;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      double a = std::atan2(p[j][1] - p[i][1], p[j][0] - p[i][0]);
      a = std::fmod(a, pi);
      if (a < 0) a += pi;
      if (a >= pi) a -= pi;
      ang.push_back(a);
    }
  std::sort(ang.begin(), ang.end());
  // largest circular gap on the circle of length pi
  double gap = ang.front() + pi - ang.back();
  double start = ang.front();
  for (std::size_t i = 1; i < ang.size(); ++i)
    if (ang[i] - ang[i - 1] > gap) {
      gap = ang[i] - ang[i - 1];
      start = ang[i];
    }
  double half = 0.5 * (pi - gap);
  SpreadResult r;
  r.eps = 2 * std::sin(0.5 * half);
  double c = start + half;
  r.v = {std::cos(c), std::sin(c)};
  r.exact = true;
  r.extreme = worst_pair(p, r.v);
  return r;
}

double spread_for(const std::vector<Point> & dirs, const Point & v)
{
  double worst = 0;
  for (const auto & d : dirs) worst = std::max(worst, chord(d, v));
  return worst;
}

SpreadResult spread_general(const PointSet & p)
{
  const std::size_t n = p.dim();
  std::vector<Point> dirs;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) dirs.push_back(direction(p[j], p[i]));

  std::vector<Point> cand = dirs;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 2000; ++i) {
    Point v(n);
    for (double & c : v) c = gauss(rng);
    normalize(v);
    cand.push_back(v);
  }
  Point best = cand.front();
  double bv = spread_for(dirs, best);
  for (const auto & v : cand) {
    double s = spread_for(dirs, v);
    if (s < bv) {
      bv = s;
      best = v;
    }
  }
  // shrinking random perturbation search around the best candidate
  double step = 0.1;
  for (int it = 0; it < 4000 && step > 1e-12; ++it) {
    Point v = best;
    for (double & c : v) c += step * gauss(rng);
    normalize(v);
    double s = spread_for(dirs, v);
    if (s < bv) {
      bv = s;
      best = v;
    } else if (it % 50 == 49) {
      step *= 0.5;
    }
  }
  SpreadResult r;
  r.eps = bv;
  r.v = best;
  r.exact = false;
  r.extreme = worst_pair(p, best);
  return r;
}

int sign_of(const Rational & q) { return sgn(q) > 0 ? 1 : (sgn(q) < 0 ? -1 : 0); }

}  // namespace

PointSet PointSet::from_doubles(std::vector<Point> pts)
{
  PointSet s;
  validate(pts, s.dim_);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i] == pts[j]) throw std::invalid_argument("duplicate point in point set");
  s.pts_ = std::move(pts);
  return s;
}

PointSet PointSet::from_rationals(std::vector<PointQ> pts)
{
  std::vector<Point> d;
  for (const auto & p : pts) {
    Point q;
    for (const auto & c : p) q.push_back(c.get_d());
    d.push_back(std::move(q));
  }
  PointSet s;
  validate(d, s.dim_);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i] == pts[j]) throw std::invalid_argument("duplicate point in point set");
  s.pts_ = std::move(d);
  s.exact_ = std::move(pts);
  return s;
}

PointSet PointSet::subset(const std::vector<std::size_t> & idx) const
{
  if (exact()) {
    std::vector<PointQ> q;
    for (auto i : idx) q.push_back(exact_.at(i));
    return from_rationals(std::move(q));
  }
  std::vector<Point> q;
  for (auto i : idx) q.push_back(pts_.at(i));
  return from_doubles(std::move(q));
}

Point direction(const Point & x, const Point & y)
{
  if (x.size() != y.size()) throw std::invalid_argument("direction: dimension mismatch");
  Point d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  double n = std::sqrt(dot(d, d));
  if (n == 0) throw std::invalid_argument("direction: x == y");
  for (double & c : d) c /= n;
  return d;
}

SpreadResult min_direction_spread(const PointSet & p)
{
  if (p.size() < 2) throw std::invalid_argument("min_direction_spread: need at least two points");
  if (exactly_collinear(p)) {
    SpreadResult r;
    r.eps = 0;
    r.v = direction(p[1], p[0]);
    r.exact = true;
    r.extreme = {0, 1};
    return r;
  }
  return p.dim() == 2 ? spread_planar(p) : spread_general(p);
}

DirectionVerdict epsilon_directed(const PointSet & p, double eps)
{
  if (eps < 0) throw std::invalid_argument("epsilon_directed: eps must be nonnegative");
  SpreadResult s = min_direction_spread(p);
  DirectionVerdict v;
  v.eps = eps;
  v.min_eps = s.eps;
  v.v = s.v;
  // any unit v is within sqrt(2) of one of +-rho
  if (eps >= std::sqrt(2.0) || eps >= s.eps) {
    v.directed = true;
    v.certified = true;
    return v;
  }
  v.directed = false;
  v.certified = s.exact;
  v.violating = s.extreme;
  return v;
}

int orientation_q(const PointQ & a, const PointQ & b, const PointQ & c)
{
  Rational det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  return sign_of(det);
}

int orientation(const PointSet & p, std::size_t a, std::size_t b, std::size_t c)
{
  if (p.dim() != 2) throw std::invalid_argument("orientation: planar points required");
  if (!p.exact()) {
    const Point &A = p[a], &B = p[b], &C = p[c];
    double l = (B[0] - A[0]) * (C[1] - A[1]);
    double r = (B[1] - A[1]) * (C[0] - A[0]);
    double det = l - r;
    double bound = 3.3306690738754716e-16 * (std::fabs(l) + std::fabs(r));
    if (det > bound) return 1;
    if (-det > bound) return -1;
  }
  PointQ A{p.coord_q(a, 0), p.coord_q(a, 1)}, B{p.coord_q(b, 0), p.coord_q(b, 1)}, C{p.coord_q(c, 0), p.coord_q(c, 1)};
  return orientation_q(A, B, C);
}

namespace
{
// Orientation signs of all triples, cached.
class OrientationCache
{
public:
  explicit OrientationCache(const PointSet & p) : p_(p), n_(p.size())
  {
    if (n_ <= 320) table_.assign(n_ * n_ * n_, 2);
  }

  int operator()(std::size_t a, std::size_t b, std::size_t c)
  {
    if (table_.empty()) return orientation(p_, a, b, c);
    std::int8_t & slot = table_[(a * n_ + b) * n_ + c];
    if (slot == 2) slot = static_cast<std::int8_t>(orientation(p_, a, b, c));
    return slot;
  }

  // t strictly inside triangle xyz
  bool inside(std::size_t x, std::size_t y, std::size_t z, std::size_t t)
  {
    int o1 = (*this)(x, y, t);
    if (o1 == 0) return false;
    return (*this)(y, z, t) == o1 && (*this)(z, x, t) == o1;
  }

private:
  const PointSet & p_;
  std::size_t n_;
  std::vector<std::int8_t> table_;
};

std::optional<std::array<std::size_t, 4>> squiggle_in(OrientationCache & o, std::size_t a, std::size_t b, std::size_t c, std::size_t d)
{
  if (o.inside(b, c, d, a)) return std::array<std::size_t, 4>{b, c, d, a};
  if (o.inside(a, c, d, b)) return std::array<std::size_t, 4>{a, c, d, b};
  if (o.inside(a, b, d, c)) return std::array<std::size_t, 4>{a, b, d, c};
  if (o.inside(a, b, c, d)) return std::array<std::size_t, 4>{a, b, c, d};
  return std::nullopt;
}
}  // namespace

SquiggleVerdict nonsquiggly_check(const PointSet & p, double delta)
{
  if (!(delta > 0)) throw std::invalid_argument("nonsquiggly_check: delta must be positive");
  SquiggleVerdict v;
  v.delta = delta;
  const std::size_t n = p.size();
  if (n < 4) return v;
  if (p.dim() != 2) throw std::invalid_argument("nonsquiggly_check: planar points required");
  const bool bounded = std::isfinite(delta);
  const double d2 = delta * delta;
  auto close = [&](std::size_t i, std::size_t j) { return !bounded || dist2(p[i], p[j]) <= d2; };
  OrientationCache o(p);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!close(a, b)) continue;
      for (std::size_t c = b + 1; c < n; ++c) {
        if (!close(a, c) || !close(b, c)) continue;
        for (std::size_t d = c + 1; d < n; ++d) {
          if (!close(a, d) || !close(b, d) || !close(c, d)) continue;
          if (auto w = squiggle_in(o, a, b, c, d)) {
            v.nonsquiggly = false;
            v.witness = w;
            return v;
          }
        }
      }
    }
  return v;
}

std::vector<std::size_t> extract_nonsquiggly(const PointSet & p)
{
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < p.dim(); ++k) {
      Rational a = p.coord_q(i, k), b = p.coord_q(j, k);
      if (a != b) return a < b;
    }
    return false;
  });
  if (p.size() > 0 && p.dim() != 2) throw std::invalid_argument("extract_nonsquiggly: planar points required");
  OrientationCache o(p);
  std::vector<std::size_t> kept;
  for (std::size_t cand : order) {
    // the kept set is already non-squiggly, so only quadruples through cand can fail
    bool ok = true;
    for (std::size_t i = 0; ok && i < kept.size(); ++i)
      for (std::size_t j = i + 1; ok && j < kept.size(); ++j)
        for (std::size_t k = j + 1; ok && k < kept.size(); ++k)
          if (squiggle_in(o, kept[i], kept[j], kept[k], cand)) ok = false;
    if (ok) kept.push_back(cand);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

GraphTable rotate_to_graph(const PointSet & p)
{
  if (p.size() < 2) throw std::invalid_argument("rotate_to_graph: need at least two points");
  const double eps45 = directed_45_eps();
  DirectionVerdict dv = epsilon_directed(p, eps45);
  if (!dv.directed)
    throw GeometryError("set is not 2 sin(22.5 deg)-directed (min eps " + std::to_string(dv.min_eps) + ")", dv.violating);

  const std::size_t n = p.dim();
  std::vector<std::vector<double>> R(n, std::vector<double>(n, 0.0));
  Point v = dv.v;
  if (v[0] < 0)
    for (double & c : v) c = -c;
  if (n == 2) {
    // rotation by -theta where v = (cos theta, sin theta)
    R = {{v[0], v[1]}, {-v[1], v[0]}};
  } else {
    // Householder reflection taking v to e1, then flip the last axis to make it a rotation
    Point u = v;
    u[0] -= 1.0;
    double uu = dot(u, u);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) R[i][j] = (i == j ? 1.0 : 0.0) - (uu > 1e-30 ? 2.0 * u[i] * u[j] / uu : 0.0);
    if (uu > 1e-30)
      for (double & c : R[n - 1]) c = -c;
  }

  std::vector<Point> rot;
  for (const auto & q : p.points()) {
    Point r(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[i] += R[i][j] * q[j];
    rot.push_back(std::move(r));
  }

  GraphTable g;
  g.rotation = R;
  g.order.resize(p.size());
  std::iota(g.order.begin(), g.order.end(), 0);
  std::sort(g.order.begin(), g.order.end(), [&](std::size_t i, std::size_t j) { return rot[i][0] < rot[j][0]; });
  for (std::size_t k = 0; k < g.order.size(); ++k) {
    const Point & r = rot[g.order[k]];
    if (k > 0 && !(r[0] > g.x.back()))
      throw GeometryError("duplicate abscissa after rotation", std::make_pair(g.order[k - 1], g.order[k]));
    g.x.push_back(r[0]);
    g.y.emplace_back(r.begin() + 1, r.end());
  }
  for (std::size_t i = 0; i < g.x.size(); ++i)
    for (std::size_t j = i + 1; j < g.x.size(); ++j)
      for (std::size_t c = 0; c + 1 < n; ++c) {
        double s = std::fabs((g.y[j][c] - g.y[i][c]) / (g.x[j] - g.x[i]));
        g.max_abs_slope = std::max(g.max_abs_slope, s);
      }
  if (g.max_abs_slope > 1 + 1e-9)
    throw GeometryError("rotated slopes leave [-1, 1] (max " + std::to_string(g.max_abs_slope) + ")");
  g.rotated = PointSet::from_doubles(std::move(rot));
  return g;
}

bool segments_intersect(const PointQ & a, const PointQ & b, const PointQ & c, const PointQ & d)
{
  int o1 = orientation_q(a, b, c), o2 = orientation_q(a, b, d);
  int o3 = orientation_q(c, d, a), o4 = orientation_q(c, d, b);
  auto on_segment = [](const PointQ & p, const PointQ & q, const PointQ & r) {
    // r collinear with pq; inside the bounding box?
    return std::min(p[0], q[0]) <= r[0] && r[0] <= std::max(p[0], q[0]) && std::min(p[1], q[1]) <= r[1] && r[1] <= std::max(p[1], q[1]);
  };
  if (o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0) {
    if (o1 != 0 || o2 != 0) return true;
  }
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

nlohmann::json to_json(const DirectionVerdict & v)
{
  nlohmann::json j{{"directed", v.directed}, {"certified", v.certified}, {"eps", v.eps}, {"min_eps", v.min_eps}, {"v", v.v}};
  if (v.violating) j["violating_pair"] = {v.violating->first, v.violating->second};
  return j;
}

nlohmann::json to_json(const SquiggleVerdict & v, const PointSet & p)
{
  nlohmann::json j{{"nonsquiggly", v.nonsquiggly}, {"delta", std::isfinite(v.delta) ? nlohmann::json(v.delta) : nlohmann::json("inf")}};
  if (v.witness) {
    nlohmann::json w = nlohmann::json::array();
    for (auto i : *v.witness) w.push_back({{"index", i}, {"point", p[i]}});
    j["witness"] = {{"triangle", {w[0], w[1], w[2]}}, {"interior", w[3]}};
  }
  return j;
}

}  // namespace arcs

#include "arcs/flatinterp.hpp"

#include "arcs/realsets.hpp"

#include <algorithm>
#include <cmath>

namespace arcs
{
namespace
{
Rational norm2(const PointQ & a, const PointQ & b)
{
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

Rational norm2(const PointQ & a)
{
  Rational s = 0;
  for (const auto & c : a) s += c * c;
  return s;
}

double norm(const Point & v)
{
  double s = 0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double factorial(int n)
{
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}
}  // namespace

void FlatPathData::validate() const
{
  if (d.size() < 2) throw FlatDataError("need at least two sample points");
  if (d.size() != g.size()) throw FlatDataError("one value per sample point required");
  if (d.front() != 0 || d.back() != 1) throw FlatDataError("0 and 1 must belong to D");
  for (std::size_t i = 1; i < d.size(); ++i)
    if (!(d[i - 1] < d[i])) throw FlatDataError("sample points must increase", static_cast<long>(i));
  for (const auto & p : g)
    if (p.size() != dim() || p.empty()) throw FlatDataError("values must share one dimension");
}

FlatnessTable flatness_constants(const FlatPathData & data, int alpha_max, double growth_threshold)
{
  data.validate();
  if (alpha_max < 0) throw std::invalid_argument("alpha_max must be nonnegative");
  FlatnessTable t;
  const std::size_t n = data.d.size();
  for (int a = 0; a <= alpha_max; ++a) {
    Rational best = 0;
    std::pair<std::size_t, std::size_t> arg{0, 1};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Rational q = norm2(data.g[i], data.g[j]) / pow_of(data.d[j] - data.d[i], static_cast<unsigned>(2 * a));
        if (q > best) {
          best = q;
          arg = {i, j};
        }
      }
    t.M.push_back(std::sqrt(best.get_d()));
    t.argmax.push_back(arg);
    if (a > 0 && !t.blowup_alpha && t.M[static_cast<std::size_t>(a - 1)] > 0 &&
        t.M[static_cast<std::size_t>(a)] / t.M[static_cast<std::size_t>(a - 1)] > growth_threshold)
      t.blowup_alpha = a;
  }
  return t;
}

bool certify_flatness_bound(const FlatPathData & data, int alpha, const Rational & bound)
{
  data.validate();
  const Rational b2 = bound * bound;
  for (std::size_t i = 0; i < data.d.size(); ++i)
    for (std::size_t j = i + 1; j < data.d.size(); ++j)
      if (norm2(data.g[i], data.g[j]) > b2 * pow_of(data.d[j] - data.d[i], static_cast<unsigned>(2 * alpha))) return false;
  return true;
}

InterpolatedPath::InterpolatedPath(FlatPathData data, SmoothFn psi) : data_(std::move(data)), psi_(std::move(psi))
{
  data_.validate();
  if (std::fabs(psi_(0.0)) > 1e-12 || std::fabs(psi_(1.0) - 1.0) > 1e-12)
    throw std::invalid_argument("psi must satisfy psi(0) = 0 and psi(1) = 1");
  for (const auto & q : data_.d) d_.push_back(q.get_d());
  for (const auto & p : data_.g) {
    Point v;
    for (const auto & c : p) v.push_back(c.get_d());
    g_.push_back(std::move(v));
  }
}

long InterpolatedPath::gap_of(double u) const
{
  if (u <= d_.front() || u >= d_.back()) return -1;
  auto it = std::upper_bound(d_.begin(), d_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - d_.begin()) - 1;
  if (d_[i] == u) return -1;
  return static_cast<long>(i);
}

Point InterpolatedPath::value(double u) const
{
  if (u <= d_.front()) return g_.front();
  if (u >= d_.back()) return g_.back();
  auto it = std::upper_bound(d_.begin(), d_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - d_.begin()) - 1;
  if (d_[i] == u) return g_[i];
  const double a = d_[i], b = d_[i + 1];
  const double s = psi_((u - a) / (b - a));
  Point out(g_[i].size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = g_[i][c] + (g_[i + 1][c] - g_[i][c]) * s;
  return out;
}

Point InterpolatedPath::derivative(double u, int k) const
{
  if (k == 0) return value(u);
  Point out(g_.front().size(), 0.0);
  long gi = gap_of(u);
  if (gi < 0) return out;
  const std::size_t i = static_cast<std::size_t>(gi);
  const double a = d_[i], b = d_[i + 1];
  const double s = psi_.derivative((u - a) / (b - a), k) * std::pow(b - a, -k);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = (g_[i + 1][c] - g_[i][c]) * s;
  return out;
}

InterpolatedPath psi_interpolate(const FlatPathData & data, const SmoothFn & psi) { return InterpolatedPath(data, psi); }

std::vector<double> flat_bound_constants(const std::vector<double> & M, const std::vector<double> & S, int k_max)
{
  if (static_cast<int>(M.size()) < k_max + 5) throw std::invalid_argument("flat_bound_constants: need M up to k_max + 4");
  if (static_cast<int>(S.size()) < 2 * k_max + 5) throw std::invalid_argument("flat_bound_constants: need S up to 2 k_max + 4");
  std::vector<double> B;
  for (int k = 0; k <= k_max; ++k) {
    auto uk = static_cast<std::size_t>(k);
    double near = M[uk + 4] * S[uk];                                // D close on both sides of the gap
    double far = M[0] * S[2 * uk + 4] / factorial(k + 4);           // Taylor bound on psi^(k) near the endpoint
    double b = std::max(near, far);
    if (k == 0) b += M[2];
    B.push_back(b);
  }
  return B;
}

FlatBoundReport verify_flat_bounds(const InterpolatedPath & path, int k_max, int samples)
{
  if (k_max < 0 || k_max > path.max_order()) throw std::invalid_argument("verify_flat_bounds: k_max exceeds the path's order");
  const auto & S = SmoothStep::instance().sup_norms();
  if (2 * k_max + 4 >= static_cast<int>(S.size())) throw std::invalid_argument("verify_flat_bounds: k_max too large for the S table");
  FlatBoundReport rep;
  rep.M = flatness_constants(path.data(), k_max + 4).M;
  rep.S.assign(S.begin(), S.begin() + 2 * k_max + 5);
  auto B = flat_bound_constants(rep.M, rep.S, k_max);

  const auto & d = path.knots();
  std::vector<double> us;
  for (int i = 0; i < samples; ++i) {
    double u = (i + 0.5) / samples;
    if (path.gap_of(u) >= 0) us.push_back(u);
  }
  const double slack = 1e-9;
  for (int k = 0; k <= k_max; ++k) {
    FlatBoundRow row;
    row.k = k;
    row.B = B[static_cast<std::size_t>(k)];
    for (double u : us) {
      Point lhs_k = path.derivative(u, k);
      for (std::size_t ti = 0; ti < d.size(); ++ti) {
        double t = d[ti];
        double lhs;
        if (k == 0) {
          Point diff = lhs_k;
          for (std::size_t c = 0; c < diff.size(); ++c) diff[c] -= path.samples()[ti][c];
          lhs = norm(diff);
        } else {
          lhs = norm(lhs_k);
        }
        double rhs = row.B * (u - t) * (u - t);
        ++row.checks;
        if (rhs > 0) row.worst_ratio = std::max(row.worst_ratio, lhs / rhs);
        if (lhs > rhs * (1 + slack) + 1e-300) row.passed = false;
      }
    }
    rep.all_passed = rep.all_passed && row.passed;
    rep.rows.push_back(row);
  }

  // off D the quadratic bound must break: two close points inside a gap where g moves
  for (std::size_t i = 0; i + 1 < d.size() && !rep.off_set_failure; ++i) {
    Point jump = path.samples()[i + 1];
    for (std::size_t c = 0; c < jump.size(); ++c) jump[c] -= path.samples()[i][c];
    if (norm(jump) == 0) continue;
    double a = d[i], b = d[i + 1];
    double u = a + 0.5 * (b - a), t = u + 1e-6 * (b - a);
    Point pu = path.value(u), pt = path.value(t);
    for (std::size_t c = 0; c < pu.size(); ++c) pu[c] -= pt[c];
    if (norm(pu) > B[0] * (u - t) * (u - t)) rep.off_set_failure = std::make_pair(u, t);
  }
  return rep;
}

PolygonalArc polygonal_arc_data(const std::vector<PointQ> & x)
{
  if (x.empty()) throw FlatDataError("need at least one point");
  const std::size_t n = x.front().size();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j].size() != n || n == 0) throw FlatDataError("points must share one dimension", static_cast<long>(j));
    if (j > 0 && !(norm2(x[j]) < norm2(x[j - 1])))
      throw FlatDataError("norms must strictly decrease at j = " + std::to_string(j), static_cast<long>(j));
    Rational bound = pow_of(Rational(1, 2), static_cast<unsigned>(2 * j * j));  // (2^{-j^2})^2
    if (norm2(x[j]) > bound) throw FlatDataError("|x_" + std::to_string(j) + "| exceeds 2^-" + std::to_string(j * j), static_cast<long>(j));
    if (norm2(x[j]) == 0) throw FlatDataError("x_" + std::to_string(j) + " is the origin", static_cast<long>(j));
  }
  PolygonalArc arc;
  // increasing parameter: 0, 2^-(J-1), ..., 1/2, 1
  arc.data.d.push_back(0);
  arc.data.g.push_back(PointQ(n, Rational(0)));
  for (std::size_t k = x.size(); k-- > 0;) {
    arc.data.d.push_back(pow_of(Rational(1, 2), static_cast<unsigned>(k)));
    arc.data.g.push_back(x[k]);
  }
  arc.data.validate();

  if (n == 2) {
    arc.segment_check_done = true;
    const auto & v = arc.data.g;
    const std::size_t m = v.size();
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = i + 1; j + 1 < m; ++j) {
        if (j == i + 1) {
          // consecutive segments share v[j]; they must not fold back onto each other
          if (orientation_q(v[i], v[i + 1], v[j + 1]) == 0) {
            Rational dotp = (v[i + 1][0] - v[i][0]) * (v[j + 1][0] - v[j][0]) + (v[i + 1][1] - v[i][1]) * (v[j + 1][1] - v[j][1]);
            if (dotp <= 0) arc.segments_meet_only_at_vertices = false;
          }
        } else if (segments_intersect(v[i], v[i + 1], v[j], v[j + 1])) {
          arc.segments_meet_only_at_vertices = false;
        }
      }
  }
  return arc;
}

PointQ BoxQ::center() const
{
  PointQ c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = (lo[i] + hi[i]) / 2;
  return c;
}

BoxTree diagonal_shrink_boxes(int level, std::size_t dim)
{
  if (level < 0 || level > 6) throw std::invalid_argument("diagonal_shrink_boxes: level must be in [0, 6]");
  if (dim < 1) throw std::invalid_argument("diagonal_shrink_boxes: dimension must be positive");
  auto side = [dim](int j) -> Rational { return pow_of(Rational(1, 3), static_cast<unsigned>(j * j)) / Rational(static_cast<long>(dim)); };
  BoxTree t;
  t[""] = BoxQ{PointQ(dim, Rational(0)), PointQ(dim, side(0))};
  std::vector<std::string> frontier{""};
  for (int j = 0; j < level; ++j) {
    std::vector<std::string> next;
    Rational s = side(j + 1);
    for (const auto & a : frontier) {
      const BoxQ & p = t[a];
      BoxQ low{p.lo, p.lo}, high{p.hi, p.hi};
      for (std::size_t i = 0; i < dim; ++i) {
        low.hi[i] = p.lo[i] + s;
        high.lo[i] = p.hi[i] - s;
      }
      t[a + "0"] = low;
      t[a + "1"] = high;
      next.push_back(a + "0");
      next.push_back(a + "1");
    }
    frontier.swap(next);
  }
  return t;
}

FlatPathData cantor_arc_data(int level, const BoxTree & boxes)
{
  if (level < 0) throw std::invalid_argument("cantor_arc_data: level must be nonnegative");
  auto get = [&](const std::string & a) -> const BoxQ & {
    auto it = boxes.find(a);
    if (it == boxes.end()) throw FlatDataError("missing box F_" + (a.empty() ? std::string("root") : a), -1, a);
    return it->second;
  };
  std::vector<std::string> frontier{""};
  const std::size_t dim = get("").lo.size();
  for (int j = 0; j <= level; ++j) {
    Rational bound2 = pow_of(Rational(1, 9), static_cast<unsigned>(j * j));  // (3^{-j^2})^2
    for (const auto & a : frontier) {
      const BoxQ & b = get(a);
      if (b.lo.size() != dim || b.hi.size() != dim) throw FlatDataError("box dimension mismatch", -1, a);
      for (std::size_t i = 0; i < dim; ++i)
        if (!(b.lo[i] < b.hi[i]) && !(i > 0 && b.lo[i] == b.hi[i])) throw FlatDataError("degenerate box F_" + a, -1, a);
      if (norm2(b.lo, b.hi) > bound2) throw FlatDataError("diam(F_" + a + ") exceeds 3^-" + std::to_string(j * j), -1, a);
      if (!a.empty()) {
        const BoxQ & p = get(a.substr(0, a.size() - 1));
        for (std::size_t i = 0; i < dim; ++i)
          if (b.lo[i] < p.lo[i] || b.hi[i] > p.hi[i]) throw FlatDataError("F_" + a + " is not inside its parent", -1, a);
      }
    }
    if (j == level) break;
    std::vector<std::string> next;
    for (const auto & a : frontier) {
      const BoxQ &l = get(a + "0"), &r = get(a + "1");
      if (!(l.hi[0] < r.lo[0])) throw FlatDataError("first coordinates of F_" + a + "0 and F_" + a + "1 are not ordered", -1, a);
      next.push_back(a + "0");
      next.push_back(a + "1");
    }
    frontier.swap(next);
  }
  FlatPathData data;
  auto t = cantor_points(level, Rational(0), Rational(1));
  for (std::size_t k = 0; k < frontier.size(); ++k) {
    data.d.push_back(t[k]);
    data.g.push_back(get(frontier[k]).center());
  }
  const BoxQ & last = get(std::string(static_cast<std::size_t>(level), '1'));
  PointQ face = last.center();
  face[0] = last.hi[0];
  data.d.push_back(1);
  data.g.push_back(face);
  data.validate();
  return data;
}

nlohmann::json to_json(const FlatnessTable & t)
{
  nlohmann::json j{{"M", t.M}};
  if (t.blowup_alpha) j["blowup_alpha"] = *t.blowup_alpha;
  return j;
}

nlohmann::json to_json(const FlatBoundReport & r)
{
  nlohmann::json rows = nlohmann::json::array();
  for (const auto & row : r.rows)
    rows.push_back({{"k", row.k}, {"B", row.B}, {"checks", row.checks}, {"worst_ratio", row.worst_ratio}, {"passed", row.passed}});
  nlohmann::json j{{"M", r.M}, {"S", r.S}, {"rows", rows}, {"all_passed", r.all_passed}};
  if (r.off_set_failure) j["off_set_failure"] = {r.off_set_failure->first, r.off_set_failure->second};
  return j;
}

}  // namespace arcs

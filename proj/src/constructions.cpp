#include "arcs/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arcs
{
namespace
{
using Kind = BumpTerm::Kind;

const double kInf = std::numeric_limits<double>::infinity();

// E^-1(s) for E(d) = integral_0^d exp(-ell/u) du, solved on log E so tiny s stays resolvable.
double one_sided_inverse(double s, double ell, double hi = kInf)
{
  if (!(s > 0)) return 0.0;
  if (!std::isfinite(hi)) {
    hi = ell;
    while (one_sided_integral(hi, ell) < s) hi *= 2;
  }
  const double target = std::log(s);
  if (target >= one_sided_log_integral(hi, ell)) return hi;
  double lo = 0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (one_sided_log_integral(mid, ell) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// integral_0^S E^-1 = S E^-1(S) - integral_0^{E^-1(S)} E.
double one_sided_inverse_integral(double s, double ell)
{
  if (!(s > 0)) return 0.0;
  double u = one_sided_inverse(s, ell);
  return s * u - one_sided_second_integral(u, ell);
}

double fit_slope(const std::vector<double> & lx, const std::vector<double> & ly)
{
  const std::size_t n = lx.size();
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}
}  // namespace

VanishingDerivativeF::VanishingDerivativeF(ClosedSet d, Ambient ambient, int max_order, CoeffRule rule)
    : h_(bump_complement(d, ambient, max_order, rule))
{
  if (d.empty()) throw std::invalid_argument("build_vanishing_derivative_f: empty set");
  if (!ambient.whole_line && (d.min() < ambient.lo || d.max() > ambient.hi))
    throw std::invalid_argument("build_vanishing_derivative_f: set leaves the ambient interval");
  const Rational anchor_q = ambient.whole_line ? d.min() : ambient.lo;
  anchor_ = anchor_q.get_d();
  const double C = SmoothStep::instance().norm_constant();

  double cur = anchor_;
  for (const auto & t : h_.terms()) {
    double m = kInf;
    switch (t.kind) {
      case Kind::bounded: m = t.c * (t.b - t.a) * C; break;
      case Kind::left_edge:
      case Kind::right_edge: m = t.c * one_sided_integral(t.b - t.a, t.ell); break;
      default: break;
    }
    mass_.push_back(m);
    start_.push_back(cur);
    if (t.kind != Kind::left_ray && t.kind != Kind::right_ray) cur += m;
  }

  endpoints_ = d.endpoints();
  Rational acc = anchor_q;
  std::size_t ti = 0;
  const auto & terms = h_.terms();
  for (const auto & e : endpoints_) {
    const double ed = e.get_d();
    while (ti < terms.size() && terms[ti].b <= ed) {
      if (std::isfinite(mass_[ti])) acc += Rational(mass_[ti]);
      ++ti;
    }
    endpoint_values_.push_back(acc);
  }
}

double VanishingDerivativeF::operator()(double x) const
{
  const auto & terms = h_.terms();
  auto it = std::upper_bound(terms.begin(), terms.end(), x, [](double v, const BumpTerm & t) { return v < t.a; });
  if (it == terms.begin()) return anchor_;
  const std::size_t i = static_cast<std::size_t>(it - terms.begin()) - 1;
  const BumpTerm & t = terms[i];
  if (t.kind == Kind::left_ray) return x < t.b ? start_[i] - h_.term_integral(i, x) : start_[i];
  if (x >= t.b) return start_[i] + mass_[i];
  if (t.kind == Kind::left_edge) return start_[i] + mass_[i] - h_.term_integral(i, x);
  return start_[i] + h_.term_integral(i, x);
}

double VanishingDerivativeF::derivative(double x, int k) const
{
  if (k == 0) return (*this)(x);
  return h_.derivative(x, k - 1);
}

SmoothFn VanishingDerivativeF::as_fn() const
{
  auto self = std::make_shared<VanishingDerivativeF>(*this);
  return SmoothFn([self](double x, int k) { return self->derivative(x, k); }, h_.max_order() + 1, "real line");
}

double VanishingDerivativeF::inverse(double y) const
{
  const auto & terms = h_.terms();
  if (terms.empty()) return set().min().get_d();
  std::size_t first = 0;
  if (terms[0].kind == Kind::left_ray) {
    if (y < start_[0]) return terms[0].b - one_sided_inverse((start_[0] - y) / terms[0].c, terms[0].ell);
    first = 1;
  }
  if (first == terms.size() || y < start_[first]) {
    if (y < anchor_) throw std::domain_error("inverse: value below the range of f");
    return first > 0 ? terms[first - 1].b : (terms[first].kind == Kind::left_edge ? terms[first].a : set().min().get_d());
  }
  auto it = std::upper_bound(start_.begin() + static_cast<long>(first), start_.end(), y);
  std::size_t i = static_cast<std::size_t>(it - start_.begin()) - 1;
  const BumpTerm & t = terms[i];
  double s = y - start_[i];
  // f is flat to all orders on D, so values within rounding of a boundary snap to it
  const double snap = 8 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(y), std::fabs(start_[i]));
  if (s <= snap) return i > first ? terms[i - 1].b : t.a;
  if (std::isfinite(mass_[i]) && mass_[i] - s <= snap) return t.b;
  if (s >= mass_[i]) {
    if (!std::isfinite(mass_[i])) throw std::logic_error("inverse: unreachable");
    if (i + 1 == terms.size()) {
      if (y > start_[i] + mass_[i]) throw std::domain_error("inverse: value above the range of f");
    }
    return t.b;
  }
  switch (t.kind) {
    case Kind::bounded: {
      double w = t.b - t.a;
      return t.a + w * SmoothStep::instance().inverse(std::min(1.0, s / mass_[i]));
    }
    case Kind::right_ray: return t.a + one_sided_inverse(s / t.c, t.ell);
    case Kind::right_edge: return t.a + one_sided_inverse(s / t.c, t.ell, t.b - t.a);
    case Kind::left_edge: return t.b - one_sided_inverse((mass_[i] - s) / t.c, t.ell, t.b - t.a);
    case Kind::left_ray: break;
  }
  throw std::logic_error("inverse: unreachable");
}

VanishingDerivativeF build_vanishing_derivative_f(const ClosedSet & d, const Ambient & ambient, int max_order, CoeffRule rule)
{
  return VanishingDerivativeF(d, ambient, max_order, rule);
}

C2AvoidConstruction::C2AvoidConstruction(const ClosedSet & d, C2AvoidOptions opt)
{
  if (d.size() < 2) throw std::invalid_argument("c2_avoider: need at least two points");
  if (!d.all_degenerate()) throw std::invalid_argument("c2_avoider: the set has an interval piece, so f is not strictly increasing");
  f_ = std::make_shared<VanishingDerivativeF>(d, Ambient::line(), opt.max_order, opt.rule);
  k_ = f_->endpoint_values();
  const auto & e = f_->endpoints();
  // terms: left ray, one bounded term per consecutive pair, right ray
  psi_k_.push_back(0);
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    Rational w = Rational(k_[i + 1] - k_[i]);
    psi_k_.push_back(psi_k_.back() + w * (e[i] + Rational(e[i + 1] - e[i]) / 2));
  }
  for (const auto & q : k_) kd_.push_back(q.get_d());
  for (const auto & q : psi_k_) psi_kd_.push_back(q.get_d());
}

double C2AvoidConstruction::phi(double y) const { return f_->inverse(y); }

namespace
{
struct PhiPieces
{
  const std::vector<Rational> & k;
  const std::vector<Rational> & e;
  const std::vector<BumpTerm> & terms;

  // integral of (phi - base) over [origin + u1, origin + u2], u1 <= u2
  double run(const Rational & origin, double u1, double u2, double base) const
  {
    const std::size_t m = k.size();
    std::vector<double> B(m);
    for (std::size_t j = 0; j < m; ++j) B[j] = Rational(k[j] - origin).get_d();
    const auto & step = SmoothStep::instance();
    double total = 0;
    // left ray: y = K_0 - s and phi = e_0 - E^-1(s)
    if (u1 < B[0]) {
      const BumpTerm & t = terms.front();
      double s1 = B[0] - u1, s2 = B[0] - std::min(u2, B[0]);
      double e0 = e.front().get_d();
      total += (e0 - base) * (s1 - s2) -
               t.c * (one_sided_inverse_integral(s1 / t.c, t.ell) - one_sided_inverse_integral(s2 / t.c, t.ell));
    }
    for (std::size_t j = 0; j + 1 < m; ++j) {
      double lo = std::max(u1, B[j]), hi = std::min(u2, B[j + 1]);
      if (!(lo < hi)) continue;
      const BumpTerm & t = terms[j + 1];
      double W = B[j + 1] - B[j], w = t.b - t.a;
      double r1 = std::clamp((lo - B[j]) / W, 0.0, 1.0), r2 = std::clamp((hi - B[j]) / W, 0.0, 1.0);
      double ej = e[j].get_d();
      total += (hi - lo) * (ej - base) + W * w * (step.inverse_integral(r2) - step.inverse_integral(r1));
    }
    if (u2 > B[m - 1]) {
      const BumpTerm & t = terms.back();
      double s1 = std::max(u1, B[m - 1]) - B[m - 1], s2 = u2 - B[m - 1];
      double el = e.back().get_d();
      total += (el - base) * (s2 - s1) +
               t.c * (one_sided_inverse_integral(s2 / t.c, t.ell) - one_sided_inverse_integral(s1 / t.c, t.ell));
    }
    return total;
  }
};
}  // namespace

double C2AvoidConstruction::phi_integral(double y1, double y2, double base) const
{
  if (y1 > y2) return -phi_integral(y2, y1, base);
  PhiPieces pp{k_, f_->endpoints(), f_->h().terms()};
  return pp.run(Rational(y1), 0.0, y2 - y1, base);
}

double C2AvoidConstruction::psi(double y) const
{
  auto it = std::upper_bound(kd_.begin(), kd_.end(), y);
  std::size_t j = it == kd_.begin() ? 0 : static_cast<std::size_t>(it - kd_.begin()) - 1;
  PhiPieces pp{k_, f_->endpoints(), f_->h().terms()};
  double u = Rational(Rational(y) - k_[j]).get_d();
  return psi_kd_[j] + (u >= 0 ? pp.run(k_[j], 0.0, u, 0.0) : -pp.run(k_[j], u, 0.0, 0.0));
}

double C2AvoidConstruction::local_m(double a, double b) const
{
  double s = f_->h().sup_on(phi(a), phi(b));
  return s > 0 ? 1.0 / s : kInf;
}

PointSet C2AvoidConstruction::graph() const
{
  std::vector<PointQ> pts;
  for (std::size_t i = 0; i < k_.size(); ++i) pts.push_back({k_[i], psi_k_[i]});
  return PointSet::from_rationals(std::move(pts));
}

std::vector<C2AvoidConstruction::Sample> C2AvoidConstruction::sample(std::size_t count) const
{
  if (count < 2) throw std::invalid_argument("sample: need at least two samples");
  double lo = kd_.front(), hi = kd_.back(), pad = 0.1 * (hi - lo);
  lo -= pad;
  hi += pad;
  std::vector<Sample> out;
  for (std::size_t i = 0; i < count; ++i) {
    double y = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back({y, phi(y), psi(y)});
  }
  return out;
}

C2AvoidConstruction c2_avoider(const ClosedSet & d, C2AvoidOptions opt) { return C2AvoidConstruction(d, opt); }

std::vector<double> default_t_ladder() { return {1e-1, 1e-2, 1e-3, 1e-4}; }

namespace
{
void check_ladder(double x, const std::vector<double> & t_list)
{
  if (t_list.empty()) throw std::invalid_argument("star_divergence_test: empty t list");
  for (double t : t_list) {
    if (t == 0 || !std::isfinite(t)) throw std::invalid_argument("star_divergence_test: t must be nonzero and finite");
    if (std::fabs(t) < 1e-13 * std::max(1.0, std::fabs(x)))
      throw std::domain_error("star_divergence_test: |t| = " + std::to_string(std::fabs(t)) +
                              " is below the resolution of the quadrature and inversion; use a larger |t|");
  }
}

bool increasing_tail(const std::vector<StarRow> & rows)
{
  if (rows.size() < 3) return false;
  const std::size_t n = rows.size();
  return rows[n - 3].q < rows[n - 2].q && rows[n - 2].q < rows[n - 1].q;
}
}  // namespace

StarTable star_divergence_test(const C2AvoidConstruction & c, double x, const std::vector<double> & t_list)
{
  check_ladder(x, t_list);
  StarTable tab;
  tab.x = x;
  // anchor at the nearest K point when x is one, so offsets stay exact
  Rational origin(x);
  double phix = c.phi(x);
  for (std::size_t i = 0; i < c.k().size(); ++i)
    if (c.k()[i].get_d() == x) {
      origin = c.k()[i];
      phix = c.f().endpoints()[i].get_d();
    }
  PhiPieces pp{c.k(), c.f().endpoints(), c.f().h().terms()};
  for (double t : t_list) {
    double num = t > 0 ? pp.run(origin, 0.0, t, phix) : -pp.run(origin, t, 0.0, phix);
    tab.rows.push_back({t, num / (t * t)});
  }
  tab.increasing_tail = increasing_tail(tab.rows);
  return tab;
}

StarTable star_divergence_test(const std::function<double(double)> & psi, const std::function<double(double)> & phi, double x,
                               const std::vector<double> & t_list)
{
  check_ladder(x, t_list);
  StarTable tab;
  tab.x = x;
  const double px = psi(x), fx = phi(x);
  for (double t : t_list) tab.rows.push_back({t, ((psi(x + t) - px) / t - fx) / t});
  tab.increasing_tail = increasing_tail(tab.rows);
  return tab;
}

DoubleInequalityReport check_double_inequality(const C2AvoidConstruction & c, const std::vector<double> & radii)
{
  DoubleInequalityReport rep;
  rep.worst_slack = kInf;
  for (std::size_t i = 0; i < c.k().size(); ++i) {
    const double x = c.k()[i].get_d();
    for (double r : radii) {
      const std::pair<double, double> pairs[] = {{x - r, x + r}, {x, x + r}, {x - r, x}};
      for (auto [a, b] : pairs) {
        const double len = b - a, M = c.local_m(a, b);
        const double pa = c.phi(a), pb = c.phi(b);
        // psi(b) - psi(a) - (b - a) phi(a) and (b - a) phi(b) - (psi(b) - psi(a)), each without cancellation
        const double lower_gap = c.phi_integral(a, b, pa);
        const double upper_gap = -c.phi_integral(a, b, pb);
        const double need = len * len * M / 2;
        const double scale = len * len * M;
        for (double gap : {lower_gap, upper_gap}) {
          ++rep.checks;
          double slack = (gap - need) / scale;
          rep.worst_slack = std::min(rep.worst_slack, slack);
          if (gap < need - 1e-9 * scale - 1e-300) ++rep.violations;
        }
      }
    }
  }
  return rep;
}

TaylorReport taylor_contradiction_scan(const std::vector<Rational> & x, const std::vector<Rational> & y, double lo, double hi)
{
  if (x.size() != y.size()) throw std::invalid_argument("taylor_contradiction_scan: x and y differ in length");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0 && !(x[i - 1] < x[i])) throw std::invalid_argument("taylor_contradiction_scan: x must increase");
    double xd = x[i].get_d();
    if (lo <= xd && xd <= hi) idx.push_back(i);
  }
  if (idx.size() < 3) throw std::invalid_argument("taylor_contradiction_scan: fewer than three samples in the window");
  TaylorReport rep;
  std::vector<double> lx, ly;
  rep.min_dd2 = kInf;
  rep.max_dd2 = -kInf;
  for (std::size_t k = 0; k + 2 < idx.size(); ++k) {
    std::size_t a = idx[k], b = idx[k + 1], c = idx[k + 2];
    Rational s1 = (y[b] - y[a]) / (x[b] - x[a]);
    Rational s2 = (y[c] - y[b]) / (x[c] - x[b]);
    Rational dd = (s2 - s1) / (x[c] - x[a]);
    TaylorRow row{a, Rational(x[c] - x[a]).get_d(), dd.get_d()};
    rep.rows.push_back(row);
    rep.min_dd2 = std::min(rep.min_dd2, row.dd2);
    rep.max_dd2 = std::max(rep.max_dd2, row.dd2);
    if (row.dd2 != 0) {
      lx.push_back(std::log(row.spacing));
      ly.push_back(std::log(std::fabs(row.dd2)));
    }
  }
  rep.loglog_slope = fit_slope(lx, ly);
  return rep;
}

SquiggleDemo squiggle_witness_demo(const ClosedSet & d, int level, int max_order, CoeffRule rule)
{
  if (d.empty()) throw std::invalid_argument("squiggle_witness_demo: empty set");
  VanishingDerivativeF f(d, Ambient::hull(d), max_order, rule);
  std::vector<PointQ> pts;
  for (std::size_t i = 0; i < f.endpoints().size(); ++i) pts.push_back({f.endpoints()[i], f.endpoint_values()[i]});
  SquiggleDemo demo;
  demo.points = PointSet::from_rationals(std::move(pts));
  demo.verdict = nonsquiggly_check(demo.points);
  if (demo.verdict.witness) {
    demo.note = "witness found among " + std::to_string(demo.points.size()) + " endpoint images";
  } else {
    demo.note = "no witness among " + std::to_string(demo.points.size()) + " endpoint images at level " + std::to_string(level) +
                "; try a deeper level";
  }
  return demo;
}

std::vector<double> C1Arc::at(double x) const
{
  std::vector<double> out;
  for (const auto & c : coords) out.push_back(c.value(x));
  return out;
}

C1Arc c1_arc_through(const PointSet & p, int depth, bool allow_shrink)
{
  if (p.size() < 2) throw std::invalid_argument("c1_arc_through: need at least two points");
  if (p.dim() < 2) throw std::invalid_argument("c1_arc_through: need dimension at least 2");
  const std::size_t n = p.dim();
  C1Arc arc;

  std::vector<std::size_t> order(p.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a][0] < p[b][0]; });
  bool distinct = true;
  double slope = 0;
  for (std::size_t a = 0; a < order.size() && distinct; ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      double dx = p[order[b]][0] - p[order[a]][0];
      if (!(dx > 0)) {
        distinct = false;
        break;
      }
      for (std::size_t c = 1; c < n; ++c) slope = std::max(slope, std::fabs((p[order[b]][c] - p[order[a]][c]) / dx));
    }

  if (distinct && (slope <= 1 || allow_shrink)) {
    arc.frame = slope <= 1 ? C1Arc::Frame::identity : C1Arc::Frame::shrink;
    arc.shrink = slope <= 1 ? 1.0 : slope;
    arc.y.assign(n - 1, {});
    for (std::size_t i : order) {
      arc.x.push_back(p[i][0]);
      for (std::size_t c = 1; c < n; ++c) arc.y[c - 1].push_back(p[i][c] / arc.shrink);
    }
    arc.max_abs_slope = slope / arc.shrink;
  } else {
    GraphTable g = rotate_to_graph(p);
    arc.frame = C1Arc::Frame::rotation;
    arc.rotation = g.rotation;
    arc.x = g.x;
    arc.y.assign(n - 1, {});
    for (const auto & row : g.y)
      for (std::size_t c = 0; c + 1 < n; ++c) arc.y[c].push_back(row[c]);
    arc.max_abs_slope = g.max_abs_slope;
  }

  std::vector<Rational> knots;
  for (double v : arc.x) knots.emplace_back(v);
  const ClosedSet base = ClosedSet::points(knots);
  for (std::size_t c = 0; c + 1 < n; ++c) {
    const auto & yc = arc.y[c];
    const auto & xs = arc.x;
    auto g = [&](std::size_t i, std::size_t j) { return (yc[j] - yc[i]) / (xs[j] - xs[i]); };
    arc.slope.push_back(diagonal_extend_sampled(xs, g, depth));
    arc.coords.push_back(c1_extend(base, yc, arc.slope.back().ghat));
    for (std::size_t j = 0; j < xs.size(); ++j)
      arc.max_interp_error = std::max(arc.max_interp_error, std::fabs(arc.coords.back().value(xs[j]) - yc[j]));
  }
  return arc;
}

nlohmann::json to_json(const StarTable & t)
{
  nlohmann::json rows = nlohmann::json::array();
  for (const auto & r : t.rows) rows.push_back({{"t", r.t}, {"Q", r.q}});
  return {{"x", t.x}, {"rows", rows}, {"increasing_tail", t.increasing_tail}};
}

nlohmann::json to_json(const TaylorReport & r)
{
  nlohmann::json rows = nlohmann::json::array();
  for (const auto & row : r.rows) rows.push_back({{"first", row.first}, {"spacing", row.spacing}, {"dd2", row.dd2}});
  return {{"rows", rows}, {"min_dd2", r.min_dd2}, {"max_dd2", r.max_dd2}, {"loglog_slope", r.loglog_slope}};
}

}  // namespace arcs

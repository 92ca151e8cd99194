#include "arcs/smoothtools.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace arcs
{
namespace
{
Poly poly_deriv(const Poly & p)
{
  if (p.size() <= 1) return {0.0};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = static_cast<double>(i) * p[i];
  return d;
}

Poly poly_mul(const Poly & a, const Poly & b)
{
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_axpy(double alpha, const Poly & x, const Poly & y)
{
  Poly r(std::max(x.size(), y.size()), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) r[i] += alpha * x[i];
  for (std::size_t i = 0; i < y.size(); ++i) r[i] += y[i];
  return r;
}

constexpr double kEndpointClamp = 1e-12;

// Integral of h_(0,1) over a short piece. Far out in the tail the integrand is
// below 1e-200 and the estimate is only a few digits; no convergence check.
double bump_piece(double a, double b)
{
  return integrate_detailed([](double t) { return unit_bump_at(t); }, a, b, 1e-12, 4).value;
}

double golden_max(const std::function<double(double)> & g, double lo, double hi)
{
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double g1 = g(x1), g2 = g(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + phi * (hi - lo);
      g2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - phi * (hi - lo);
      g1 = g(x1);
    }
  }
  return std::max({g1, g2, g(lo), g(hi)});
}

}  // namespace

double poly_eval(const Poly & p, double x)
{
  double r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
  return r;
}

ExpReciprocal::ExpReciprocal(Poly p, double lambda, int max_order) : p_(std::move(p)), lambda_(lambda)
{
  Poly dp = poly_deriv(p_);
  Poly pp = poly_mul(p_, p_);
  Poly pdp = poly_mul(p_, dp);
  prefactors_.push_back({1.0});
  for (int k = 0; k < max_order; ++k) {
    const Poly & P = prefactors_.back();
    Poly next = poly_mul(poly_deriv(P), pp);
    next = poly_axpy(-2.0 * k, poly_mul(P, pdp), next);
    next = poly_axpy(lambda_, poly_mul(P, dp), next);
    prefactors_.push_back(std::move(next));
  }
}

double ExpReciprocal::derivative(double y, int k) const
{
  double pv = poly_eval(p_, y);
  if (!(pv > 0)) return 0.0;
  double P = poly_eval(prefactors_.at(static_cast<std::size_t>(k)), y);
  if (P == 0) return 0.0;
  double lg = std::log(std::fabs(P)) - 2.0 * k * std::log(pv) - lambda_ / pv;
  double v = std::exp(lg);
  return P < 0 ? -v : v;
}

const ExpReciprocal & unit_bump()
{
  static const ExpReciprocal bump(Poly{0.25, 0.0, -1.0}, 1.0, kBumpOrderCap);
  return bump;
}

const std::vector<double> & unit_bump_sup_norms()
{
  static const std::vector<double> norms = [] {
    std::vector<double> out;
    const int n = 20000;
    for (int k = 0; k < kBumpOrderCap; ++k) {
      auto g = [k](double z) { return std::fabs(unit_bump().derivative(z, k)); };
      // |h^(k)| is symmetric in z, so scan [0, 1/2)
      int best = 0;
      double bv = -1;
      for (int i = 0; i < n; ++i) {
        double v = g(0.5 * i / n);
        if (v > bv) {
          bv = v;
          best = i;
        }
      }
      double lo = 0.5 * std::max(best - 1, 0) / n, hi = 0.5 * std::min(best + 1, n - 1) / n;
      if (best == 0) lo = -hi;
      out.push_back(std::max(bv, golden_max(g, lo, hi)));
    }
    return out;
  }();
  return norms;
}

SmoothFn bump_interval(double a, double b, int max_order)
{
  if (!(a < b)) throw std::invalid_argument("bump_interval: need a < b");
  if (max_order < 0 || max_order > kBumpOrderCap) throw std::invalid_argument("bump_interval: order out of range");
  const double m = 0.5 * (a + b), r = 0.5 * (b - a);
  auto kernel = std::make_shared<ExpReciprocal>(Poly{r * r, 0.0, -1.0}, 1.0, max_order);
  const double w = b - a;
  return SmoothFn(
      [=](double x, int k) {
        if (x - a <= kEndpointClamp * w || b - x <= kEndpointClamp * w) return 0.0;
        return kernel->derivative(x - m, k);
      },
      max_order, "(" + std::to_string(a) + ", " + std::to_string(b) + ")");
}

double one_sided_bump(double d, double ell, int k)
{
  static const ExpReciprocal kernel(Poly{0.0, 1.0}, 1.0, kBumpOrderCap);
  if (!(d > 0)) return 0.0;
  return kernel.derivative(d / ell, k) * std::pow(ell, -k);
}

namespace
{
const double kInfinity = std::numeric_limits<double>::infinity();

// With x = ell/d and v = ell/u the one-sided integrals become smooth Laplace-type tails.
double tail_j2(double x)
{
  return integrate([x](double w) { return std::exp(-w) / ((x + w) * (x + w)); }, 0.0, kInfinity, 1e-12);
}

double tail_j3(double x)
{
  return integrate([x](double w) { return w * std::exp(-w) / ((x + w) * (x + w) * (x + w)); }, 0.0, kInfinity, 1e-12);
}

double near_part(double d, double ell)
{
  return integrate([ell](double u) { return std::exp(-ell / u); }, ell, d, 1e-12);
}
}  // namespace

double one_sided_integral(double d, double ell)
{
  if (!(d > 0)) return 0.0;
  double x = ell / d;
  if (x >= 1) return ell * std::exp(-x) * tail_j2(x);
  return one_sided_integral(ell, ell) + near_part(d, ell);
}

double one_sided_log_integral(double d, double ell)
{
  if (!(d > 0)) return -kInfinity;
  double x = ell / d;
  if (x >= 1) return std::log(ell) - x + std::log(tail_j2(x));
  return std::log(one_sided_integral(d, ell));
}

double one_sided_second_integral(double d, double ell)
{
  if (!(d > 0)) return 0.0;
  double x = ell / d;
  if (x >= 1) return ell * ell * std::exp(-x) / x * tail_j3(x);
  double far = integrate([ell, d](double v) { return (d - v) * std::exp(-ell / v); }, ell, d, 1e-12);
  return (d - ell) * one_sided_integral(ell, ell) + one_sided_second_integral(ell, ell) + far;
}

CoeffRule parse_coeff_rule(const std::string & name)
{
  if (name == "geometric") return CoeffRule::geometric;
  if (name == "per_gap" || name == "per-gap") return CoeffRule::per_gap;
  if (name == "uniform") return CoeffRule::uniform;
  throw std::invalid_argument("unknown coefficient rule: " + name);
}

std::string to_string(CoeffRule rule)
{
  switch (rule) {
    case CoeffRule::geometric: return "geometric";
    case CoeffRule::per_gap: return "per_gap";
    case CoeffRule::uniform: return "uniform";
  }
  return "?";
}

BumpSum::BumpSum(ClosedSet d, Ambient ambient, std::vector<BumpTerm> terms, int max_order, CoeffRule rule)
    : d_(std::move(d)), ambient_(std::move(ambient)), terms_(std::move(terms)), kmax_(max_order), rule_(rule)
{
  std::sort(terms_.begin(), terms_.end(), [](const BumpTerm & x, const BumpTerm & y) { return x.a < y.a; });
}

long BumpSum::locate(double x) const
{
  auto it = std::upper_bound(terms_.begin(), terms_.end(), x, [](double v, const BumpTerm & t) { return v < t.a; });
  if (it == terms_.begin()) return -1;
  --it;
  const BumpTerm & t = *it;
  bool inside = false;
  switch (t.kind) {
    case BumpTerm::Kind::bounded:
    case BumpTerm::Kind::right_ray: inside = t.a < x && x < t.b; break;
    case BumpTerm::Kind::left_ray: inside = x < t.b; break;
    case BumpTerm::Kind::left_edge: inside = t.a <= x && x < t.b; break;
    case BumpTerm::Kind::right_edge: inside = t.a < x && x <= t.b; break;
  }
  return inside ? static_cast<long>(it - terms_.begin()) : -1;
}

namespace
{
double term_derivative(const BumpTerm & t, double x, int k)
{
  switch (t.kind) {
    case BumpTerm::Kind::bounded: {
      double w = t.b - t.a;
      if (x - t.a <= kEndpointClamp * w || t.b - x <= kEndpointClamp * w) return 0.0;
      return t.c * std::pow(w, -k) * unit_bump().derivative((x - t.a) / w - 0.5, k);
    }
    case BumpTerm::Kind::right_ray:
    case BumpTerm::Kind::right_edge: return t.c * one_sided_bump(x - t.a, t.ell, k);
    case BumpTerm::Kind::left_ray:
    case BumpTerm::Kind::left_edge: return t.c * ((k % 2) ? -1.0 : 1.0) * one_sided_bump(t.b - x, t.ell, k);
  }
  return 0.0;
}
}  // namespace

double BumpSum::derivative(double x, int k) const
{
  if (k < 0 || k > kmax_) throw std::out_of_range("bump sum derivative order out of range");
  long i = locate(x);
  return i < 0 ? 0.0 : term_derivative(terms_[static_cast<std::size_t>(i)], x, k);
}

SmoothFn BumpSum::as_fn() const
{
  auto self = std::make_shared<BumpSum>(*this);
  return SmoothFn([self](double x, int k) { return self->derivative(x, k); }, kmax_, "complement of D");
}

double BumpSum::sup_on(double x1, double x2) const
{
  if (x1 > x2) std::swap(x1, x2);
  double best = 0;
  for (const auto & t : terms_) {
    double lo = std::max(x1, t.a), hi = std::min(x2, t.b);
    if (lo > hi) continue;
    double v = 0;
    switch (t.kind) {
      case BumpTerm::Kind::bounded: {
        double m = 0.5 * (t.a + t.b);
        double at = (lo <= m && m <= hi) ? m : (hi < m ? hi : lo);
        v = term_derivative(t, at, 0);
        break;
      }
      case BumpTerm::Kind::right_ray:
      case BumpTerm::Kind::right_edge: v = term_derivative(t, hi, 0); break;
      case BumpTerm::Kind::left_ray:
      case BumpTerm::Kind::left_edge: v = term_derivative(t, lo, 0); break;
    }
    best = std::max(best, v);
  }
  return best;
}

double BumpSum::term_integral(std::size_t i, double x) const
{
  const BumpTerm & t = terms_.at(i);
  switch (t.kind) {
    case BumpTerm::Kind::bounded: {
      double w = t.b - t.a;
      return t.c * w * SmoothStep::instance().norm_constant() * SmoothStep::instance().value((x - t.a) / w);
    }
    case BumpTerm::Kind::right_ray:
    case BumpTerm::Kind::right_edge: return t.c * one_sided_integral(x - t.a, t.ell);
    case BumpTerm::Kind::left_ray:
    case BumpTerm::Kind::left_edge: return t.c * one_sided_integral(t.b - x, t.ell);
  }
  return 0.0;
}

BumpSum bump_complement(const ClosedSet & d, const Ambient & ambient, int max_order, CoeffRule rule)
{
  if (max_order < 0 || max_order >= kBumpOrderCap) throw std::invalid_argument("bump_complement: order out of range");
  GapList g = gaps(d, ambient);
  const auto & sup = unit_bump_sup_norms();
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<BumpTerm> terms;
  for (const auto & gap : g.bounded) {
    double a = gap.a.get_d(), b = gap.b.get_d();
    double w = b - a, worst = 0;
    for (int k = 0; k <= max_order; ++k) worst = std::max(worst, sup[static_cast<std::size_t>(k)] * std::pow(w, -k));
    double c = rule == CoeffRule::uniform ? 1.0 : 1.0 / (1.0 + worst);
    terms.push_back({BumpTerm::Kind::bounded, a, b, c, w});
  }
  if (rule == CoeffRule::geometric) {
    std::vector<std::size_t> rank(terms.size());
    for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t p, std::size_t q) { return terms[p].b - terms[p].a > terms[q].b - terms[q].a; });
    for (std::size_t n = 0; n < rank.size(); ++n) terms[rank[n]].c *= std::ldexp(1.0, -static_cast<int>(n + 1));
  }

  double hull = Rational(d.max() - d.min()).get_d();
  double ell = hull > 0 ? hull : 1.0;
  if (g.left_ray) terms.push_back({BumpTerm::Kind::left_ray, -inf, g.left_ray->get_d(), 1.0, ell});
  if (g.right_ray) terms.push_back({BumpTerm::Kind::right_ray, g.right_ray->get_d(), inf, 1.0, ell});
  if (g.left_edge) {
    double a = g.left_edge->a.get_d(), b = g.left_edge->b.get_d();
    terms.push_back({BumpTerm::Kind::left_edge, a, b, 1.0, b - a});
  }
  if (g.right_edge) {
    double a = g.right_edge->a.get_d(), b = g.right_edge->b.get_d();
    terms.push_back({BumpTerm::Kind::right_edge, a, b, 1.0, b - a});
  }
  return BumpSum(d, ambient, std::move(terms), max_order, rule);
}

SmoothStep::SmoothStep()
{
  C_ = integrate([](double t) { return unit_bump_at(t); }, 0.0, 1.0, 1e-13);
  const int n = 256;
  dt_ = 0.5 / n;
  checkpoints_.resize(n + 1);
  checkpoints_[0] = 0;
  for (int i = 1; i <= n; ++i)
    checkpoints_[static_cast<std::size_t>(i)] =
        checkpoints_[static_cast<std::size_t>(i - 1)] + bump_piece((i - 1) * dt_, i * dt_) / C_;
  S_.push_back(1.0);
  for (double s : unit_bump_sup_norms()) S_.push_back(s / C_);
}

const SmoothStep & SmoothStep::instance()
{
  static const SmoothStep step;
  return step;
}

double SmoothStep::value(double t) const
{
  if (!(t > 0)) return 0.0;
  if (t >= 1) return 1.0;
  if (t > 0.5) return 1.0 - value(1.0 - t);
  std::size_t i = std::min(static_cast<std::size_t>(t / dt_), checkpoints_.size() - 1);
  double t0 = static_cast<double>(i) * dt_;
  if (t0 > t) {
    --i;
    t0 = static_cast<double>(i) * dt_;
  }
  if (t == t0) return checkpoints_[i];
  return checkpoints_[i] + bump_piece(t0, t) / C_;
}

double SmoothStep::derivative(double t, int k) const
{
  if (k == 0) return value(t);
  if (k < 0 || k > kBumpOrderCap + 1) throw std::out_of_range("smooth step derivative order out of range");
  if (!(t > 0) || t >= 1) return 0.0;
  if (t <= kEndpointClamp || 1 - t <= kEndpointClamp) return 0.0;
  return unit_bump_at(t, k - 1) / C_;
}

double SmoothStep::inverse(double r) const
{
  if (!(r > 0)) return 0.0;
  if (r >= 1) return 1.0;
  if (r > 0.5) return 1.0 - inverse(1.0 - r);
  auto it = std::lower_bound(checkpoints_.begin(), checkpoints_.end(), r);
  std::size_t i = static_cast<std::size_t>(it - checkpoints_.begin());
  if (checkpoints_[i] == r) return static_cast<double>(i) * dt_;
  double lo = static_cast<double>(i - 1) * dt_, hi = static_cast<double>(i) * dt_;
  double x = 0.5 * (lo + hi);
  // safeguarded Newton: take the Newton step when it stays inside the bracket
  for (int it2 = 0; it2 < 200; ++it2) {
    double fx = value(x) - r;
    if (fx == 0) return x;
    if (fx < 0) lo = x;
    else hi = x;
    double d = derivative(x, 1);
    double nx = d > 0 ? x - fx / d : 0.5 * (lo + hi);
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (nx == x || hi - lo <= 2 * std::numeric_limits<double>::epsilon() * hi) return nx;
    x = nx;
  }
  return x;
}

double SmoothStep::integral(double s) const
{
  if (!(s > 0)) return 0.0;
  if (s >= 1) return 0.5 + (s - 1);
  if (s > 0.5) return s - 0.5 + integral(1.0 - s);
  return integrate_detailed([s](double u) { return (s - u) * unit_bump_at(u); }, 0.0, s, 1e-12).value / C_;
}

double SmoothStep::inverse_integral(double r) const
{
  if (!(r > 0)) return 0.0;
  if (r > 1) throw std::domain_error("inverse_integral: r must lie in [0, 1]");
  if (r > 0.5) return r - 0.5 + inverse_integral(1.0 - r);
  double s = inverse(r);
  return r * s - integral(s);
}

SmoothFn smooth_step(int max_order)
{
  if (max_order < 0 || max_order > kBumpOrderCap + 1) throw std::invalid_argument("smooth_step: order out of range");
  const SmoothStep & st = SmoothStep::instance();
  return SmoothFn([&st](double t, int k) { return st.derivative(t, k); }, max_order, "[0, 1]");
}

SmoothFn linear_step()
{
  return SmoothFn(
      [](double t, int k) {
        if (k == 0) return std::clamp(t, 0.0, 1.0);
        if (k == 1) return (t > 0 && t < 1) ? 1.0 : 0.0;
        return 0.0;
      },
      kBumpOrderCap + 1, "[0, 1]");
}

QuadResult integrate_detailed(const std::function<double(double)> & f, double a, double b, double tol, unsigned max_depth)
{
  if (!(a <= b)) throw std::invalid_argument("integrate: need a <= b");
  QuadResult r;
  if (a == b) return r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol, &r.error, &r.l1);
  if (!std::isfinite(r.value)) throw QuadratureError("integrate: non-finite result");
  return r;
}

double integrate(const std::function<double(double)> & f, double a, double b, double tol)
{
  QuadResult r = integrate_detailed(f, a, b, tol);
  double floor = 64 * std::numeric_limits<double>::epsilon() * r.l1;
  if (r.error > std::max(10 * tol * r.l1, floor) && r.error > 1e-300)
    throw QuadratureError("integrate: no convergence at recursion cap (error estimate " + std::to_string(r.error) + ")");
  return r.value;
}

double integrate(const SmoothFn & f, double a, double b, double tol)
{
  return integrate([&f](double x) { return f(x); }, a, b, tol);
}

double invert_monotone(const std::function<double(double)> & f, double y, double lo, double hi, double tol)
{
  if (!(lo < hi)) throw std::invalid_argument("invert_monotone: empty bracket");
  double flo = f(lo), fhi = f(hi);
  if (y < flo || y > fhi) throw std::domain_error("invert_monotone: target outside the bracket's range");
  const int probes = 32;
  double prev = flo;
  for (int i = 1; i <= probes; ++i) {
    double v = f(lo + (hi - lo) * i / probes);
    if (v < prev) throw std::runtime_error("invert_monotone: function decreases inside the bracket");
    prev = v;
  }
  for (int it = 0; it < 2000; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < y) lo = mid;
    else hi = mid;
  }
  double x = (std::fabs(f(lo) - y) <= std::fabs(f(hi) - y)) ? lo : hi;
  if (std::fabs(f(x) - y) > tol) throw std::runtime_error("invert_monotone: residual above tolerance (discontinuity?)");
  return x;
}

}  // namespace arcs

#ifndef ARCS_HERMITE_HPP_
#define ARCS_HERMITE_HPP_

#include "arcs/rational.hpp"
#include "arcs/realsets.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace arcs
{
namespace detail
{
inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational & x) { return abs_of(x); }
inline bool finite_value(double x) { return std::isfinite(x); }
inline bool finite_value(const Rational &) { return true; }
}  // namespace detail

/// Bounded cubic on [a1, a2] matching values b_i and slopes s_i, kept in the
/// factored form L(x) + beta2 (x-a1)^2 (x-a2) + beta1 (x-a1) (x-a2)^2.
template <class T>
struct CubicSegmentT
{
  T a1, a2, b1, b2, s1, s2;
  T s;      // secant slope
  T M;      // max(|s1 - s|, |s2 - s|)
  T beta1, beta2;

  T line(const T & x) const { return b1 + s * (x - a1); }

  T value(const T & x) const
  {
    T u = x - a1, v = x - a2;
    return line(x) + beta2 * u * u * v + beta1 * u * v * v;
  }

  T slope(const T & x) const
  {
    T u = x - a1, v = x - a2;
    // d/dx [u^2 v] = 2uv + u^2, d/dx [u v^2] = v^2 + 2uv
    return s + beta2 * (2 * u * v + u * u) + beta1 * (v * v + 2 * u * v);
  }

  T second(const T & x) const
  {
    T u = x - a1, v = x - a2;
    return beta2 * (2 * v + 4 * u) + beta1 * (2 * u + 4 * v);
  }
};

using CubicSegment = CubicSegmentT<double>;
using CubicSegmentQ = CubicSegmentT<Rational>;

template <class T>
CubicSegmentT<T> hermite_cubic(const T & a1, const T & a2, const T & b1, const T & b2, const T & s1, const T & s2)
{
  using detail::finite_value;
  if (!(finite_value(a1) && finite_value(a2) && finite_value(b1) && finite_value(b2) && finite_value(s1) && finite_value(s2)))
    throw std::invalid_argument("hermite_cubic: non-finite input");
  if (!(a1 < a2)) throw std::invalid_argument("hermite_cubic: need a1 < a2");
  CubicSegmentT<T> c{a1, a2, b1, b2, s1, s2, T(0), T(0), T(0), T(0)};
  T w = a2 - a1;
  c.s = (b2 - b1) / w;
  T d1 = s1 - c.s, d2 = s2 - c.s;
  c.M = std::max(detail::abs_value(d1), detail::abs_value(d2));
  c.beta1 = d1 / (w * w);
  c.beta2 = d2 / (w * w);
  return c;
}

struct BoundReport
{
  double max_slope_dev = 0;   // max |f' - s| / M
  double max_value_dev = 0;   // max |f - L| / (M (a2 - a1))
  double max_secant_dev = 0;  // max |secant - s| / M over all grid pairs
  bool within(double tol = 1e-9) const
  {
    return max_slope_dev <= 3 + tol && max_value_dev <= 2 + tol && max_secant_dev <= 3 + tol;
  }
};

inline constexpr int kDefaultHermiteGrid = 1024;

BoundReport verify_hermite_bounds(const CubicSegment & seg, int grid_size = kDefaultHermiteGrid);

/// C^1 extension of (f, h) given at the distinct endpoints of D.
///
/// Consecutive knots are bridged by Hermite cubics (this covers bounded gaps
/// and also the inside of nondegenerate pieces, where only endpoint data
/// exist); the outer rays continue linearly with the endpoint slope.
template <class T>
class PiecewiseC1T
{
public:
  PiecewiseC1T() = default;

  PiecewiseC1T(std::vector<T> knots, std::vector<T> f, std::vector<T> h) : knots_(std::move(knots)), f_(std::move(f)), h_(std::move(h))
  {
    if (knots_.empty()) throw std::invalid_argument("c1_extend: empty base set");
    if (f_.size() != knots_.size() || h_.size() != knots_.size())
      throw std::invalid_argument("c1_extend: need one value and one slope per endpoint (got " + std::to_string(f_.size()) + "/" +
                                  std::to_string(h_.size()) + " for " + std::to_string(knots_.size()) + ")");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      if (!(knots_[i - 1] < knots_[i])) throw std::invalid_argument("c1_extend: knots must increase");
      segs_.push_back(hermite_cubic<T>(knots_[i - 1], knots_[i], f_[i - 1], f_[i], h_[i - 1], h_[i]));
    }
  }

  T value(const T & x) const
  {
    if (x <= knots_.front()) return f_.front() + (x - knots_.front()) * h_.front();
    if (x >= knots_.back()) return f_.back() + (x - knots_.back()) * h_.back();
    return segs_[locate(x)].value(x);
  }

  T slope(const T & x) const
  {
    if (x <= knots_.front()) return h_.front();
    if (x >= knots_.back()) return h_.back();
    return segs_[locate(x)].slope(x);
  }

  const std::vector<T> & knots() const { return knots_; }
  const std::vector<T> & values() const { return f_; }
  const std::vector<T> & slopes() const { return h_; }
  const std::vector<CubicSegmentT<T>> & segments() const { return segs_; }

private:
  std::size_t locate(const T & x) const
  {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    return static_cast<std::size_t>(it - knots_.begin()) - 1;
  }

  std::vector<T> knots_, f_, h_;
  std::vector<CubicSegmentT<T>> segs_;
};

using PiecewiseC1 = PiecewiseC1T<double>;
using PiecewiseC1Q = PiecewiseC1T<Rational>;

/// Samples are aligned with d.endpoints().
PiecewiseC1Q c1_extend(const ClosedSet & d, std::vector<Rational> f, std::vector<Rational> h);
PiecewiseC1 c1_extend(const ClosedSet & d, std::vector<double> f, std::vector<double> h);

/// Convenience: sample f and h as functions at the endpoints of D.
PiecewiseC1Q c1_extend(const ClosedSet & d, const std::function<Rational(const Rational &)> & f,
                       const std::function<Rational(const Rational &)> & h);

/// Converts an exact extension to its double counterpart.
PiecewiseC1 to_double(const PiecewiseC1Q & p);

struct ModulusEntry
{
  double eps = 0;
  double delta = 0;      // largest tested delta whose pairs all pass
  bool vacuous = false;  // no tested delta with pairs passed; delta is half the nearest-neighbour distance
  std::optional<std::pair<double, double>> failure;  // first failing pair at the smallest tested delta
};

struct ModulusRow
{
  double x = 0;
  std::vector<ModulusEntry> entries;
};

/// For each sample x and eps: largest delta among the distances |x - y| such that every
/// difference quotient over sample pairs within delta of x differs from h(x) by less than eps.
std::vector<ModulusRow> strong_derivative_modulus(const std::vector<double> & xs, const std::vector<double> & f,
                                                  const std::vector<double> & h, const std::vector<double> & eps_list);

nlohmann::json to_json(const CubicSegment & seg);

}  // namespace arcs

#endif  // ARCS_HERMITE_HPP_

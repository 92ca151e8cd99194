#ifndef ARCS_CONSTRUCTIONS_HPP_
#define ARCS_CONSTRUCTIONS_HPP_

#include "arcs/coloring.hpp"
#include "arcs/geometry.hpp"
#include "arcs/hermite.hpp"
#include "arcs/rational.hpp"
#include "arcs/realsets.hpp"
#include "arcs/smoothtools.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace arcs
{
/// f(x) = anchor + integral of h_U from the anchor, so f' >= 0 vanishes exactly on D.
/// The anchor is the left end of a bounded ambient, or min D on the whole line.
class VanishingDerivativeF
{
public:
  VanishingDerivativeF(ClosedSet d, Ambient ambient, int max_order = 6, CoeffRule rule = CoeffRule::geometric);

  double operator()(double x) const;
  /// k = 0 is f itself, k >= 1 is h_U^(k-1).
  double derivative(double x, int k) const;
  SmoothFn as_fn() const;

  /// Smallest x with f(x) = y (plateaus over interval pieces resolve to their left end).
  double inverse(double y) const;

  /// Exact f at the distinct endpoints of D: every bump contributes its total mass
  /// rounded once to a double, and the running sum is kept in rationals.
  const std::vector<Rational> & endpoint_values() const { return endpoint_values_; }
  const std::vector<Rational> & endpoints() const { return endpoints_; }

  const BumpSum & h() const { return h_; }
  const ClosedSet & set() const { return h_.set(); }
  /// No gap of D inside the ambient: h_U is identically 0 and f is constant.
  bool degenerate() const { return h_.terms().empty(); }
  /// f is strictly increasing exactly when D has no interval piece.
  bool strictly_increasing() const { return !degenerate() && set().all_degenerate(); }

  /// Mass of term i (infinite for rays) and the value of f at its left end (right end for left rays).
  double mass(std::size_t i) const { return mass_[i]; }
  double start_value(std::size_t i) const { return start_[i]; }

private:
  BumpSum h_;
  double anchor_;
  std::vector<double> mass_;
  std::vector<double> start_;
  std::vector<Rational> endpoints_;
  std::vector<Rational> endpoint_values_;
};

VanishingDerivativeF build_vanishing_derivative_f(const ClosedSet & d, const Ambient & ambient, int max_order = 6,
                                                  CoeffRule rule = CoeffRule::geometric);

struct C2AvoidOptions
{
  CoeffRule rule = CoeffRule::per_gap;
  int max_order = 2;
};

/// phi = f^-1 and psi with psi' = phi, psi(K_0) = 0, where f is built on the whole line.
class C2AvoidConstruction
{
public:
  C2AvoidConstruction(const ClosedSet & d, C2AvoidOptions opt = {});

  const VanishingDerivativeF & f() const { return *f_; }
  const ClosedSet & set() const { return f_->set(); }

  double phi(double y) const;
  double psi(double y) const;
  /// integral over [y1, y2] of (phi - base), summed gap by gap in local coordinates.
  double phi_integral(double y1, double y2, double base = 0) const;
  /// 1 / sup h_U over [phi(a), phi(b)]: a lower bound for phi' on [a, b].
  double local_m(double a, double b) const;

  /// K = f(D) and psi on K, exact.
  const std::vector<Rational> & k() const { return k_; }
  const std::vector<Rational> & psi_k() const { return psi_k_; }
  PointSet graph() const;

  struct Sample
  {
    double y, phi, psi;
  };
  /// Uniform grid over [K_0 - pad, K_last + pad], pad = a tenth of the span of K.
  std::vector<Sample> sample(std::size_t count) const;

private:
  std::shared_ptr<VanishingDerivativeF> f_;
  std::vector<Rational> k_;
  std::vector<Rational> psi_k_;
  std::vector<double> kd_;
  std::vector<double> psi_kd_;
};

/// Requires D with no interval pieces and at least two points.
C2AvoidConstruction c2_avoider(const ClosedSet & d, C2AvoidOptions opt = {});

struct StarRow
{
  double t = 0;
  double q = 0;
};

struct StarTable
{
  double x = 0;
  std::vector<StarRow> rows;
  /// Q increasing in 1/|t| over the last three rungs.
  bool increasing_tail = false;
};

/// Q(x, t) = ((psi(x + t) - psi(x)) / t - phi(x)) / t, evaluated as t^-2 * integral of (phi - phi(x)).
StarTable star_divergence_test(const C2AvoidConstruction & c, double x, const std::vector<double> & t_list);

/// Comparison mode for an explicit pair (psi, phi = psi').
StarTable star_divergence_test(const std::function<double(double)> & psi, const std::function<double(double)> & phi, double x,
                               const std::vector<double> & t_list);

std::vector<double> default_t_ladder();

struct DoubleInequalityReport
{
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst_slack = 0;  // smallest (rhs - lhs) / scale over both inequalities
};

/// (b-a) phi(a) + (b-a)^2 M/2 <= psi(b) - psi(a) <= (b-a) phi(b) - (b-a)^2 M/2 with M = local_m(a, b),
/// for a < b drawn around each K point at the given radii.
DoubleInequalityReport check_double_inequality(const C2AvoidConstruction & c, const std::vector<double> & radii);

struct TaylorRow
{
  std::size_t first = 0;  // index of the left point of the triple
  double spacing = 0;     // x_{i+2} - x_i
  double dd2 = 0;         // second divided difference
};

struct TaylorReport
{
  std::vector<TaylorRow> rows;
  double min_dd2 = 0;
  double max_dd2 = 0;
  /// Least-squares slope of log |dd2| against log spacing (negative when dd2 grows as spacing shrinks).
  double loglog_slope = 0;
};

/// Consecutive triples of (x, y) with x inside [lo, hi]; x must increase.
TaylorReport taylor_contradiction_scan(const std::vector<Rational> & x, const std::vector<Rational> & y, double lo, double hi);

struct SquiggleDemo
{
  PointSet points;  // graph of f on the endpoints of D
  SquiggleVerdict verdict;
  std::string note;
};

/// Graph of the vanishing-derivative f over the endpoints of D, tested for a squiggle.
SquiggleDemo squiggle_witness_demo(const ClosedSet & d, int level, int max_order = 6, CoeffRule rule = CoeffRule::geometric);

struct C1Arc
{
  enum class Frame
  {
    identity,
    shrink,
    rotation
  };
  Frame frame = Frame::identity;
  double shrink = 1;  // y is divided by this in the shrink frame
  std::vector<std::vector<double>> rotation;
  std::vector<double> x;               // abscissae in the working frame
  std::vector<std::vector<double>> y;  // y[i][j]: coordinate i at x[j]
  std::vector<SampledDiagonal> slope;  // recovered strong derivative per coordinate
  std::vector<PiecewiseC1> coords;     // A^i
  double max_interp_error = 0;
  double max_abs_slope = 0;

  std::vector<double> at(double x) const;
};

/// Graph frame, per-coordinate diagonal extension of the slope oracle, then C1 extension.
C1Arc c1_arc_through(const PointSet & p, int depth, bool allow_shrink = false);

nlohmann::json to_json(const StarTable & t);
nlohmann::json to_json(const TaylorReport & r);

}  // namespace arcs

#endif  // ARCS_CONSTRUCTIONS_HPP_

#ifndef ARCS_FLATINTERP_HPP_
#define ARCS_FLATINTERP_HPP_

#include "arcs/geometry.hpp"
#include "arcs/rational.hpp"
#include "arcs/smoothtools.hpp"

#include <json.hpp>

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace arcs
{
class FlatDataError : public std::invalid_argument
{
public:
  FlatDataError(const std::string & what, long index = -1, std::string address = {})
      : std::invalid_argument(what), index_(index), address_(std::move(address))
  {
  }
  long index() const { return index_; }
  const std::string & address() const { return address_; }

private:
  long index_;
  std::string address_;
};

/// Samples g: D -> R^n on a finite D in [0, 1] containing 0 and 1, kept exact.
struct FlatPathData
{
  std::vector<Rational> d;  // strictly increasing
  std::vector<PointQ> g;

  std::size_t dim() const { return g.empty() ? 0 : g.front().size(); }
  void validate() const;
};

struct FlatnessTable
{
  std::vector<double> M;  // M[alpha], alpha = 0..alpha_max
  std::vector<std::pair<std::size_t, std::size_t>> argmax;
  std::optional<int> blowup_alpha;  // first alpha with M[alpha] / M[alpha-1] above the threshold
};

/// M_alpha = max over sample pairs of |g(u) - g(t)| / |u - t|^alpha.
FlatnessTable flatness_constants(const FlatPathData & data, int alpha_max,
                                 double growth_threshold = std::numeric_limits<double>::infinity());

/// Exact check of |g(u) - g(t)| <= bound |u - t|^alpha over all sample pairs.
bool certify_flatness_bound(const FlatPathData & data, int alpha, const Rational & bound);

/// g~ on [0, 1]: on each gap (a, b), g(a) + (g(b) - g(a)) psi((u - a)/(b - a)).
class InterpolatedPath
{
public:
  InterpolatedPath(FlatPathData data, SmoothFn psi);

  Point value(double u) const;
  /// Chain rule on gaps; 0 at points of D for k >= 1.
  Point derivative(double u, int k) const;
  int max_order() const { return psi_.max_order(); }
  const FlatPathData & data() const { return data_; }
  const std::vector<double> & knots() const { return d_; }
  const std::vector<Point> & samples() const { return g_; }
  /// Index i of the gap (d_i, d_{i+1}) holding u, or -1 when u is in D or outside [0, 1].
  long gap_of(double u) const;

private:
  FlatPathData data_;
  SmoothFn psi_;
  std::vector<double> d_;
  std::vector<Point> g_;
};

InterpolatedPath psi_interpolate(const FlatPathData & data, const SmoothFn & psi);

struct FlatBoundRow
{
  int k = 0;
  double B = 0;
  std::size_t checks = 0;
  double worst_ratio = 0;  // max of |lhs| / (B |u - t|^2)
  bool passed = true;
};

struct FlatBoundReport
{
  std::vector<double> M;
  std::vector<double> S;
  std::vector<FlatBoundRow> rows;
  bool all_passed = true;
  // a pair u, t in one gap where the order-0 bound fails, as expected off D
  std::optional<std::pair<double, double>> off_set_failure;
};

/// Constants from the two-subcase argument:
/// B_0 = max(M_4 S_0, M_0 S_4 / 4!) + M_2 and B_k = max(M_{k+4} S_k, M_0 S_{2k+4} / (k+4)!) for k >= 1.
std::vector<double> flat_bound_constants(const std::vector<double> & M, const std::vector<double> & S, int k_max);

FlatBoundReport verify_flat_bounds(const InterpolatedPath & path, int k_max, int samples = 1000);

struct PolygonalArc
{
  FlatPathData data;
  bool segment_check_done = false;
  bool segments_meet_only_at_vertices = true;
};

/// D = {0} u {2^-j : j < J}, g(0) = 0, g(2^-j) = x_j. Requires strictly decreasing norms and
/// |x_j| <= 2^{-j^2}; a violation throws FlatDataError naming j.
PolygonalArc polygonal_arc_data(const std::vector<PointQ> & x);

struct BoxQ
{
  PointQ lo;
  PointQ hi;
  PointQ center() const;
};

/// Nested boxes F_s keyed by binary address s ("" is the root); '1' stands for the digit 2.
using BoxTree = std::map<std::string, BoxQ>;

/// Cubes of side 3^{-j^2}/n at the low and high corners of their parent.
BoxTree diagonal_shrink_boxes(int level, std::size_t dim);

/// D = {t_a : |a| = level} u {1}; g(t_a) = centre of F_a and g(1) = centre of the upper
/// first-coordinate face of F_{11..1}.
FlatPathData cantor_arc_data(int level, const BoxTree & boxes);

nlohmann::json to_json(const FlatnessTable & t);
nlohmann::json to_json(const FlatBoundReport & r);

}  // namespace arcs

#endif  // ARCS_FLATINTERP_HPP_

#ifndef ARCS_GEOMETRY_HPP_
#define ARCS_GEOMETRY_HPP_

#include "arcs/rational.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace arcs
{
using Point = std::vector<double>;
using PointQ = std::vector<Rational>;

/// Distinct points of R^n (n >= 2). In exact mode the rational coordinates are
/// authoritative and the doubles are their roundings.
class PointSet
{
public:
  PointSet() = default;
  static PointSet from_doubles(std::vector<Point> pts);
  static PointSet from_rationals(std::vector<PointQ> pts);

  std::size_t size() const { return pts_.size(); }
  std::size_t dim() const { return dim_; }
  bool exact() const { return !exact_.empty(); }
  const Point & operator[](std::size_t i) const { return pts_[i]; }
  const std::vector<Point> & points() const { return pts_; }
  /// Rational coordinates; in double mode these are the exact values of the doubles.
  Rational coord_q(std::size_t i, std::size_t j) const { return exact() ? exact_[i][j] : Rational(pts_[i][j]); }

  PointSet subset(const std::vector<std::size_t> & idx) const;

private:
  std::size_t dim_ = 0;
  std::vector<Point> pts_;
  std::vector<PointQ> exact_;
};

class GeometryError : public std::runtime_error
{
public:
  GeometryError(const std::string & what, std::optional<std::pair<std::size_t, std::size_t>> pair = std::nullopt)
      : std::runtime_error(what), pair_(pair)
  {
  }
  const std::optional<std::pair<std::size_t, std::size_t>> & pair() const { return pair_; }

private:
  std::optional<std::pair<std::size_t, std::size_t>> pair_;
};

/// rho(x - y) = (x - y) / |x - y|.
Point direction(const Point & x, const Point & y);

struct DirectionVerdict
{
  bool directed = false;
  bool certified = true;  // false for a best-effort "no" in dimension > 2
  double eps = 0;
  double min_eps = 0;     // smallest eps found for this set
  Point v;                // witness direction
  std::optional<std::pair<std::size_t, std::size_t>> violating;
};

DirectionVerdict epsilon_directed(const PointSet & p, double eps);

struct SpreadResult
{
  double eps = 0;
  Point v;
  bool exact = true;
  std::pair<std::size_t, std::size_t> extreme{0, 0};  // pair farthest from v
};

SpreadResult min_direction_spread(const PointSet & p);

/// Sign of the signed area of (a, b, c) in the plane, decided exactly.
int orientation(const PointSet & p, std::size_t a, std::size_t b, std::size_t c);
int orientation_q(const PointQ & a, const PointQ & b, const PointQ & c);

struct SquiggleVerdict
{
  bool nonsquiggly = true;
  double delta = std::numeric_limits<double>::infinity();
  std::optional<std::array<std::size_t, 4>> witness;  // {x, y, z, t}: t strictly inside triangle xyz
};

SquiggleVerdict nonsquiggly_check(const PointSet & p, double delta = std::numeric_limits<double>::infinity());

/// Greedy inclusion-maximal non-squiggly subset (delta = infinity), points visited
/// in lexicographic coordinate order. Returns sorted indices.
std::vector<std::size_t> extract_nonsquiggly(const PointSet & p);

struct GraphTable
{
  std::vector<std::vector<double>> rotation;  // rows of R, with R v = e1
  PointSet rotated;
  std::vector<std::size_t> order;             // input index of each row, by increasing x
  std::vector<double> x;
  std::vector<std::vector<double>> y;         // y[i] = (y^1 .. y^{n-1}) at x[i]
  double max_abs_slope = 0;
};

inline double directed_45_eps() { return 2 * std::sin(std::numbers::pi / 8); }

/// Rotates a 2 sin(22.5 deg)-directed set so that it is the graph of a function of
/// the first coordinate with all pairwise planar slopes in [-1, 1].
GraphTable rotate_to_graph(const PointSet & p);

/// Closed segments [a, b] and [c, d] share at least one point (exact, planar).
bool segments_intersect(const PointQ & a, const PointQ & b, const PointQ & c, const PointQ & d);

nlohmann::json to_json(const DirectionVerdict & v);
nlohmann::json to_json(const SquiggleVerdict & v, const PointSet & p);

}  // namespace arcs

#endif  // ARCS_GEOMETRY_HPP_

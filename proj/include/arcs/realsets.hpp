#ifndef ARCS_REALSETS_HPP_
#define ARCS_REALSETS_HPP_

#include "arcs/rational.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace arcs
{
struct Interval
{
  Rational lo;
  Rational hi;

  bool degenerate() const { return lo == hi; }
  Rational length() const { return hi - lo; }
};

/// Finite union of disjoint closed intervals, stored in increasing order.
class ClosedSet
{
public:
  ClosedSet() = default;

  /// Validates ordering and disjointness; throws std::invalid_argument otherwise.
  explicit ClosedSet(std::vector<Interval> pieces);

  static ClosedSet points(std::vector<Rational> pts);

  const std::vector<Interval> & pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  bool empty() const { return pieces_.empty(); }

  bool contains(const Rational & x) const;
  bool contains(double x) const;

  /// Distinct piece endpoints in increasing order (a degenerate piece contributes one point).
  std::vector<Rational> endpoints() const;

  /// True when every piece is a single point.
  bool all_degenerate() const;

  Rational min() const { return pieces_.front().lo; }
  Rational max() const { return pieces_.back().hi; }

private:
  std::vector<Interval> pieces_;
};

inline constexpr int kCantorLevelCap = 20;

/// Level-k middle-thirds approximation of [lo, hi].
ClosedSet make_cantor(int level, const Rational & lo, const Rational & hi, int cap = kCantorLevelCap);

/// Left endpoints t_a of the level-k pieces, i.e. lo + (hi-lo) * sum a_i 3^-i with a_i in {0,2}.
std::vector<Rational> cantor_points(int level, const Rational & lo, const Rational & hi, int cap = kCantorLevelCap);

/// Either the whole real line or a closed interval [lo, hi].
struct Ambient
{
  bool whole_line = true;
  Rational lo;
  Rational hi;

  static Ambient line() { return {}; }
  static Ambient interval(const Rational & lo, const Rational & hi);
  static Ambient hull(const ClosedSet & d) { return interval(d.min(), d.max()); }
};

struct Gap
{
  Rational a;
  Rational b;
};

/// Complement of a ClosedSet inside an ambient set.
///
/// Rays are (-inf, left_ray) and (right_ray, +inf). For a bounded ambient the
/// leftover pieces at the edges are the half-open gaps [ambient.lo, left_edge.b)
/// and (right_edge.a, ambient.hi].
struct GapList
{
  std::vector<Gap> bounded;
  std::optional<Rational> left_ray;
  std::optional<Rational> right_ray;
  std::optional<Gap> left_edge;
  std::optional<Gap> right_edge;
};

GapList gaps(const ClosedSet & d, const Ambient & ambient);

inline bool contains(const ClosedSet & d, const Rational & x) { return d.contains(x); }
inline bool contains(const ClosedSet & d, double x) { return d.contains(x); }

nlohmann::json to_json(const ClosedSet & d);
ClosedSet closed_set_from_json(const nlohmann::json & j);

}  // namespace arcs

#endif  // ARCS_REALSETS_HPP_

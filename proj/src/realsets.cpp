#include "arcs/realsets.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace arcs
{
std::string to_string(const Rational & q)
{
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(std::string_view text)
{
  std::string s(text);
  auto slash = s.find('/');
  auto valid_int = [](const std::string & t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(i), t.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("malformed rational: " + s);
  mpz_class n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + s);
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Rational pow_of(const Rational & base, unsigned exp)
{
  Rational r = 1;
  Rational b = base;
  while (exp) {
    if (exp & 1u) r *= b;
    b *= b;
    exp >>= 1u;
  }
  return r;
}

ClosedSet::ClosedSet(std::vector<Interval> pieces) : pieces_(std::move(pieces))
{
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].lo > pieces_[i].hi) throw std::invalid_argument("interval with lo > hi");
    if (i > 0 && !(pieces_[i - 1].hi < pieces_[i].lo))
      throw std::invalid_argument("pieces must be disjoint and increasing");
  }
}

ClosedSet ClosedSet::points(std::vector<Rational> pts)
{
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Interval> pieces;
  pieces.reserve(pts.size());
  for (auto & p : pts) pieces.push_back({p, p});
  return ClosedSet(std::move(pieces));
}

bool ClosedSet::contains(const Rational & x) const
{
  // first piece whose hi >= x
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x, [](const Interval & iv, const Rational & v) { return iv.hi < v; });
  return it != pieces_.end() && it->lo <= x;
}

bool ClosedSet::contains(double x) const { return contains(Rational(x)); }

std::vector<Rational> ClosedSet::endpoints() const
{
  std::vector<Rational> out;
  out.reserve(2 * pieces_.size());
  for (const auto & p : pieces_) {
    out.push_back(p.lo);
    if (!p.degenerate()) out.push_back(p.hi);
  }
  return out;
}

bool ClosedSet::all_degenerate() const
{
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Interval & p) { return p.degenerate(); });
}

namespace
{
void check_level(int level, int cap, const Rational & lo, const Rational & hi)
{
  if (level < 0) throw std::invalid_argument("cantor level must be nonnegative");
  if (level > cap) throw std::invalid_argument("cantor level " + std::to_string(level) + " exceeds cap " + std::to_string(cap));
  if (!(lo < hi)) throw std::invalid_argument("cantor ambient must be nondegenerate");
}
}  // namespace

std::vector<Rational> cantor_points(int level, const Rational & lo, const Rational & hi, int cap)
{
  check_level(level, cap, lo, hi);
  std::vector<Rational> pts{lo};
  Rational step = hi - lo;
  for (int k = 0; k < level; ++k) {
    step /= 3;
    std::vector<Rational> next;
    next.reserve(2 * pts.size());
    for (const auto & p : pts) {
      next.push_back(p);
      next.push_back(p + 2 * step);
    }
    pts.swap(next);
  }
  return pts;
}

ClosedSet make_cantor(int level, const Rational & lo, const Rational & hi, int cap)
{
  auto left = cantor_points(level, lo, hi, cap);
  Rational width = (hi - lo) / pow_of(Rational(3), static_cast<unsigned>(level));
  std::vector<Interval> pieces;
  pieces.reserve(left.size());
  for (auto & l : left) pieces.push_back({l, l + width});
  return ClosedSet(std::move(pieces));
}

Ambient Ambient::interval(const Rational & lo, const Rational & hi)
{
  if (lo > hi) throw std::invalid_argument("ambient interval with lo > hi");
  return {false, lo, hi};
}

GapList gaps(const ClosedSet & d, const Ambient & ambient)
{
  if (d.empty()) throw std::invalid_argument("gaps of an empty set");
  if (!ambient.whole_line && (d.min() < ambient.lo || d.max() > ambient.hi))
    throw std::invalid_argument("set is not contained in the ambient interval");
  GapList g;
  const auto & p = d.pieces();
  for (std::size_t i = 1; i < p.size(); ++i) g.bounded.push_back({p[i - 1].hi, p[i].lo});
  if (ambient.whole_line) {
    g.left_ray = d.min();
    g.right_ray = d.max();
  } else {
    if (ambient.lo < d.min()) g.left_edge = Gap{ambient.lo, d.min()};
    if (d.max() < ambient.hi) g.right_edge = Gap{d.max(), ambient.hi};
  }
  return g;
}

nlohmann::json to_json(const ClosedSet & d)
{
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto & p : d.pieces()) pieces.push_back({to_string(p.lo), to_string(p.hi)});
  return {{"pieces", pieces}};
}

ClosedSet closed_set_from_json(const nlohmann::json & j)
{
  std::vector<Interval> pieces;
  for (const auto & p : j.at("pieces")) {
    if (!p.is_array() || p.size() != 2) throw std::invalid_argument("piece must be a [lo, hi] pair");
    pieces.push_back({parse_rational(p[0].get<std::string>()), parse_rational(p[1].get<std::string>())});
  }
  return ClosedSet(std::move(pieces));
}

}  // namespace arcs

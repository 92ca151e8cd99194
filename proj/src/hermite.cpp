#include "arcs/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace arcs
{
BoundReport verify_hermite_bounds(const CubicSegment & seg, int grid_size)
{
  if (grid_size < 2) throw std::invalid_argument("verify_hermite_bounds: grid_size must be >= 2");
  BoundReport r;
  if (seg.M == 0) return r;

  const std::size_t n = static_cast<std::size_t>(grid_size);
  const double w = seg.a2 - seg.a1;
  std::vector<double> xs(n), fs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = i + 1 == n ? seg.a2 : seg.a1 + w * static_cast<double>(i) / static_cast<double>(n - 1);
    fs[i] = seg.value(xs[i]);
    r.max_slope_dev = std::max(r.max_slope_dev, std::fabs(seg.slope(xs[i]) - seg.s));
    r.max_value_dev = std::max(r.max_value_dev, std::fabs(fs[i] - seg.line(xs[i])));
  }
  double sec = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sec = std::max(sec, std::fabs((fs[j] - fs[i]) / (xs[j] - xs[i]) - seg.s));

  r.max_slope_dev /= seg.M;
  r.max_value_dev /= seg.M * w;
  r.max_secant_dev = sec / seg.M;
  return r;
}

PiecewiseC1Q c1_extend(const ClosedSet & d, std::vector<Rational> f, std::vector<Rational> h)
{
  return PiecewiseC1Q(d.endpoints(), std::move(f), std::move(h));
}

PiecewiseC1 c1_extend(const ClosedSet & d, std::vector<double> f, std::vector<double> h)
{
  std::vector<double> knots;
  for (const auto & e : d.endpoints()) knots.push_back(e.get_d());
  return PiecewiseC1(std::move(knots), std::move(f), std::move(h));
}

PiecewiseC1Q c1_extend(const ClosedSet & d, const std::function<Rational(const Rational &)> & f,
                       const std::function<Rational(const Rational &)> & h)
{
  auto pts = d.endpoints();
  std::vector<Rational> fv, hv;
  for (const auto & p : pts) {
    fv.push_back(f(p));
    hv.push_back(h(p));
  }
  return PiecewiseC1Q(std::move(pts), std::move(fv), std::move(hv));
}

PiecewiseC1 to_double(const PiecewiseC1Q & p)
{
  auto conv = [](const std::vector<Rational> & v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto & q : v) out.push_back(q.get_d());
    return out;
  };
  return PiecewiseC1(conv(p.knots()), conv(p.values()), conv(p.slopes()));
}

std::vector<ModulusRow> strong_derivative_modulus(const std::vector<double> & xs, const std::vector<double> & f,
                                                  const std::vector<double> & h, const std::vector<double> & eps_list)
{
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("strong_derivative_modulus: need at least two samples");
  if (f.size() != n || h.size() != n) throw std::invalid_argument("strong_derivative_modulus: sample size mismatch");

  std::vector<ModulusRow> rows;
  rows.reserve(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return std::fabs(xs[p] - xs[i]) < std::fabs(xs[q] - xs[i]); });

    // Grow the window of samples around xs[i] one distance level at a time; dev[k]
    // is the worst quotient deviation once every sample within dist[k] is included.
    std::vector<double> dist, dev;
    std::vector<std::pair<std::size_t, std::size_t>> worst;
    std::vector<std::size_t> window{i};
    double cur = 0;
    std::pair<std::size_t, std::size_t> cur_pair{i, i};
    std::size_t k = 1;  // order[0] == i
    while (k < n) {
      double dk = std::fabs(xs[order[k]] - xs[i]);
      std::size_t group_end = k;
      while (group_end < n && std::fabs(xs[order[group_end]] - xs[i]) == dk) ++group_end;
      for (std::size_t g = k; g < group_end; ++g) {
        std::size_t y = order[g];
        for (std::size_t z : window) {
          double q = (f[y] - f[z]) / (xs[y] - xs[z]);
          double e = std::fabs(q - h[i]);
          if (e > cur) {
            cur = e;
            cur_pair = {std::min(y, z), std::max(y, z)};
          }
        }
        window.push_back(y);
      }
      dist.push_back(dk);
      dev.push_back(cur);
      worst.push_back(cur_pair);
      k = group_end;
    }

    ModulusRow row{xs[i], {}};
    for (double eps : eps_list) {
      ModulusEntry e;
      e.eps = eps;
      std::size_t pass = dist.size();
      for (std::size_t j = 0; j < dist.size(); ++j)
        if (dev[j] < eps) pass = j;
        else break;
      if (pass == dist.size()) {
        e.vacuous = true;
        e.delta = dist.front() / 2;
        e.failure = std::make_pair(xs[worst.front().first], xs[worst.front().second]);
      } else {
        e.delta = dist[pass];
      }
      row.entries.push_back(e);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const CubicSegment & seg)
{
  return {{"a1", seg.a1}, {"a2", seg.a2}, {"b1", seg.b1}, {"b2", seg.b2}, {"s1", seg.s1}, {"s2", seg.s2}, {"beta1", seg.beta1}, {"beta2", seg.beta2}};
}

}  // namespace arcs

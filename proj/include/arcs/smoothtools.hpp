#ifndef ARCS_SMOOTHTOOLS_HPP_
#define ARCS_SMOOTHTOOLS_HPP_

#include "arcs/realsets.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcs
{
/// Real function with derivatives up to a declared order.
class SmoothFn
{
public:
  using Deriv = std::function<double(double, int)>;

  SmoothFn() = default;
  SmoothFn(Deriv d, int max_order, std::string support) : d_(std::move(d)), kmax_(max_order), support_(std::move(support)) {}

  double operator()(double x) const { return d_(x, 0); }
  double derivative(double x, int k) const
  {
    if (k < 0 || k > kmax_) throw std::out_of_range("derivative order " + std::to_string(k) + " exceeds " + std::to_string(kmax_));
    return d_(x, k);
  }
  int max_order() const { return kmax_; }
  const std::string & support() const { return support_; }

private:
  Deriv d_;
  int kmax_ = 0;
  std::string support_;
};

/// Dense polynomial, coefficients in increasing degree.
using Poly = std::vector<double>;
double poly_eval(const Poly & p, double x);

/// G(y) = exp(-lambda / p(y)) with derivatives G^(k) = P_k / p^(2k) * G,
/// where P_{k+1} = P_k' p^2 - 2k P_k p p' + lambda P_k p'.
class ExpReciprocal
{
public:
  ExpReciprocal(Poly p, double lambda, int max_order);
  /// 0 wherever p(y) <= 0.
  double derivative(double y, int k) const;
  int max_order() const { return static_cast<int>(prefactors_.size()) - 1; }
  const Poly & prefactor(int k) const { return prefactors_.at(static_cast<std::size_t>(k)); }

private:
  Poly p_;
  double lambda_;
  std::vector<Poly> prefactors_;
};

inline constexpr int kBumpOrderCap = 12;

/// h_(a,b)(x) = exp(-1 / ((x-a)(b-x))) on (a, b), 0 elsewhere.
SmoothFn bump_interval(double a, double b, int max_order = 6);

/// The standard bump h_(0,1) in the centred variable z = t - 1/2.
const ExpReciprocal & unit_bump();
inline double unit_bump_at(double t, int k = 0) { return (t <= 0 || t >= 1) ? 0.0 : unit_bump().derivative(t - 0.5, k); }

/// sup over (0,1) of |h_(0,1)^(k)| for k = 0..kBumpOrderCap-1.
const std::vector<double> & unit_bump_sup_norms();

enum class CoeffRule
{
  geometric,  // 2^-n / (1 + max_k sup |h_n^(k)|), gaps ranked by decreasing length
  per_gap,    // 1 / (1 + max_k sup |h_n^(k)|)
  uniform     // 1
};

CoeffRule parse_coeff_rule(const std::string & name);
std::string to_string(CoeffRule rule);

struct BumpTerm
{
  enum class Kind
  {
    bounded,   // c * h_(0,1)((x - a) / w) on (a, b)
    left_ray,  // c * exp(-ell / (b - x)) on (-inf, b)
    right_ray, // c * exp(-ell / (x - a)) on (a, inf)
    left_edge, // as left_ray, restricted to [a, b)
    right_edge // as right_ray, restricted to (a, b]
  };
  Kind kind;
  double a;
  double b;
  double c;
  double ell;  // length scale of one-sided terms
};

/// Sum of nonnegative bumps over the gaps of D; zero exactly on D.
class BumpSum
{
public:
  BumpSum(ClosedSet d, Ambient ambient, std::vector<BumpTerm> terms, int max_order, CoeffRule rule);

  double derivative(double x, int k) const;
  double operator()(double x) const { return derivative(x, 0); }
  SmoothFn as_fn() const;

  /// sup of the sum over [x1, x2]; exact because every term is unimodal or monotone.
  double sup_on(double x1, double x2) const;

  /// Integral of term i from its finite left end (or from its right end backwards for left rays) up to x.
  double term_integral(std::size_t i, double x) const;

  const std::vector<BumpTerm> & terms() const { return terms_; }
  const ClosedSet & set() const { return d_; }
  const Ambient & ambient() const { return ambient_; }
  int max_order() const { return kmax_; }
  CoeffRule rule() const { return rule_; }

  /// Index of the term whose open support contains x, or -1.
  long locate(double x) const;

private:
  ClosedSet d_;
  Ambient ambient_;
  std::vector<BumpTerm> terms_;
  int kmax_;
  CoeffRule rule_;
};

BumpSum bump_complement(const ClosedSet & d, const Ambient & ambient, int max_order = 6, CoeffRule rule = CoeffRule::geometric);

/// exp(-ell/d) for d > 0 and its k-th derivative in d.
double one_sided_bump(double d, double ell, int k = 0);

/// E(d) = integral_0^d exp(-ell/s) ds.
double one_sided_integral(double d, double ell);
/// log E(d), finite wherever d > 0 even when E(d) underflows.
double one_sided_log_integral(double d, double ell);
/// integral_0^d E(u) du = integral_0^d (d - v) exp(-ell/v) dv.
double one_sided_second_integral(double d, double ell);

/// The smooth step psi(t) = integral_0^t h_(0,1) / C with C = integral_0^1 h_(0,1).
class SmoothStep
{
public:
  static const SmoothStep & instance();

  double norm_constant() const { return C_; }
  double value(double t) const;
  double derivative(double t, int k) const;
  /// Inverse on [0, 1].
  double inverse(double r) const;
  /// integral_0^s psi.
  double integral(double s) const;
  /// integral_0^r psi^-1, via r psi^-1(r) - integral_0^{psi^-1(r)} psi.
  double inverse_integral(double r) const;
  /// S_k = sup |psi^(k)| for k = 0..kBumpOrderCap.
  const std::vector<double> & sup_norms() const { return S_; }

private:
  SmoothStep();
  double C_;
  double dt_;
  std::vector<double> checkpoints_;  // psi at i * dt_ on [0, 1/2]
  std::vector<double> S_;
};

SmoothFn smooth_step(int max_order = 6);

/// psi(t) = t on [0,1], clamped outside; an interpolation function that is not smooth at 0 and 1.
SmoothFn linear_step();

class QuadratureError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct QuadResult
{
  double value = 0;
  double error = 0;
  double l1 = 0;
};

/// Adaptive Gauss-Kronrod; tol is relative to the L1 norm of the integrand.
QuadResult integrate_detailed(const std::function<double(double)> & f, double a, double b, double tol = 1e-12, unsigned max_depth = 10);
double integrate(const std::function<double(double)> & f, double a, double b, double tol = 1e-12);
double integrate(const SmoothFn & f, double a, double b, double tol = 1e-12);

/// Bisection to full double precision. Throws std::domain_error when y is out of range
/// and std::runtime_error when sampling detects a decrease.
double invert_monotone(const std::function<double(double)> & f, double y, double lo, double hi, double tol = 1e-12);
inline double invert_monotone(const SmoothFn & f, double y, double lo, double hi, double tol = 1e-12)
{
  return invert_monotone([&f](double x) { return f(x); }, y, lo, hi, tol);
}

}  // namespace arcs

#endif  // ARCS_SMOOTHTOOLS_HPP_

#ifndef ARCS_RATIONAL_HPP_
#define ARCS_RATIONAL_HPP_

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace arcs
{
/// Exact rational number. Doubles convert exactly (every finite double is dyadic).
using Rational = mpq_class;

/// Always "p/q", including integers ("3/1") and zero ("0/1").
std::string to_string(const Rational & q);

/// Accepts "p/q" or a bare integer "p". Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// num/den in lowest terms.
inline Rational ratio(long num, long den)
{
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational & q) { return q.get_d(); }

inline Rational abs_of(const Rational & q)
{
  Rational r = q;
  if (sgn(r) < 0) r = -r;
  return r;
}

/// base^exp for a nonnegative integer exponent.
Rational pow_of(const Rational & base, unsigned exp);

}  // namespace arcs

#endif  // ARCS_RATIONAL_HPP_

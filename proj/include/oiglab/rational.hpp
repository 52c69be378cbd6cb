#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace boost {

// Under C++20 rewritten comparisons, boost 1.74's mixed rational/integer
// operator== resolves to its own reversed form and recurses forever. These
// exact-match overloads win overload resolution and also serve != and the
// reversed spellings.
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) {
  return a.denominator() == 1 && a.numerator() == b;
}

}  // namespace boost

namespace oiglab {

/// Exact rational used for every error rate, loss and cost in the library.
using Rational = boost::rational<std::int64_t>;

/// Parses "7", "-3/4" or a finite decimal such as "0.125" exactly.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

std::int64_t floor_of(const Rational& q);
std::int64_t ceil_of(const Rational& q);

}  // namespace oiglab

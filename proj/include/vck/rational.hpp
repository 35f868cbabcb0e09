#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vck {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q" or a bare integer string into an exact rational.
Rational parse_rational(const std::string& s);

// Canonical "p/q" form, q > 0, gcd(p,q) = 1 (e.g. "0/1", "3/4").
std::string format_rational(const Rational& r);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace vck

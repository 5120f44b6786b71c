#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace addcomb {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& q);
std::string to_string(const Int& n);

double to_double(const Rational& q);

// Accepts "13/5", "2.6", "-3", "0.0045". Decimal literals are converted exactly.
Rational parse_rational(std::string_view text);

inline Rational ratio(std::int64_t num, std::int64_t den) { return Rational(num, den); }

}  // namespace addcomb

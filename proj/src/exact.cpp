#include "addcomb/exact.hpp"

#include <stdexcept>

namespace addcomb {

std::string to_string(const Int& n) { return n.str(); }

std::string to_string(const Rational& q) {
  const Int num = boost::multiprecision::numerator(q);
  const Int den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace {

Int parse_integer(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad digit in '" + std::string(s) + "'");
  }
  return Int(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const Int den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    value = Rational(parse_integer(text.substr(0, slash)), den);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    Int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const Int w = whole.empty() ? Int(0) : parse_integer(whole);
    const Int f = frac.empty() ? Int(0) : parse_integer(frac);
    value = Rational(w * scale + f, scale);
  } else {
    value = Rational(parse_integer(text));
  }
  return negative ? Rational(-value) : value;
}

}  // namespace addcomb

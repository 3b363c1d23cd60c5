#include "delaystab/rational.hpp"

#include <cctype>
#include <charconv>
#include <system_error>

#include "delaystab/errors.hpp"

namespace delaystab {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw SpecError("malformed number '" + std::string(whole) + "'");
  cpp_int value = 0;
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw SpecError("malformed number '" + std::string(whole) + "'");
    value = value * 10 + (ch - '0');
  }
  return value;
}

cpp_int power_of_ten(long exponent) {
  cpp_int p = 1;
  for (long k = 0; k < exponent; ++k) p *= 10;
  return p;
}

Rational parse_decimal(std::string_view text, std::string_view whole) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    const std::string_view exp_text = text.substr(e + 1);
    const char* first = exp_text.data();
    const char* last = first + exp_text.size();
    if (!exp_text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc() || ptr != last || first == last)
      throw SpecError("malformed exponent in '" + std::string(whole) + "'");
    text = text.substr(0, e);
  }
  std::string digits;
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = text.substr(dot + 1);
    digits = std::string(text.substr(0, dot)) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
    if (text.substr(0, dot).empty() && frac.empty())
      throw SpecError("malformed number '" + std::string(whole) + "'");
  } else {
    digits = std::string(text);
  }
  if (exponent < -4000 || exponent > 4000)
    throw SpecError("exponent out of range in '" + std::string(whole) + "'");
  const cpp_int mantissa = parse_integer(digits, whole);
  Rational value = exponent >= 0 ? Rational(mantissa * power_of_ten(exponent))
                                 : Rational(mantissa, power_of_ten(-exponent));
  return negative ? Rational(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = trim(text);
  if (whole.empty()) throw SpecError("empty number");
  if (const auto slash = whole.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_decimal(trim(whole.substr(0, slash)), whole);
    const Rational den = parse_decimal(trim(whole.substr(slash + 1)), whole);
    if (den == 0) throw SpecError("zero denominator in '" + std::string(whole) + "'");
    return num / den;
  }
  return parse_decimal(whole, whole);
}

Rational rational_from_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw SpecError("cannot format number");
  const std::string_view text(buffer, static_cast<std::size_t>(ptr - buffer));
  if (text.find_first_of("ni") != std::string_view::npos)
    throw SpecError("non-finite number where a rational is required");
  return parse_rational(text);
}

std::string to_string(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace delaystab

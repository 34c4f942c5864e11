#include "ishikawa/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ishikawa {

Rational toRational(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("cannot represent a non-finite value as a rational");
  }
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // mantissa * 2^53 is an exact integer
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  return Rational(BigInt(scaled)) * pow2(static_cast<std::int64_t>(exponent) - 53);
}

double toDouble(const Rational& value) { return value.convert_to<double>(); }

namespace {

BigInt parseInteger(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  }
  BigInt out = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    }
    out = out * 10 + (c - '0');
  }
  return out;
}

Rational parseDecimal(std::string_view text, std::string_view whole) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::int64_t exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view expPart = text.substr(e + 1);
    bool expNegative = false;
    if (!expPart.empty() && (expPart.front() == '-' || expPart.front() == '+')) {
      expNegative = expPart.front() == '-';
      expPart.remove_prefix(1);
    }
    if (expPart.size() > 6) {
      throw std::invalid_argument("exponent out of range in '" + std::string(whole) + "'");
    }
    exponent = toInt64(parseInteger(expPart, whole));
    if (expNegative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string_view intPart = text;
  std::string_view fracPart;
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    intPart = text.substr(0, dot);
    fracPart = text.substr(dot + 1);
  }
  if (intPart.empty() && fracPart.empty()) {
    throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  }
  BigInt numerator = intPart.empty() ? BigInt(0) : parseInteger(intPart, whole);
  for (char c : fracPart) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    }
    numerator = numerator * 10 + (c - '0');
  }
  exponent -= static_cast<std::int64_t>(fracPart.size());
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::llabs(exponent)));
  Rational out = exponent >= 0 ? Rational(numerator * scale) : Rational(numerator, scale);
  return negative ? Rational(-out) : out;
}

}  // namespace

Rational parseRational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parseDecimal(text.substr(0, slash), text);
    const Rational den = parseDecimal(text.substr(slash + 1), text);
    if (den == 0) {
      throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    return num / den;
  }
  return parseDecimal(text, text);
}

std::string formatRational(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

BigInt floorOf(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;  // truncates toward zero
  if (num % den != 0 && num < 0) q -= 1;
  return q;
}

BigInt ceilOf(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;
  if (num % den != 0 && num > 0) q += 1;
  return q;
}

Rational pow2(std::int64_t exponent) {
  BigInt p = 1;
  p <<= static_cast<unsigned>(std::llabs(exponent));
  return exponent >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

std::int64_t ceilLog2(const Rational& value) {
  if (value <= 0) throw std::domain_error("ceilLog2 of a nonpositive value");
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  // msb gives floor(log2) of each part; the answer is within one of the difference
  std::int64_t m = static_cast<std::int64_t>(boost::multiprecision::msb(num)) -
                   static_cast<std::int64_t>(boost::multiprecision::msb(den));
  while (pow2(m) < value) ++m;
  while (pow2(m - 1) >= value) --m;
  return m;
}

std::int64_t ceilLog2(double value) {
  if (!(value > 0) || !std::isfinite(value)) throw std::domain_error("ceilLog2 of a nonpositive value");
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);  // value = mantissa * 2^exponent, mantissa in [0.5,1)
  return mantissa == 0.5 ? exponent - 1 : exponent;
}

std::int64_t toInt64(const BigInt& value) {
  if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("integer " + value.str() + " does not fit in 64 bits");
  }
  return value.convert_to<std::int64_t>();
}

std::uint64_t toUint64(const BigInt& value) {
  if (value < 0 || value > std::numeric_limits<std::uint64_t>::max()) {
    throw std::overflow_error("integer " + value.str() + " is not a 64-bit natural");
  }
  return value.convert_to<std::uint64_t>();
}

}  // namespace ishikawa

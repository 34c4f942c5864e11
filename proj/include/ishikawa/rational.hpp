#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ishikawa {

/// Exact rational number. Every finite double converts to it without loss,
/// which is what makes certified ceilings possible.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact conversion of a finite double.
Rational toRational(double value);

double toDouble(const Rational& value);

/// Parses "3", "-3/4", "0.125" or "1e-3" exactly (decimal strings are read as
/// decimal fractions, not through a double). Throws std::invalid_argument.
Rational parseRational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string formatRational(const Rational& value);

BigInt ceilOf(const Rational& value);
BigInt floorOf(const Rational& value);

/// Smallest integer m with 2^m >= value. Requires value > 0.
std::int64_t ceilLog2(const Rational& value);
std::int64_t ceilLog2(double value);

/// 2^exponent as an exact rational (negative exponents allowed).
Rational pow2(std::int64_t exponent);

/// Narrowing with a range check; throws std::overflow_error.
std::int64_t toInt64(const BigInt& value);
std::uint64_t toUint64(const BigInt& value);

}  // namespace ishikawa

#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hodisc {

using Int128 = __int128;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

std::string to_string(Int128 v);
Int128 parse_int128(const std::string& text);
BigInt to_bigint(Int128 v);
/// "num/den" (or "num" when den == 1).
std::string to_string(const Rational& r);

/// numerator / (divisor * 2^scale), exact. Arithmetic throws std::overflow_error
/// instead of wrapping.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(Int128 numerator, int scale, std::uint64_t divisor = 1);

  Int128 numerator() const { return num_; }
  int scale() const { return scale_; }
  std::uint64_t divisor() const { return div_; }

  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  double to_double() const;
  Rational to_rational() const;

  DyadicRational operator-() const { return {-num_, scale_, div_}; }
  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) { return a + (-b); }
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b);
  /// Value equality.
  friend bool operator==(const DyadicRational& a, const DyadicRational& b);

  std::string to_string() const;

 private:
  void normalize();

  Int128 num_ = 0;
  int scale_ = 0;
  std::uint64_t div_ = 1;
};

}  // namespace hodisc

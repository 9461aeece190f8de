#include "hodisc/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hodisc/error.hpp"

namespace hodisc {

namespace {

Int128 checked_mul(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("DyadicRational: numerator overflow");
  return out;
}

Int128 checked_add(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("DyadicRational: numerator overflow");
  return out;
}

Int128 checked_shl(Int128 a, int k) {
  if (k == 0 || a == 0) return a;
  if (k >= 126) throw std::overflow_error("DyadicRational: scale difference too large");
  return checked_mul(a, Int128{1} << k);
}

}  // namespace

std::string to_string(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string out;
  while (u != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

Int128 parse_int128(const std::string& text) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
  require(i < text.size(), "integer '" + text + "' is empty");
  Int128 v = 0;
  for (; i < text.size(); ++i) {
    require(text[i] >= '0' && text[i] <= '9', "integer '" + text + "' has a non-digit");
    v = checked_add(checked_mul(v, 10), text[i] - '0');
  }
  return neg ? -v : v;
}

BigInt to_bigint(Int128 v) {
  const bool neg = v < 0;
  const unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt out = static_cast<std::uint64_t>(u >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(u);
  return neg ? BigInt(-out) : out;
}

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

DyadicRational::DyadicRational(Int128 numerator, int scale, std::uint64_t divisor)
    : num_(numerator), scale_(scale), div_(divisor) {
  require(divisor >= 1, "DyadicRational: divisor must be >= 1");
  normalize();
}

void DyadicRational::normalize() {
  if (num_ == 0) {
    scale_ = 0;
    div_ = 1;
    return;
  }
  while ((div_ & 1) == 0) {
    div_ /= 2;
    ++scale_;
  }
  while (scale_ > 0 && (num_ & 1) == 0) {
    num_ /= 2;
    --scale_;
  }
}

double DyadicRational::to_double() const {
  return std::ldexp(static_cast<double>(num_) / static_cast<double>(div_), -scale_);
}

Rational DyadicRational::to_rational() const {
  BigInt den = div_;
  if (scale_ >= 0) {
    den <<= scale_;
    return Rational(to_bigint(num_), den);
  }
  BigInt num = to_bigint(num_);
  num <<= -scale_;
  return Rational(num, den);
}

DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
  const int scale = std::max(a.scale_, b.scale_);
  Int128 na = checked_shl(a.num_, scale - a.scale_);
  Int128 nb = checked_shl(b.num_, scale - b.scale_);
  if (a.div_ == b.div_) return {checked_add(na, nb), scale, a.div_};
  if (a.num_ == 0) return b;
  if (b.num_ == 0) return a;
  std::uint64_t div;
  if (__builtin_mul_overflow(a.div_, b.div_, &div)) throw std::overflow_error("DyadicRational: divisor overflow");
  return {checked_add(checked_mul(na, static_cast<Int128>(b.div_)),
                      checked_mul(nb, static_cast<Int128>(a.div_))),
          scale, div};
}

DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
  std::uint64_t div;
  if (__builtin_mul_overflow(a.div_, b.div_, &div)) throw std::overflow_error("DyadicRational: divisor overflow");
  return {checked_mul(a.num_, b.num_), a.scale_ + b.scale_, div};
}

bool operator==(const DyadicRational& a, const DyadicRational& b) {
  return a.to_rational() == b.to_rational();
}

std::string DyadicRational::to_string() const {
  return hodisc::to_string(to_rational());
}

}  // namespace hodisc

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace sumprod {

using BigInt = mpz_class;

/// Exact rational number in canonical form: the numerator carries the sign,
/// the denominator is positive, and gcd(|p|, q) = 1. Zero is 0/1.
///
/// Every set element and every derived quantity in the library is a Scalar;
/// there is no floating-point path except for display.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : value_(v) {}                // NOLINT(google-explicit-constructor)
  Scalar(long v) : value_(v) {}               // NOLINT(google-explicit-constructor)
  Scalar(long long v) : value_(BigInt(std::to_string(v))) {}  // NOLINT
  Scalar(unsigned long v) : value_(v) {}      // NOLINT(google-explicit-constructor)
  Scalar(unsigned long long v) : value_(BigInt(std::to_string(v))) {}  // NOLINT
  Scalar(const BigInt& v) : value_(v) {}      // NOLINT(google-explicit-constructor)
  explicit Scalar(const mpq_class& v) : value_(v) { value_.canonicalize(); }

  /// Canonical p/q. Throws DomainError("zero denominator") when q = 0.
  static Scalar fraction(const BigInt& p, const BigInt& q);

  /// Parses "[-]digits" or "[-]digits/digits" (positive denominator).
  /// Throws DomainError on malformed text or zero denominator.
  static Scalar parse(std::string_view text);

  BigInt numerator() const { return value_.get_num(); }
  BigInt denominator() const { return value_.get_den(); }
  const mpq_class& raw() const noexcept { return value_; }

  int sign() const noexcept { return sgn(value_); }
  bool is_zero() const noexcept { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  Scalar operator-() const { return Scalar(mpq_class(-value_)); }
  Scalar inverse() const;
  Scalar abs() const { return Scalar(mpq_class(::abs(value_))); }

  Scalar& operator+=(const Scalar& o) { value_ += o.value_; return *this; }
  Scalar& operator-=(const Scalar& o) { value_ -= o.value_; return *this; }
  Scalar& operator*=(const Scalar& o) { value_ *= o.value_; return *this; }
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Integer power, negative exponents allowed for nonzero values.
  Scalar pow(long exponent) const;

  /// "p" for integers, "p/q" otherwise.
  std::string str() const { return value_.get_str(); }

  /// Decimal rendering for humans only.
  double to_double() const { return value_.get_d(); }

  std::size_t hash() const noexcept;

 private:
  mpq_class value_;
};

/// Floor of a nonnegative rational.
BigInt floor(const Scalar& x);

/// ceil(log2 n) for n >= 1.
unsigned ceil_log2(std::uint64_t n);

/// Human rendering with 6 significant digits and the exact form alongside,
/// e.g. "0.333333 (1/3)"; integers print once.
std::string display(const Scalar& x);

}  // namespace sumprod

template <>
struct std::hash<sumprod::Scalar> {
  std::size_t operator()(const sumprod::Scalar& s) const noexcept { return s.hash(); }
};

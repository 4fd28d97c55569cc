#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sumprod/scalar.hpp"

namespace sumprod {

/// Exact value of the form  c * prod r_i^(e_i) * prod log2(m_j)^(f_j)
/// with rational c, integer radical bases r_i > 1 that are not perfect powers,
/// exponents e_i in (0, 1), and integers m_j >= 3 that are not powers of two.
///
/// This is the closed form of every right-hand side in the inequality
/// registry (|A|^(19/12) K^(-5/6), log factors, sqrt(sigma), ...). The
/// canonical form is deterministic, so str() is suitable for golden files.
class PowerProduct {
 public:
  PowerProduct() : coefficient_(1) {}
  PowerProduct(const Scalar& c) : coefficient_(c) {}  // NOLINT(google-explicit-constructor)
  PowerProduct(long c) : coefficient_(c) {}           // NOLINT(google-explicit-constructor)

  /// base^exponent for base > 0.
  static PowerProduct power(const Scalar& base, const Scalar& exponent);
  /// log2(m)^exponent for m >= 2.
  static PowerProduct log2_power(std::uint64_t m, const Scalar& exponent);
  /// Inverse of str(). Throws DomainError on malformed text.
  static PowerProduct parse(std::string_view text);

  PowerProduct& operator*=(const PowerProduct& o);
  PowerProduct& operator/=(const PowerProduct& o);
  friend PowerProduct operator*(PowerProduct a, const PowerProduct& b) { return a *= b; }
  friend PowerProduct operator/(PowerProduct a, const PowerProduct& b) { return a /= b; }
  PowerProduct pow(const Scalar& exponent) const;

  const Scalar& coefficient() const noexcept { return coefficient_; }
  bool is_rational() const noexcept { return radicals_.empty() && logs_.empty(); }
  std::optional<Scalar> as_rational() const;
  bool is_zero() const noexcept { return coefficient_.is_zero(); }
  const std::vector<std::pair<BigInt, Scalar>>& radicals() const noexcept { return radicals_; }
  const std::vector<std::pair<std::uint64_t, Scalar>>& logs() const noexcept { return logs_; }

  /// Natural logarithm of the absolute value (-inf for zero). Display only.
  double log_abs() const;
  /// Decimal rendering, 6 significant digits, scientific when large. Display only.
  std::string decimal() const;

  /// Canonical exact rendering, e.g. "136/31*2^(2/3)*31^(1/6)*log2(3)^(-1/2)".
  std::string str() const;

  friend bool operator==(const PowerProduct&, const PowerProduct&) = default;

 private:
  void absorb_radical(const BigInt& base, const Scalar& exponent);
  void absorb_log(std::uint64_t m, const Scalar& exponent);

  Scalar coefficient_;
  std::vector<std::pair<BigInt, Scalar>> radicals_;      // sorted by base
  std::vector<std::pair<std::uint64_t, Scalar>> logs_;  // sorted by m
};

/// Exact three-way comparison. Values whose quotient still carries log
/// factors, or whose radical exponents need an excessive common denominator,
/// cannot be decided by integer exponentiation and raise ResourceError.
std::strong_ordering compare(const PowerProduct& a, const PowerProduct& b);

}  // namespace sumprod

#include "sumprod/scalar.hpp"

#include <cctype>
#include <cstdio>
#include <string>

#include "sumprod/errors.hpp"

namespace sumprod {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return BigInt(std::string(s), 10);
}

}  // namespace

Scalar Scalar::fraction(const BigInt& p, const BigInt& q) {
  if (q == 0) throw DomainError("zero denominator");
  mpq_class v(p, q);
  v.canonicalize();
  return Scalar(v);
}

Scalar Scalar::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_literal(text)) throw DomainError("not a number: '" + std::string(text) + "'");
    return Scalar(parse_integer(text));
  }
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!is_integer_literal(num) || den.empty() || !is_integer_literal(den) || den.front() == '-' ||
      den.front() == '+') {
    throw DomainError("not a rational: '" + std::string(text) + "'");
  }
  return fraction(parse_integer(num), parse_integer(den));
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DomainError("zero denominator");
  mpq_class v;
  mpq_inv(v.get_mpq_t(), value_.get_mpq_t());
  return Scalar(v);
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw DomainError("zero denominator");
  value_ /= o.value_;
  return *this;
}

Scalar Scalar::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  // Powers of a reduced fraction stay reduced.
  mpq_class v;
  mpz_swap(mpq_numref(v.get_mpq_t()), num.get_mpz_t());
  mpz_swap(mpq_denref(v.get_mpq_t()), den.get_mpz_t());
  Scalar out;
  out.value_ = std::move(v);
  return out;
}

std::size_t Scalar::hash() const noexcept {
  auto mix = [](std::size_t h, mpz_srcptr z) {
    const std::size_t n = mpz_size(z);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<std::size_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))) + 0x9e3779b97f4a7c15ULL +
           (h << 6) + (h >> 2);
    }
    return h ^ static_cast<std::size_t>(mpz_sgn(z) + 1);
  };
  std::size_t h = mix(0, value_.get_num_mpz_t());
  return mix(h * 31, value_.get_den_mpz_t());
}

BigInt floor(const Scalar& x) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), x.raw().get_num_mpz_t(), x.raw().get_den_mpz_t());
  return out;
}

unsigned ceil_log2(std::uint64_t n) {
  unsigned k = 0;
  while ((std::uint64_t{1} << k) < n) ++k;
  return k;
}

std::string display(const Scalar& x) {
  if (x.is_integer()) return x.str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x.to_double());
  return std::string(buf) + " (" + x.str() + ")";
}

}  // namespace sumprod

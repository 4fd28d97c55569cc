#include "sumprod/power_product.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <cstdio>

#include "sumprod/errors.hpp"

namespace sumprod {

namespace {

constexpr long kMaxFoldedExponent = 1L << 20;
constexpr double kMaxCompareBits = 1e8;

// b = r^k with k maximal.
std::pair<BigInt, unsigned long> perfect_power_root(const BigInt& b) {
  if (b < 4 || !mpz_perfect_power_p(b.get_mpz_t())) return {b, 1};
  const auto bits = static_cast<unsigned long>(mpz_sizeinbase(b.get_mpz_t(), 2));
  for (unsigned long k = bits; k >= 2; --k) {
    BigInt r;
    if (mpz_root(r.get_mpz_t(), b.get_mpz_t(), k) != 0) return {r, k};
  }
  return {b, 1};
}

long to_long_exponent(const BigInt& e) {
  if (!e.fits_slong_p() || abs(e) > kMaxFoldedExponent) throw ResourceError("exponent too large to fold");
  return e.get_si();
}

double log_of(const BigInt& z) {
  if (z == 0) return -INFINITY;
  long exp2 = 0;
  const double m = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(std::fabs(m)) + static_cast<double>(exp2) * std::log(2.0);
}

std::string paren(const Scalar& e) { return "(" + e.str() + ")"; }

}  // namespace

PowerProduct PowerProduct::power(const Scalar& base, const Scalar& exponent) {
  if (exponent.is_integer()) {
    if (base.is_zero()) {
      if (exponent.sign() <= 0) throw DomainError("zero to a nonpositive power");
      return PowerProduct(Scalar{});
    }
    return PowerProduct(base.pow(to_long_exponent(exponent.numerator())));
  }
  if (base.sign() <= 0) throw DomainError("fractional power of a nonpositive base");
  PowerProduct out;
  out.absorb_radical(base.numerator(), exponent);
  out.absorb_radical(base.denominator(), -exponent);
  return out;
}

PowerProduct PowerProduct::log2_power(std::uint64_t m, const Scalar& exponent) {
  PowerProduct out;
  out.absorb_log(m, exponent);
  return out;
}

void PowerProduct::absorb_radical(const BigInt& base, const Scalar& exponent) {
  if (base == 1 || exponent.is_zero()) return;
  const auto [root, k] = perfect_power_root(base);
  const Scalar e = exponent * Scalar(k);
  auto it = std::lower_bound(radicals_.begin(), radicals_.end(), root,
                             [](const auto& entry, const BigInt& r) { return entry.first < r; });
  Scalar total = e;
  if (it != radicals_.end() && it->first == root) total += it->second;
  const BigInt whole = floor(total);
  const Scalar frac = total - Scalar(whole);
  if (whole != 0) coefficient_ *= Scalar(root).pow(to_long_exponent(whole));
  if (it != radicals_.end() && it->first == root) {
    if (frac.is_zero()) {
      radicals_.erase(it);
    } else {
      it->second = frac;
    }
  } else if (!frac.is_zero()) {
    radicals_.insert(it, {root, frac});
  }
}

void PowerProduct::absorb_log(std::uint64_t m, const Scalar& exponent) {
  if (m < 2) throw DomainError("log2 factor needs an argument of at least 2");
  if (exponent.is_zero()) return;
  if ((m & (m - 1)) == 0) {
    const auto k = static_cast<unsigned long>(std::countr_zero(m));
    *this *= power(Scalar(k), exponent);
    return;
  }
  auto it = std::lower_bound(logs_.begin(), logs_.end(), m,
                             [](const auto& entry, std::uint64_t v) { return entry.first < v; });
  if (it != logs_.end() && it->first == m) {
    it->second += exponent;
    if (it->second.is_zero()) logs_.erase(it);
  } else {
    logs_.insert(it, {m, exponent});
  }
}

PowerProduct& PowerProduct::operator*=(const PowerProduct& o) {
  coefficient_ *= o.coefficient_;
  if (coefficient_.is_zero()) {
    radicals_.clear();
    logs_.clear();
    return *this;
  }
  for (const auto& [r, e] : o.radicals_) absorb_radical(r, e);
  for (const auto& [m, f] : o.logs_) absorb_log(m, f);
  return *this;
}

PowerProduct& PowerProduct::operator/=(const PowerProduct& o) {
  if (o.coefficient_.is_zero()) throw DomainError("division by zero");
  if (coefficient_.is_zero()) return *this;
  coefficient_ /= o.coefficient_;
  for (const auto& [r, e] : o.radicals_) absorb_radical(r, -e);
  for (const auto& [m, f] : o.logs_) absorb_log(m, -f);
  return *this;
}

PowerProduct PowerProduct::pow(const Scalar& exponent) const {
  if (coefficient_.sign() < 0 && !exponent.is_integer()) throw DomainError("fractional power of a negative value");
  PowerProduct out = power(coefficient_, exponent);
  if (out.is_zero()) return out;
  for (const auto& [r, e] : radicals_) out.absorb_radical(r, e * exponent);
  for (const auto& [m, f] : logs_) out.absorb_log(m, f * exponent);
  return out;
}

std::optional<Scalar> PowerProduct::as_rational() const {
  if (!is_rational()) return std::nullopt;
  return coefficient_;
}

double PowerProduct::log_abs() const {
  if (coefficient_.is_zero()) return -INFINITY;
  double v = log_of(coefficient_.numerator()) - log_of(coefficient_.denominator());
  for (const auto& [r, e] : radicals_) v += e.to_double() * log_of(r);
  for (const auto& [m, f] : logs_) v += f.to_double() * std::log(std::log2(static_cast<double>(m)));
  return v;
}

std::string PowerProduct::decimal() const {
  if (coefficient_.is_zero()) return "0";
  const double l10 = log_abs() / std::log(10.0);
  const char* sign = coefficient_.sign() < 0 ? "-" : "";
  char buf[64];
  if (std::fabs(l10) < 15) {
    std::snprintf(buf, sizeof buf, "%s%.6g", sign, std::pow(10.0, l10));
  } else {
    double ex = std::floor(l10);
    double mant = std::pow(10.0, l10 - ex);
    if (mant >= 9.999995) {
      mant = 1;
      ex += 1;
    }
    std::snprintf(buf, sizeof buf, "%s%.6ge%+.0f", sign, mant, ex);
  }
  return buf;
}

std::string PowerProduct::str() const {
  std::string s = coefficient_.str();
  for (const auto& [r, e] : radicals_) s += "*" + r.get_str() + "^" + paren(e);
  for (const auto& [m, f] : logs_) s += "*log2(" + std::to_string(m) + ")^" + paren(f);
  return s;
}

PowerProduct PowerProduct::parse(std::string_view text) {
  auto bad = [&] { return DomainError("malformed power product '" + std::string(text) + "'"); };
  // factor "x^(e)" -> (x, e)
  auto split_power = [&](std::string_view f) {
    const auto hat = f.rfind("^(");
    if (hat == std::string_view::npos || f.back() != ')') throw bad();
    return std::pair{f.substr(0, hat), Scalar::parse(f.substr(hat + 2, f.size() - hat - 3))};
  };
  std::vector<std::string_view> parts;
  std::size_t from = 0;
  while (true) {
    const auto star = text.find('*', from);
    parts.push_back(text.substr(from, star - from));
    if (star == std::string_view::npos) break;
    from = star + 1;
  }
  PowerProduct out(Scalar::parse(parts[0]));
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto [base, e] = split_power(parts[i]);
    if (base.starts_with("log2(") && base.back() == ')') {
      const Scalar m = Scalar::parse(base.substr(5, base.size() - 6));
      if (!m.is_integer() || m.sign() <= 0 || !m.numerator().fits_ulong_p()) throw bad();
      out *= log2_power(m.numerator().get_ui(), e);
    } else {
      out *= power(Scalar::parse(base), e);
    }
  }
  if (out.str() != text) throw bad();
  return out;
}

std::strong_ordering compare(const PowerProduct& a, const PowerProduct& b) {
  const int sa = a.coefficient().sign();
  const int sb = b.coefficient().sign();
  if (sa != sb || sa == 0) return sa <=> sb;
  const PowerProduct q = a / b;
  if (!q.logs().empty()) throw ResourceError("comparison involves unmatched log factors");
  std::strong_ordering q_vs_one = std::strong_ordering::equal;
  if (auto r = q.as_rational()) {
    q_vs_one = *r <=> Scalar(1);
  } else {
    // q = c * prod r^e with e in (0,1); compare c^Q * prod r^(eQ) against 1.
    BigInt common = 1;
    for (const auto& [r, e] : q.radicals()) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), e.denominator().get_mpz_t());
    const Scalar& c = q.coefficient();
    double bits = static_cast<double>(mpz_sizeinbase(c.numerator().get_mpz_t(), 2) +
                                      mpz_sizeinbase(c.denominator().get_mpz_t(), 2));
    for (const auto& [r, e] : q.radicals()) bits += static_cast<double>(mpz_sizeinbase(r.get_mpz_t(), 2));
    if (!common.fits_slong_p() || bits * common.get_d() > kMaxCompareBits) {
      throw ResourceError("exact comparison needs an exponent of " + common.get_str());
    }
    const Scalar qs{common};
    Scalar lhs = c.abs().pow(common.get_si());
    for (const auto& [r, e] : q.radicals()) lhs = lhs * Scalar(r).pow((e * qs).numerator().get_si());
    q_vs_one = lhs <=> Scalar(1);
  }
  if (sa > 0) return q_vs_one;
  return 0 <=> q_vs_one;
}

}  // namespace sumprod

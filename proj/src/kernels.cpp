#include "detail/kernels.hpp"

namespace sumprod::detail {

std::optional<IntegerImage> integer_image(std::span<const FiniteSet* const> sets, unsigned max_bits) {
  BigInt d = 1;
  for (const auto* s : sets) {
    for (const auto& x : *s) {
      const BigInt den = x.denominator();
      mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), den.get_mpz_t());
      if (mpz_sizeinbase(d.get_mpz_t(), 2) > max_bits) return std::nullopt;
    }
  }
  IntegerImage img;
  img.denominator = d;
  img.sets.reserve(sets.size());
  for (const auto* s : sets) {
    std::vector<std::int64_t> v;
    v.reserve(s->size());
    for (const auto& x : *s) {
      BigInt n = x.numerator() * (d / x.denominator());
      if (mpz_sizeinbase(n.get_mpz_t(), 2) >= max_bits || !n.fits_slong_p()) return std::nullopt;
      const long val = n.get_si();
      img.max_abs = std::max<std::uint64_t>(img.max_abs, static_cast<std::uint64_t>(val < 0 ? -val : val));
      v.push_back(val);
    }
    img.sets.push_back(std::move(v));
  }
  return img;
}

Scalar to_scalar(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  const auto hi = static_cast<std::uint64_t>(u >> 64);
  const auto lo = static_cast<std::uint64_t>(u);
  BigInt z = hi;
  z <<= 64;
  z += BigInt(static_cast<unsigned long>(lo));
  if (neg) z = -z;
  return Scalar(z);
}

FractionCounter::FractionCounter(std::size_t expected) {
  std::size_t cap = 16;
  while (cap < expected * 2) cap <<= 1;
  slots_.resize(cap);
}

namespace {
inline std::size_t hash_fraction(Fraction64 k) {
  std::uint64_t h = static_cast<std::uint64_t>(k.p) * 0x9e3779b97f4a7c15ULL;
  h ^= static_cast<std::uint64_t>(k.q) + 0xbf58476d1ce4e5b9ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 29;
  return static_cast<std::size_t>(h);
}
}  // namespace

void FractionCounter::add(Fraction64 key, std::uint64_t weight) {
  if ((used_ + 1) * 10 > slots_.size() * 7) grow();
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t i = hash_fraction(key) & mask;; i = (i + 1) & mask) {
    Slot& s = slots_[i];
    if (s.count == 0) {
      s.key = key;
      s.count = weight;
      ++used_;
      return;
    }
    if (s.key == key) {
      s.count += weight;
      return;
    }
  }
}

void FractionCounter::grow() {
  std::vector<Slot> old(slots_.size() * 2);
  old.swap(slots_);
  used_ = 0;
  for (const auto& s : old) {
    if (s.count) add(s.key, s.count);
  }
}

}  // namespace sumprod::detail

#pragma once

// Counting kernels shared by stats and counting. Elements are moved onto a
// common integer lattice (multiply every set by the lcm of all denominators)
// so that sums, differences, products and quotients can be tallied as
// machine integers; callers fall back to Scalar keys when the lattice image
// does not fit.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sumprod/finite_set.hpp"
#include "sumprod/scalar.hpp"

namespace sumprod::detail {

using i128 = __int128;

struct IntegerImage {
  BigInt denominator;                          // common denominator D
  std::vector<std::vector<std::int64_t>> sets;  // a * D, same order as input
  std::uint64_t max_abs = 0;
};

/// Lattice image of the given sets when every |a * D| < 2^max_bits.
std::optional<IntegerImage> integer_image(std::span<const FiniteSet* const> sets, unsigned max_bits);

inline std::optional<IntegerImage> integer_image(const FiniteSet& a, unsigned max_bits) {
  const FiniteSet* p[] = {&a};
  return integer_image(p, max_bits);
}

inline std::optional<IntegerImage> integer_image(const FiniteSet& a, const FiniteSet& b, unsigned max_bits) {
  const FiniteSet* p[] = {&a, &b};
  return integer_image(p, max_bits);
}

Scalar to_scalar(i128 v);

/// Canonical reduced fraction p/q with q > 0, as a key.
struct Fraction64 {
  std::int64_t p;
  std::int64_t q;
  friend auto operator<=>(const Fraction64&, const Fraction64&) = default;
};

inline Fraction64 reduce(std::int64_t p, std::int64_t q) {
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p, q);
  return {p / g, q / g};
}

template <class Key>
using Tally = std::vector<std::pair<Key, std::uint64_t>>;

/// Sorts keys and collapses equal runs into (key, count).
template <class Key>
Tally<Key> tally(std::vector<Key>& keys) {
  std::sort(keys.begin(), keys.end());
  Tally<Key> out;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    out.emplace_back(std::move(keys[i]), j - i);
    i = j;
  }
  return out;
}

/// Tally of a commutative operation over A x A: only pairs i <= j are
/// materialized, off-diagonal pairs carry weight two.
template <class Key, class Combine>
Tally<Key> tally_symmetric(std::span<const std::int64_t> a, Combine combine) {
  std::vector<Key> off;
  std::vector<Key> diag;
  off.reserve(a.size() * (a.size() - 1) / 2);
  diag.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    diag.push_back(combine(a[i], a[i]));
    for (std::size_t j = i + 1; j < a.size(); ++j) off.push_back(combine(a[i], a[j]));
  }
  auto t_off = tally(off);
  auto t_diag = tally(diag);
  Tally<Key> out;
  out.reserve(t_off.size() + t_diag.size());
  std::size_t i = 0, j = 0;
  while (i < t_off.size() || j < t_diag.size()) {
    if (j == t_diag.size() || (i < t_off.size() && t_off[i].first < t_diag[j].first)) {
      out.emplace_back(t_off[i].first, 2 * t_off[i].second);
      ++i;
    } else if (i == t_off.size() || t_diag[j].first < t_off[i].first) {
      out.push_back(t_diag[j]);
      ++j;
    } else {
      out.emplace_back(t_off[i].first, 2 * t_off[i].second + t_diag[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

template <class Key, class Combine>
Tally<Key> tally_all(std::span<const std::int64_t> a, std::span<const std::int64_t> b, Combine combine) {
  std::vector<Key> keys;
  keys.reserve(a.size() * b.size());
  for (auto x : a) {
    for (auto y : b) keys.push_back(combine(x, y));
  }
  return tally(keys);
}

template <class Key>
std::uint64_t sum_of_squares(const Tally<Key>& t) {
  std::uint64_t s = 0;
  for (const auto& [k, c] : t) s += c * c;
  return s;
}

/// Open-addressing counter keyed by a reduced fraction; used where the
/// number of keys is large but the number of distinct keys is moderate.
class FractionCounter {
 public:
  explicit FractionCounter(std::size_t expected = 1024);
  void add(Fraction64 key, std::uint64_t weight = 1);
  template <class F>
  void for_each(F f) const {
    for (const auto& s : slots_) {
      if (s.count) f(s.key, s.count);
    }
  }
  std::size_t size() const noexcept { return used_; }

 private:
  struct Slot {
    Fraction64 key{0, 0};
    std::uint64_t count = 0;
  };
  void grow();
  std::vector<Slot> slots_;
  std::size_t used_ = 0;
};

}  // namespace sumprod::detail

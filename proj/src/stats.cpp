#include "sumprod/stats.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <string>

#include "detail/kernels.hpp"
#include "sumprod/errors.hpp"

namespace sumprod {

using detail::Fraction64;
using detail::i128;
using detail::Tally;

std::string_view to_string(Op op) {
  switch (op) {
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::mul: return "mul";
    case Op::div: return "div";
  }
  return "?";
}

std::uint64_t Multiset::count(const Scalar& x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const Entry& e, const Scalar& v) { return e.first < v; });
  return (it != entries_.end() && it->first == x) ? it->second : 0;
}

std::uint64_t Multiset::total() const {
  std::uint64_t t = 0;
  for (const auto& e : entries_) t += e.second;
  return t;
}

std::size_t Multiset::count_at_least(const Scalar& threshold) const {
  std::size_t n = 0;
  for (const auto& e : entries_) {
    if (Scalar(e.second) >= threshold) ++n;
  }
  return n;
}

FiniteSet Multiset::support() const {
  std::vector<Scalar> v;
  v.reserve(entries_.size());
  for (const auto& e : entries_) v.push_back(e.first);
  return FiniteSet::from_sorted(std::move(v));
}

namespace {

void require_nonzero_divisor(const FiniteSet& b) {
  if (b.size() == 1 && b[0].is_zero()) throw DomainError("no nonzero divisors");
}

// Elements as reduced (p, q) pairs with |p|, q < 2^31, for sets whose common
// denominator is too large for the lattice image.
std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> fraction_pairs(const FiniteSet& s) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  out.reserve(s.size());
  for (const auto& x : s) {
    const BigInt p = x.numerator(), q = x.denominator();
    if (mpz_sizeinbase(p.get_mpz_t(), 2) > 31 || mpz_sizeinbase(q.get_mpz_t(), 2) > 31) return std::nullopt;
    out.emplace_back(p.get_si(), q.get_si());
  }
  return out;
}

// Runs the fastest available tally for (A, B, op) and hands it to `sink` as
// sink(tally, to_scalar, sorted_by_value).
template <class Sink>
void dispatch(const FiniteSet& a, const FiniteSet& b, Op op, Sink&& sink) {
  const bool same = (&a == &b) || a == b;
  switch (op) {
    case Op::add:
    case Op::sub:
      if (auto img = detail::integer_image(a, b, 62)) {
        const auto& x = img->sets[0];
        const auto& y = img->sets[1];
        const Scalar d(img->denominator);
        auto conv = [d](std::int64_t k) { return Scalar(static_cast<long>(k)) / d; };
        if (op == Op::add && same) {
          auto t = detail::tally_symmetric<std::int64_t>(x, std::plus<>{});
          sink(t, conv, true);
        } else if (op == Op::add) {
          auto t = detail::tally_all<std::int64_t>(x, y, std::plus<>{});
          sink(t, conv, true);
        } else {
          auto t = detail::tally_all<std::int64_t>(x, y, std::minus<>{});
          sink(t, conv, true);
        }
        return;
      }
      break;
    case Op::mul:
      if (auto img = detail::integer_image(a, b, 31)) {
        const Scalar d2 = Scalar(img->denominator) * Scalar(img->denominator);
        auto conv = [d2](std::int64_t k) { return Scalar(static_cast<long>(k)) / d2; };
        auto mul = [](std::int64_t u, std::int64_t v) { return u * v; };
        auto t = same ? detail::tally_symmetric<std::int64_t>(img->sets[0], mul)
                      : detail::tally_all<std::int64_t>(img->sets[0], img->sets[1], mul);
        sink(t, conv, true);
        return;
      }
      if (auto img = detail::integer_image(a, b, 62)) {
        const Scalar d2 = Scalar(img->denominator) * Scalar(img->denominator);
        auto conv = [d2](i128 k) { return detail::to_scalar(k) / d2; };
        auto mul = [](std::int64_t u, std::int64_t v) { return static_cast<i128>(u) * v; };
        auto t = same ? detail::tally_symmetric<i128>(img->sets[0], mul)
                      : detail::tally_all<i128>(img->sets[0], img->sets[1], mul);
        sink(t, conv, true);
        return;
      }
      if (auto fa = fraction_pairs(a)) {
        if (auto fb = fraction_pairs(b)) {
          std::vector<Fraction64> keys;
          keys.reserve(same ? a.size() * (a.size() + 1) / 2 : a.size() * b.size());
          std::vector<Fraction64> diag;
          for (std::size_t i = 0; i < fa->size(); ++i) {
            const auto [p1, q1] = (*fa)[i];
            if (same) {
              diag.push_back(detail::reduce(p1 * p1, q1 * q1));
              for (std::size_t j = i + 1; j < fa->size(); ++j) {
                keys.push_back(detail::reduce(p1 * (*fa)[j].first, q1 * (*fa)[j].second));
              }
            } else {
              for (const auto& [p2, q2] : *fb) keys.push_back(detail::reduce(p1 * p2, q1 * q2));
            }
          }
          auto t = detail::tally(keys);
          if (same) {
            for (auto& [k, cnt] : t) cnt *= 2;
            auto td = detail::tally(diag);
            t.insert(t.end(), td.begin(), td.end());
            std::sort(t.begin(), t.end());
            detail::Tally<Fraction64> merged;
            for (const auto& [k, cnt] : t) {
              if (!merged.empty() && merged.back().first == k) {
                merged.back().second += cnt;
              } else {
                merged.emplace_back(k, cnt);
              }
            }
            t = std::move(merged);
          }
          auto conv = [](const Fraction64& f) { return Scalar::fraction(BigInt(f.p), BigInt(f.q)); };
          sink(t, conv, false);
          return;
        }
      }
      break;
    case Op::div:
      if (auto img = detail::integer_image(a, b, 62)) {
        std::vector<Fraction64> keys;
        keys.reserve(a.size() * b.size());
        for (auto u : img->sets[0]) {
          for (auto v : img->sets[1]) {
            if (v != 0) keys.push_back(detail::reduce(u, v));
          }
        }
        auto t = detail::tally(keys);
        auto conv = [](const Fraction64& f) { return Scalar::fraction(BigInt(f.p), BigInt(f.q)); };
        sink(t, conv, false);
        return;
      }
      if (auto fa = fraction_pairs(a)) {
        if (auto fb = fraction_pairs(b)) {
          std::vector<Fraction64> keys;
          keys.reserve(a.size() * b.size());
          for (const auto& [p1, q1] : *fa) {
            for (const auto& [p2, q2] : *fb) {
              if (p2 != 0) keys.push_back(detail::reduce(p1 * q2, q1 * p2));
            }
          }
          auto t = detail::tally(keys);
          auto conv = [](const Fraction64& f) { return Scalar::fraction(BigInt(f.p), BigInt(f.q)); };
          sink(t, conv, false);
          return;
        }
      }
      break;
  }
  std::vector<Scalar> keys;
  keys.reserve(a.size() * b.size());
  for (const auto& u : a) {
    for (const auto& v : b) {
      switch (op) {
        case Op::add: keys.push_back(u + v); break;
        case Op::sub: keys.push_back(u - v); break;
        case Op::mul: keys.push_back(u * v); break;
        case Op::div:
          if (!v.is_zero()) keys.push_back(u / v);
          break;
      }
    }
  }
  auto t = detail::tally(keys);
  sink(t, [](const Scalar& s) { return s; }, true);
}

}  // namespace

Multiset rep_counts(const FiniteSet& a, const FiniteSet& b, Op op) {
  if (op == Op::div) require_nonzero_divisor(b);
  std::vector<Multiset::Entry> entries;
  dispatch(a, b, op, [&](auto& t, auto conv, bool sorted) {
    entries.reserve(t.size());
    for (const auto& [k, c] : t) entries.emplace_back(conv(k), c);
    if (!sorted) {
      std::sort(entries.begin(), entries.end(),
                [](const auto& l, const auto& r) { return l.first < r.first; });
    }
  });
  return Multiset(std::move(entries));
}

FiniteSet sumset(const FiniteSet& a, const FiniteSet& b) { return rep_counts(a, b, Op::add).support(); }
FiniteSet differenceset(const FiniteSet& a, const FiniteSet& b) { return rep_counts(a, b, Op::sub).support(); }
FiniteSet productset(const FiniteSet& a, const FiniteSet& b) { return rep_counts(a, b, Op::mul).support(); }
FiniteSet quotientset(const FiniteSet& a, const FiniteSet& b) { return rep_counts(a, b, Op::div).support(); }

std::uint64_t energy(const FiniteSet& a, const FiniteSet& b, EnergyKind kind) {
  if (kind == EnergyKind::multiplicative && (a.contains_zero() || b.contains_zero())) {
    throw DomainError("zero element in multiplicative energy");
  }
  std::uint64_t e = 0;
  dispatch(a, b, kind == EnergyKind::additive ? Op::add : Op::mul,
           [&](auto& t, auto, bool) { e = detail::sum_of_squares(t); });
  return e;
}

std::optional<FiniteSet> lambda_set(const FiniteSet& a, const Scalar& lambda) {
  if (lambda.is_zero()) throw DomainError("lambda must be nonzero");
  std::vector<Scalar> out;
  for (const auto& x : a) {
    if (a.contains(x / lambda)) out.push_back(x);
  }
  if (out.empty()) return std::nullopt;
  return FiniteSet::from_sorted(std::move(out));
}

std::vector<SpectrumEntry> spectrum(const FiniteSet& a) {
  if (a.contains_zero()) throw DomainError("spectrum requires 0 not in A");
  const auto r = rep_counts(a, a, Op::div);
  std::vector<SpectrumEntry> out;
  out.reserve(r.size());
  for (const auto& [lambda, c] : r.entries()) out.push_back({lambda, c});
  return out;
}

Scalar dyadic_tau(std::uint64_t size) {
  // tau = 2^(j-1) with 2^(j-1) < size <= 2^j, i.e. j = ceil(log2 size).
  const unsigned j = ceil_log2(size);
  return j == 0 ? Scalar::fraction(1, 2) : Scalar(BigInt(BigInt(1) << (j - 1)));
}

std::uint64_t SpectrumSlice::size_of(const Scalar& lambda) const {
  auto it = std::lower_bound(lambdas.begin(), lambdas.end(), lambda);
  if (it == lambdas.end() || *it != lambda) return 0;
  return sizes[static_cast<std::size_t>(it - lambdas.begin())];
}

std::vector<SpectrumSlice> dyadic_slices(std::span<const SpectrumEntry> spec) {
  // Bucket j holds sizes in (2^(j-1), 2^j].
  std::vector<std::vector<const SpectrumEntry*>> buckets;
  for (const auto& e : spec) {
    const unsigned j = ceil_log2(e.size);
    if (buckets.size() <= j) buckets.resize(j + 1);
    buckets[j].push_back(&e);
  }
  std::vector<SpectrumSlice> out;
  for (std::size_t j = 0; j < buckets.size(); ++j) {
    if (buckets[j].empty()) continue;
    std::vector<Scalar> lambdas;
    std::vector<std::uint64_t> sizes;
    for (const auto* e : buckets[j]) {
      lambdas.push_back(e->lambda);
      sizes.push_back(e->size);
    }
    out.push_back({dyadic_tau(buckets[j].front()->size), FiniteSet::from_sorted(std::move(lambdas)),
                   std::move(sizes)});
  }
  return out;
}

std::vector<SpectrumSlice> dyadic_slices(const FiniteSet& a) {
  const auto s = spectrum(a);
  return dyadic_slices(s);
}

Scalar doubling_ratio(const FiniteSet& a, const FiniteSet& c) {
  const Scalar ac(static_cast<unsigned long>(productset(a, c).size()));
  return ac * ac / (Scalar(static_cast<unsigned long>(a.size())) * Scalar(static_cast<unsigned long>(c.size())));
}

namespace {

// |A · (A/A)| computed as |{ab / c}| without materializing A/A.
std::size_t product_quotient_size(const FiniteSet& a) {
  if (auto img = detail::integer_image(a, 31)) {
    const auto& x = img->sets[0];
    auto mul = [](std::int64_t u, std::int64_t v) { return u * v; };
    auto products = detail::tally_symmetric<std::int64_t>(x, mul);
    std::vector<Fraction64> keys;
    keys.reserve(products.size() * x.size());
    for (const auto& [p, cnt] : products) {
      for (auto c : x) keys.push_back(detail::reduce(p, c));
    }
    std::sort(keys.begin(), keys.end());
    return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
  }
  return productset(a, quotientset(a, a)).size();
}

}  // namespace

DoublingProfile d_upper(const FiniteSet& a, std::span<const FiniteSet> candidates) {
  if (a.contains_zero()) throw DomainError("d(A) requires 0 not in A");
  const Scalar n(static_cast<unsigned long>(a.size()));
  const FiniteSet quot = quotientset(a, a);
  const std::size_t aa = productset(a, a).size();
  DoublingProfile p{Scalar(static_cast<unsigned long>(std::min(aa, quot.size()))) / n, n, FiniteSet::of({1}), 1};

  auto consider = [&](const Scalar& ratio, const FiniteSet& c) {
    ++p.candidates_tried;
    if (ratio < p.d_upper) {
      p.d_upper = ratio;
      p.witness = c;
    }
  };
  auto sq = [](std::size_t v) { return Scalar(static_cast<unsigned long>(v)) * Scalar(static_cast<unsigned long>(v)); };

  consider(sq(aa) / (n * n), a);
  std::vector<Scalar> inv;
  for (auto it = a.elements().rbegin(); it != a.elements().rend(); ++it) inv.push_back(it->inverse());
  std::sort(inv.begin(), inv.end());
  const FiniteSet a_inv = FiniteSet::from_sorted(std::move(inv));
  consider(sq(quot.size()) / (n * n), a_inv);
  consider(sq(product_quotient_size(a)) / (n * Scalar(static_cast<unsigned long>(quot.size()))), quot);
  for (const auto& c : candidates) {
    if (c.contains_zero()) throw DomainError("d(A) candidate contains 0");
    consider(doubling_ratio(a, c), c);
  }
  return p;
}

DoublingProfile d_exhaustive(const FiniteSet& a, const FiniteSet& ground, std::size_t max_size) {
  if (ground.size() > kMaxExhaustiveGround) {
    throw ResourceError("ground set of size " + std::to_string(ground.size()) + " exceeds " +
                        std::to_string(kMaxExhaustiveGround));
  }
  if (a.contains_zero() || ground.contains_zero()) throw DomainError("d(A) requires 0 not in A or C");
  if (max_size == 0) throw DomainError("max_size must be positive");
  max_size = std::min(max_size, ground.size());

  // Product ids: column j lists the ids of a_i * g_j; |AC| = popcount of the union.
  std::vector<std::pair<Scalar, std::size_t>> prods;
  for (std::size_t j = 0; j < ground.size(); ++j) {
    for (const auto& x : a) prods.emplace_back(x * ground[j], j);
  }
  std::sort(prods.begin(), prods.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  const std::size_t words_guess = prods.size() / 64 + 1;
  std::vector<std::vector<std::uint64_t>> column(ground.size(), std::vector<std::uint64_t>(words_guess, 0));
  std::size_t id = 0;
  for (std::size_t i = 0; i < prods.size(); ++i) {
    if (i > 0 && prods[i].first != prods[i - 1].first) ++id;
    column[prods[i].second][id / 64] |= std::uint64_t{1} << (id % 64);
  }

  const Scalar n(static_cast<unsigned long>(a.size()));
  std::optional<Scalar> best;
  std::uint32_t best_mask = 0;
  std::vector<std::uint64_t> acc(words_guess);
  const std::uint32_t limit = std::uint32_t{1} << ground.size();
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    if (k > max_size) continue;
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t j = 0; j < ground.size(); ++j) {
      if (mask & (std::uint32_t{1} << j)) {
        for (std::size_t w = 0; w < acc.size(); ++w) acc[w] |= column[j][w];
      }
    }
    std::size_t ac = 0;
    for (auto w : acc) ac += static_cast<std::size_t>(std::popcount(w));
    const Scalar ratio = Scalar(static_cast<unsigned long>(ac * ac)) / (n * Scalar(static_cast<unsigned long>(k)));
    bool better = !best || ratio < *best;
    if (!better && ratio == *best) {
      const auto bk = static_cast<std::size_t>(std::popcount(best_mask));
      if (k < bk) {
        better = true;
      } else if (k == bk) {
        // Lexicographic comparison of the element sequences: the set whose
        // first differing element is smaller wins.
        const std::uint32_t diff = mask ^ best_mask;
        const unsigned low = static_cast<unsigned>(std::countr_zero(diff));
        better = (mask >> low) & 1u;
      }
    }
    if (better) {
      best = ratio;
      best_mask = mask;
    }
  }
  std::vector<Scalar> w;
  for (std::size_t j = 0; j < ground.size(); ++j) {
    if (best_mask & (std::uint32_t{1} << j)) w.push_back(ground[j]);
  }
  const std::size_t aa = productset(a, a).size();
  const std::size_t qq = quotientset(a, a).size();
  return DoublingProfile{Scalar(static_cast<unsigned long>(std::min(aa, qq))) / n, *best,
                         FiniteSet::from_sorted(std::move(w)), static_cast<std::size_t>(limit - 1)};
}

}  // namespace sumprod

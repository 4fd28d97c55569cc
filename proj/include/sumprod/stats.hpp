#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sumprod/finite_set.hpp"
#include "sumprod/scalar.hpp"

namespace sumprod {

enum class Op { add, sub, mul, div };

std::string_view to_string(Op op);

/// Representation function: value -> number of generating pairs. Stored as
/// a sorted vector; every count is at least one.
class Multiset {
 public:
  using Entry = std::pair<Scalar, std::uint64_t>;

  Multiset() = default;
  explicit Multiset(std::vector<Entry> sorted_entries) : entries_(std::move(sorted_entries)) {}

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::uint64_t count(const Scalar& x) const;
  std::uint64_t total() const;
  /// Number of values whose count is at least `threshold`.
  std::size_t count_at_least(const Scalar& threshold) const;
  FiniteSet support() const;

 private:
  std::vector<Entry> entries_;
};

FiniteSet sumset(const FiniteSet& a, const FiniteSet& b);
FiniteSet differenceset(const FiniteSet& a, const FiniteSet& b);
FiniteSet productset(const FiniteSet& a, const FiniteSet& b);
/// Pairs with a zero divisor are skipped; throws DomainError("no nonzero divisors") when B = {0}.
FiniteSet quotientset(const FiniteSet& a, const FiniteSet& b);

/// counts[x] = #{(a, b) : a op b = x}. Zero divisors are skipped under Op::div.
Multiset rep_counts(const FiniteSet& a, const FiniteSet& b, Op op);

enum class EnergyKind { additive, multiplicative };

/// E(A, B) = sum over x of r(x)^2. Multiplicative energy rejects sets that contain zero.
std::uint64_t energy(const FiniteSet& a, const FiniteSet& b, EnergyKind kind);
inline std::uint64_t additive_energy(const FiniteSet& a) { return energy(a, a, EnergyKind::additive); }
inline std::uint64_t multiplicative_energy(const FiniteSet& a) { return energy(a, a, EnergyKind::multiplicative); }

/// A ∩ λA, or nullopt when empty.
std::optional<FiniteSet> lambda_set(const FiniteSet& a, const Scalar& lambda);

struct SpectrumEntry {
  Scalar lambda;
  std::uint64_t size;  // |A ∩ λA|
};

/// One entry per λ in A/A, ascending in λ.
std::vector<SpectrumEntry> spectrum(const FiniteSet& a);

struct SpectrumSlice {
  Scalar tau;                        // window (tau, 2 tau]
  FiniteSet lambdas;
  std::vector<std::uint64_t> sizes;  // parallel to lambdas

  std::uint64_t size_of(const Scalar& lambda) const;
};

/// Nonempty dyadic slices tau = 2^(j-1), ascending in tau. Every λ ∈ A/A lands in
/// exactly one slice.
std::vector<SpectrumSlice> dyadic_slices(const FiniteSet& a);
std::vector<SpectrumSlice> dyadic_slices(std::span<const SpectrumEntry> spectrum);

/// Dyadic tau whose window (tau, 2 tau] contains `size`.
Scalar dyadic_tau(std::uint64_t size);

struct DoublingProfile {
  Scalar k_mul;    // min(|AA|, |A/A|) / |A|
  Scalar d_upper;  // min over tried C of |AC|^2 / (|A||C|)
  FiniteSet witness;
  std::size_t candidates_tried = 0;
};

/// |AC|^2 / (|A||C|).
Scalar doubling_ratio(const FiniteSet& a, const FiniteSet& c);

/// Upper bound on d(A): always tries {1}, A, A^-1 and A/A besides `candidates`.
/// Ties keep the earliest candidate in that order.
DoublingProfile d_upper(const FiniteSet& a, std::span<const FiniteSet> candidates = {});

/// Exact minimum of the doubling ratio over nonempty C ⊆ ground with |C| ≤ max_size.
/// Ties prefer smaller |C|, then the lexicographically smaller C.
DoublingProfile d_exhaustive(const FiniteSet& a, const FiniteSet& ground, std::size_t max_size);

inline constexpr std::size_t kMaxExhaustiveGround = 20;

}  // namespace sumprod

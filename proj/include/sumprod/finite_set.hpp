#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumprod/scalar.hpp"

namespace sumprod {

/// Nonempty, strictly increasing sequence of Scalars. Immutable once built.
class FiniteSet {
 public:
  using const_iterator = std::vector<Scalar>::const_iterator;

  /// Accepts an already strictly increasing sequence; throws DomainError
  /// when empty or out of order.
  static FiniteSet from_sorted(std::vector<Scalar> sorted);

  /// {1, 2, ..., n} style convenience for integer literals.
  static FiniteSet of(std::initializer_list<long> values);

  std::size_t size() const noexcept { return elements_.size(); }
  std::span<const Scalar> elements() const noexcept { return elements_; }
  const Scalar& operator[](std::size_t i) const { return elements_[i]; }
  const Scalar& min() const { return elements_.front(); }
  const Scalar& max() const { return elements_.back(); }
  const_iterator begin() const noexcept { return elements_.begin(); }
  const_iterator end() const noexcept { return elements_.end(); }

  bool contains(const Scalar& x) const;
  bool contains_zero() const;
  bool all_positive() const { return min().sign() > 0; }
  bool is_subset_of(const FiniteSet& other) const;

  std::string str() const;  // "{1, 1/2, 3}"

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;
  /// Lexicographic order on the element sequences.
  friend bool operator<(const FiniteSet& a, const FiniteSet& b) { return a.elements_ < b.elements_; }

 private:
  explicit FiniteSet(std::vector<Scalar> e) : elements_(std::move(e)) {}
  std::vector<Scalar> elements_;
};

struct BuildResult {
  FiniteSet set;
  std::size_t duplicates_dropped = 0;
};

/// Sorts and deduplicates. Throws DomainError("empty set") on empty input.
BuildResult set_build(std::vector<Scalar> values);

/// Shorthand for set_build(values).set.
FiniteSet make_set(std::vector<Scalar> values);

/// {alpha * a + beta : a in A}. Throws DomainError("degenerate dilation") for alpha = 0.
FiniteSet affine_image(const FiniteSet& a, const Scalar& alpha, const Scalar& beta);

/// Intersection; empty result is std::nullopt.
std::optional<FiniteSet> intersect(const FiniteSet& a, const FiniteSet& b);

/// Union of two sets.
FiniteSet unite(const FiniteSet& a, const FiniteSet& b);

struct Point {
  Scalar x;
  Scalar y;
  friend auto operator<=>(const Point&, const Point&) = default;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Duplicate-free planar point set, kept sorted lexicographically.
class PointSet {
 public:
  explicit PointSet(std::vector<Point> points);
  static PointSet cartesian(const FiniteSet& xs, const FiniteSet& ys);

  std::size_t size() const noexcept { return points_.size(); }
  std::span<const Point> points() const noexcept { return points_; }

 private:
  std::vector<Point> points_;
};

/// One warning per dropped duplicate, identifying the source line.
struct SetFileWarning {
  std::size_t line;
  std::string message;
};

struct ParsedSet {
  FiniteSet set;
  std::vector<SetFileWarning> warnings;
};

/// Set file format: one value per line, an optionally signed integer or
/// "p/q" with positive q; blank lines and '#' comments are skipped.
/// Throws ParseError (with line number) on malformed lines and on an empty set.
ParsedSet parse_set_text(std::istream& in);

/// Writes the set in the set file format, one "p" or "p/q" per line.
std::string format_set_text(const FiniteSet& set);

}  // namespace sumprod

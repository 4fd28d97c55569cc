#include "sumprod/finite_set.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <sstream>

#include "sumprod/errors.hpp"

namespace sumprod {

FiniteSet FiniteSet::from_sorted(std::vector<Scalar> sorted) {
  if (sorted.empty()) throw DomainError("empty set");
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (!(sorted[i - 1] < sorted[i])) throw DomainError("elements not strictly increasing");
  }
  return FiniteSet(std::move(sorted));
}

FiniteSet FiniteSet::of(std::initializer_list<long> values) {
  std::vector<Scalar> v;
  v.reserve(values.size());
  for (long x : values) v.emplace_back(x);
  return make_set(std::move(v));
}

bool FiniteSet::contains(const Scalar& x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

bool FiniteSet::contains_zero() const { return contains(Scalar{}); }

bool FiniteSet::is_subset_of(const FiniteSet& other) const {
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(), elements_.end());
}

std::string FiniteSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (i) out += ", ";
    out += elements_[i].str();
  }
  return out + "}";
}

BuildResult set_build(std::vector<Scalar> values) {
  if (values.empty()) throw DomainError("empty set");
  std::sort(values.begin(), values.end());
  const std::size_t before = values.size();
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t dropped = before - values.size();
  return BuildResult{FiniteSet::from_sorted(std::move(values)), dropped};
}

FiniteSet make_set(std::vector<Scalar> values) { return set_build(std::move(values)).set; }

FiniteSet affine_image(const FiniteSet& a, const Scalar& alpha, const Scalar& beta) {
  if (alpha.is_zero()) throw DomainError("degenerate dilation");
  std::vector<Scalar> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(alpha * x + beta);
  if (alpha.sign() < 0) std::reverse(out.begin(), out.end());
  return FiniteSet::from_sorted(std::move(out));
}

std::optional<FiniteSet> intersect(const FiniteSet& a, const FiniteSet& b) {
  std::vector<Scalar> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  if (out.empty()) return std::nullopt;
  return FiniteSet::from_sorted(std::move(out));
}

FiniteSet unite(const FiniteSet& a, const FiniteSet& b) {
  std::vector<Scalar> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSet::from_sorted(std::move(out));
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
    throw DomainError("duplicate point");
  }
}

PointSet PointSet::cartesian(const FiniteSet& xs, const FiniteSet& ys) {
  std::vector<Point> pts;
  pts.reserve(xs.size() * ys.size());
  for (const auto& x : xs) {
    for (const auto& y : ys) pts.push_back({x, y});
  }
  return PointSet(std::move(pts));
}

ParsedSet parse_set_text(std::istream& in) {
  std::vector<Scalar> values;
  std::map<Scalar, std::size_t> first_line;
  std::vector<SetFileWarning> warnings;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string_view token(line.data() + b, e - b + 1);
    Scalar v;
    try {
      v = Scalar::parse(token);
    } catch (const DomainError& err) {
      throw ParseError(lineno, err.what());
    }
    auto [it, inserted] = first_line.emplace(v, lineno);
    if (!inserted) {
      warnings.push_back({lineno, "duplicate value " + v.str() + " (first seen on line " +
                                      std::to_string(it->second) + ") dropped"});
      continue;
    }
    values.push_back(std::move(v));
  }
  if (values.empty()) throw ParseError(lineno, "empty set");
  return ParsedSet{make_set(std::move(values)), std::move(warnings)};
}

std::string format_set_text(const FiniteSet& set) {
  std::ostringstream out;
  for (const auto& x : set) out << x.str() << '\n';
  return out.str();
}

}  // namespace sumprod

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sumprod/finite_set.hpp"
#include "sumprod/power_product.hpp"
#include "sumprod/scalar.hpp"
#include "sumprod/verify.hpp"

namespace sumprod {

inline constexpr const char* kArtifactVersion = "1.0.0";

enum class GeneratorKind { ap, gp, ap_times_gp, random_integer, random_rational, set_union, custom_file };

std::string to_string(GeneratorKind kind);
/// Accepts "ap", "gp", "ap_times_gp", "random_integer", "random_rational", "union", "custom_file".
GeneratorKind parse_generator_kind(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::ap;
  Scalar start = 1;
  Scalar step = 1;    // ap, and the AP factor of ap_times_gp
  Scalar ratio = 2;   // gp, and the GP factor of ap_times_gp
  std::size_t n = 2;
  std::size_t n2 = 0;  // GP length for ap_times_gp; 0 means n
  std::uint64_t range = 100;
  std::optional<std::uint64_t> seed{};
  std::vector<GeneratorSpec> operands{};  // union
  std::string path{};                   // custom_file

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

/// Random kinds draw n distinct values; random_rational draws numerator and
/// denominator uniformly from [1, range]. Throws DomainError on invalid params.
FiniteSet generate(const GeneratorSpec& spec);

struct MutateResult {
  FiniteSet set;
  bool moved = false;
};

struct MutateOptions {
  bool rational_moves = false;  // also replace an element by a random rational inside the ground's span
  std::uint64_t rational_range = 12;
};

/// One swap of an element of A for an element of ground \ A. Deterministic in seed.
MutateResult mutate(const FiniteSet& a, const FiniteSet& ground, std::uint64_t seed, const MutateOptions& options = {});

enum class SearchMode { exhaustive, hillclimb };

struct SearchConfig {
  SearchMode mode = SearchMode::exhaustive;
  FiniteSet ground = FiniteSet::of({1, 2, 3, 4, 5, 6, 7, 8});
  std::uint64_t budget = 100000;  // subsets (exhaustive) or iterations per restart (hillclimb)
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
  bool maximize = false;
  MutateOptions mutation{};
  VerifyParams params{};
  unsigned threads = 1;
};

struct ExtremalRecord {
  FiniteSet set;
  std::string inequality_id;
  PowerProduct ratio;
  std::string generator;  // compact JSON lineage
  std::string timestamp;
  std::string artifact_version = kArtifactVersion;
  bool drift = false;     // set by corpus_load

  /// Equality ignoring the timestamp.
  bool same_result(const ExtremalRecord& other) const;
};

struct SearchResult {
  ExtremalRecord record;
  bool truncated = false;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;  // candidates whose evaluation raised
};

/// Best ratio over n-element subsets of config.ground. Ties go to the
/// lexicographically smallest set; the result does not depend on thread count.
SearchResult search_extremal(const std::string& inequality_id, std::size_t n, const SearchConfig& config);

struct BsgResult {
  FiniteSet subset;
  Scalar objective;  // |S''/S''| |S|^2 / |S''|^3
};

inline constexpr std::size_t kBsgMaxSize = 14;

/// Exhaustive minimizer over nonempty S'' ⊆ S. Ties prefer larger |S''|, then the
/// lexicographically smaller S''.
BsgResult bsg_subset_oracle(const FiniteSet& s, std::size_t max_size);

/// Appends one JSON line. Throws IoError.
void corpus_store(const ExtremalRecord& record, const std::string& path);
/// Loads every record and recomputes its ratio; mismatches set drift. Throws IoError, ParseError.
std::vector<ExtremalRecord> corpus_load(const std::string& path, const VerifyParams& params = {});

}  // namespace sumprod

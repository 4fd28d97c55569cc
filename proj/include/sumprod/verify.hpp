#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumprod/counting.hpp"
#include "sumprod/finite_set.hpp"
#include "sumprod/power_product.hpp"
#include "sumprod/scalar.hpp"

namespace sumprod {

/// One evaluated inequality. Values are exact; ratio = lhs / rhs.
struct InequalityReport {
  std::string id;
  PowerProduct lhs;
  PowerProduct rhs;
  PowerProduct ratio;
  bool explicit_constant = false;
  std::optional<bool> pass;  // present iff explicit_constant
  std::string inputs;
};

/// Optional inputs for the entries that take more than A.
struct VerifyParams {
  std::optional<FiniteSet> b;                 // LEVELSET, ENERGY-SUMSET, DA-LEVEL (default A)
  std::optional<FiniteSet> a1, a2, a3;        // CS-SUBS, GEN-SIGMA (default A)
  std::optional<Scalar> alpha1, alpha2, alpha3;  // GEN-SIGMA (default 1, 1, -1)
  std::optional<Scalar> tau;                  // LEVELSET, DA-LEVEL (default 2), LEMMA3
  std::optional<std::size_t> m;               // LEMMA3 group size (default 2)
  std::optional<FiniteSet> s_sub;             // LEMMA3 subset of S_tau
  std::vector<FiniteSet> d_candidates;        // extra C for the d(A) upper bound
  std::size_t prop_crit_max = 6000;           // largest |A/A| or |AA| whose energy PROP-CRIT computes
};

struct RegistryEntry {
  std::string_view id;
  bool explicit_constant;
  std::string_view statement;
};

/// Every registry entry, in a fixed order.
const std::vector<RegistryEntry>& registry();

/// Throws DomainError for an unknown id or violated precondition, ResourceError
/// when the entry exceeds its work budget.
InequalityReport evaluate(std::string_view id, const FiniteSet& a, const VerifyParams& params = {});

struct EntryError {
  std::string id;
  std::string kind;  // "domain" or "resource"
  std::string message;
};

struct SuiteResult {
  std::vector<InequalityReport> reports;  // sorted by id
  std::vector<EntryError> errors;         // sorted by id

  bool all_explicit_pass() const;
  bool has_resource_error() const;
};

/// Evaluates all entries (or `ids`), collecting per-entry errors instead of aborting.
SuiteResult verify_suite(const FiniteSet& a, const std::optional<std::vector<std::string>>& ids = std::nullopt,
                         const VerifyParams& params = {}, unsigned threads = 1);

struct SliceMass {
  Scalar tau;
  std::size_t size = 0;
  Scalar mass;  // |S_tau| tau^2
};

struct SmallLSelection {
  Scalar tau;
  FiniteSet s_tau;
  FiniteSet s_prime;
  FiniteSet s_doubleprime;
  Scalar min_additive_energy_ratio;  // min over S' of E+(A_l) / tau^3
  Scalar min_quotient_ratio;         // min over S' of |A_l/A_l| / tau^2
  Scalar min_product_ratio;          // min over S' of |A_l A_l| / tau^2
  Scalar additive_vs_scale;          // min_additive_energy_ratio * L^4
  Scalar quotient_vs_scale;          // min_quotient_ratio * L^16
  Scalar product_vs_scale;           // min_product_ratio * L^16
};

struct SmallLReport {
  Scalar l;                // max(1, |A+A|^2 min(|A/A|, |AA|) / |A|^4)
  std::uint64_t energy_mul = 0;
  Scalar threshold;        // E*(A) / (2 |A|^2)
  std::vector<SliceMass> slices;
  Scalar total_mass;       // sum over slices of |S_tau| tau^2
  bool total_mass_ok = false;       // total_mass >= E*(A) / 4
  bool selected_dominates = false;  // selected mass * (ceil(log2|A|) + 1) >= total_mass
  std::optional<SmallLSelection> selection;  // empty when no slice meets the threshold
};

SmallLReport smallL_construction(const FiniteSet& a);

struct KatzKoesterViolation {
  Scalar lambda;
  Scalar element;
  bool product_side;  // false: A_l/A_l inclusion, true: A_l A_l inclusion
};

std::vector<KatzKoesterViolation> katz_koester_check(const FiniteSet& a);

struct SolPlusTrace {
  Scalar l;
  Scalar l_prime;  // max(1, |A/A|^3 / |A|^4)
  Scalar eta;      // L^-64 E*(A) tau^6 |A/A|^-5
  Scalar tau;
  FiniteSet s_prime;
  FiniteSet s_doubleprime;
  std::optional<Scalar> bsg_objective;  // absent when |S'| = 1 and the oracle is skipped
  Scalar a_witness;
  FiniteSet a_prime;  // A ∩ a S''
};

SolPlusTrace solplus_trace(const FiniteSet& a, std::size_t max_bsg_size);

}  // namespace sumprod

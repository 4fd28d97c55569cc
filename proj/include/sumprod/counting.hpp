#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sumprod/finite_set.hpp"
#include "sumprod/power_product.hpp"
#include "sumprod/scalar.hpp"
#include "sumprod/stats.hpp"

namespace sumprod {

struct SigmaResult {
  std::uint64_t count = 0;
  Scalar alpha1;
  Scalar alpha2;
  Scalar alpha3;
  /// sigma_max only: the maximizer is an intersection of two solution lines
  /// rather than a generic point of a single line.
  bool from_pair_system = false;
};

/// #{(a1, a2, a3) : alpha1 a1 + alpha2 a2 + alpha3 a3 = 0}. Coefficients must be nonzero.
SigmaResult sigma_count(const Scalar& alpha1, const FiniteSet& a1, const Scalar& alpha2, const FiniteSet& a2,
                        const Scalar& alpha3, const FiniteSet& a3);

/// Maximum of sigma_count over nonzero coefficients, with alpha1 = 1.
/// Ties among the candidate points go to the lexicographically smallest (alpha2, alpha3).
SigmaResult sigma_max(const FiniteSet& a1, const FiniteSet& a2, const FiniteSet& a3);

inline constexpr std::uint64_t kSigmaMaxTriples = 1'000'000;

/// Ordered triples of points of P on a common line, triples with at most two
/// distinct points included.
BigInt collinear_triples(const PointSet& p);

/// Same count for the grid X x Y, in O(|X|^3 + |Y|^3).
BigInt product_collinear_triples(const FiniteSet& x, const FiniteSet& y);

struct ClusterGroup {
  FiniteSet slopes;
  std::uint64_t distinct_sums = 0;
  Scalar rho_lower;                  // tau^2 C(M,2) - sigma M^4
  std::optional<bool> rho_ok{};      // distinct_sums >= max(0, rho_lower); only with exact sigma
};

struct ClusterReport {
  Scalar tau;
  std::size_t m = 0;
  FiniteSet s_prime;
  std::vector<ClusterGroup> groups{};
  std::uint64_t sumset_size = 0;     // |A+A|
  std::uint64_t sigma = 0;
  bool sigma_exact = false;          // otherwise sigma is a lower bound that already breaks 32 sigma <= tau^2
  bool sums_in_sumset = true;
  bool cond_sigma = false;           // 32 sigma <= tau^2
  bool cond_sumset = false;          // tau^4 <= |A+A|^2 sigma
  std::uint64_t total_distinct_sums = 0;
  bool total_within_square = true;   // sum of distinct_sums <= |A+A|^2
  std::optional<PowerProduct> lemma_rhs{};  // tau^3 |S'| / (128 sqrt(sigma))
  bool conclusion = false;           // |A+A|^2 >= lemma_rhs
  bool lemma_pass = true;            // conditions imply conclusion

  bool conditions_hold() const { return cond_sigma && cond_sumset; }
};

/// Cluster construction on the slice S_tau (or on `s_sub` ⊆ S_tau) of a
/// positive set, grouped into runs of M consecutive slopes.
ClusterReport solymosi_cluster_report(const FiniteSet& a, const Scalar& tau, std::size_t m,
                                      const std::optional<FiniteSet>& s_sub = std::nullopt);

struct ErChain {
  Multiset n;                         // N(x) over A+A
  std::uint64_t energy = 0;           // E+(A)
  FiniteSet f;
  std::uint64_t u = 0;
  FiniteSet s;                        // A ∪ F
  std::optional<BigInt> t;            // collinear triples of S x S when affordable
  BigInt t_construction;              // certified lower bound on T from the quadruple construction
  std::uint64_t k_size = 0;           // min(|AA|, |A/A|)
  std::map<std::string, bool> checks;
  std::map<std::string, PowerProduct> ratios;
};

inline constexpr std::uint64_t kErChainCubeBudget = 30'000'000;

ErChain er_chain(const FiniteSet& a, std::uint64_t cube_budget = kErChainCubeBudget);

}  // namespace sumprod

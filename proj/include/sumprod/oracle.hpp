#pragma once

// Brute-force reference implementations. They share no code with the fast
// kernels beyond Scalar and FiniteSet, and are only meant for small inputs.

#include <cstdint>
#include <map>

#include "sumprod/counting.hpp"
#include "sumprod/finite_set.hpp"
#include "sumprod/stats.hpp"

namespace sumprod::oracle {

/// Quadruple enumeration, O(|A|^2 |B|^2).
std::uint64_t energy(const FiniteSet& a, const FiniteSet& b, EnergyKind kind);

/// Pairwise enumeration into an ordered map.
std::map<Scalar, std::uint64_t> rep_counts(const FiniteSet& a, const FiniteSet& b, Op op);

/// |A ∩ λA| for every λ in A/A, by explicit intersection.
std::map<Scalar, std::uint64_t> spectrum(const FiniteSet& a);

/// Ordered triples tested one by one with the cross product, O(|P|^3).
BigInt collinear_triples(const PointSet& p);

/// Triple enumeration, O(|A1||A2||A3|).
std::uint64_t sigma_count(const Scalar& alpha1, const FiniteSet& a1, const Scalar& alpha2, const FiniteSet& a2,
                          const Scalar& alpha3, const FiniteSet& a3);

/// Best sigma_count over `samples` seeded coefficient draws with alpha1 = 1. Half of
/// the draws are forced through a random triple so that they are not trivially zero.
SigmaResult sigma_max_sample(const FiniteSet& a1, const FiniteSet& a2, const FiniteSet& a3, std::uint64_t seed,
                             std::size_t samples);

}  // namespace sumprod::oracle

#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "sumprod/errors.hpp"
#include "sumprod/oracle.hpp"
#include "sumprod/stats.hpp"

using namespace sumprod;

namespace {

std::map<Scalar, std::uint64_t> as_map(const Multiset& m) {
  std::map<Scalar, std::uint64_t> out;
  for (const auto& [x, c] : m.entries()) out[x] = c;
  return out;
}

Scalar q(long p, long d = 1) { return Scalar::fraction(p, d); }

}  // namespace

TEST_CASE("sumset, product set and quotient set fixtures") {
  const auto a = FiniteSet::of({1, 2, 3});
  CHECK(sumset(a, a) == FiniteSet::of({2, 3, 4, 5, 6}));
  CHECK(sumset(FiniteSet::of({0}), a) == a);
  CHECK(sumset(testcorpus::gp(1, 2, 4), testcorpus::gp(1, 2, 4)).size() == 10);
  CHECK(productset(a, a) == FiniteSet::of({1, 2, 3, 4, 6, 9}));
  CHECK(productset(FiniteSet::of({1}), a) == a);
  CHECK(productset(FiniteSet::of({1, 2, 4}), FiniteSet::of({1, 2, 4})) == FiniteSet::of({1, 2, 4, 8, 16}));
  CHECK(quotientset(FiniteSet::of({1, 2}), FiniteSet::of({1, 2})) == make_set({q(1, 2), 1, 2}));
  CHECK(quotientset(a, a) == make_set({q(1, 3), q(1, 2), q(2, 3), 1, q(3, 2), 2, 3}));
  CHECK(quotientset(FiniteSet::of({5}), FiniteSet::of({5})) == FiniteSet::of({1}));
  CHECK_THROWS_WITH_AS(quotientset(a, FiniteSet::of({0})), "no nonzero divisors", DomainError);
  CHECK(quotientset(a, FiniteSet::of({0, 1})) == a);
  CHECK(differenceset(FiniteSet::of({7}), FiniteSet::of({7})) == FiniteSet::of({0}));
}

TEST_CASE("representation functions") {
  const auto a = FiniteSet::of({1, 2, 3});
  const std::map<Scalar, std::uint64_t> add{{2, 1}, {3, 2}, {4, 3}, {5, 2}, {6, 1}};
  const std::map<Scalar, std::uint64_t> mul{{1, 1}, {2, 2}, {3, 2}, {4, 1}, {6, 2}, {9, 1}};
  CHECK(as_map(rep_counts(a, a, Op::add)) == add);
  CHECK(as_map(rep_counts(a, a, Op::mul)) == mul);
  CHECK(as_map(rep_counts(FiniteSet::of({7}), FiniteSet::of({7}), Op::sub)) ==
        std::map<Scalar, std::uint64_t>{{0, 1}});
  const auto r = rep_counts(a, a, Op::add);
  CHECK(r.count(4) == 3);
  CHECK(r.count(7) == 0);
  CHECK(r.total() == 9);
  CHECK(r.count_at_least(2) == 3);
}

TEST_CASE("rep_counts agree with pairwise enumeration on every kernel path") {
  std::mt19937_64 rng(5);
  std::vector<std::pair<FiniteSet, FiniteSet>> cases;
  for (int i = 0; i < 30; ++i) {
    cases.emplace_back(testcorpus::random_integers(rng, 9, 60, -30), testcorpus::random_rationals(rng, 7, 12));
    cases.emplace_back(testcorpus::random_integers(rng, 11, 1000), testcorpus::random_integers(rng, 6, 1000));
  }
  // Values beyond the 31/62-bit lattice force the wide and the exact paths.
  cases.emplace_back(testcorpus::gp(1, 3, 30), testcorpus::gp(1, 3, 30));
  cases.emplace_back(testcorpus::gp(1, 7, 40), testcorpus::ap(1, 1, 5));
  // Denominators 2..61 overflow the common lattice but not the reduced-fraction path.
  std::vector<Scalar> fr;
  for (long k = 1; k <= 60; ++k) fr.push_back(Scalar::fraction(k, k + 1));
  cases.emplace_back(make_set(fr), make_set(fr));
  cases.emplace_back(make_set(fr), testcorpus::random_rationals(rng, 9, 30));
  for (const auto& [a, b] : cases) {
    for (Op op : {Op::add, Op::sub, Op::mul, Op::div}) {
      if (op == Op::div && b.size() == 1 && b[0].is_zero()) continue;
      CHECK(as_map(rep_counts(a, b, op)) == oracle::rep_counts(a, b, op));
    }
    CHECK(as_map(rep_counts(a, a, Op::mul)) == oracle::rep_counts(a, a, Op::mul));
  }
}

TEST_CASE("energy fixtures and bounds") {
  const auto a = FiniteSet::of({1, 2, 3});
  CHECK(additive_energy(a) == 19);
  CHECK(multiplicative_energy(a) == 15);
  CHECK(additive_energy(FiniteSet::of({4})) == 1);
  CHECK_THROWS_WITH_AS(multiplicative_energy(FiniteSet::of({0, 1})), "zero element in multiplicative energy",
                       DomainError);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto x = testcorpus::random_rationals(rng, 10, 9);
    const auto y = testcorpus::random_integers(rng, 7, 20);
    for (auto kind : {EnergyKind::additive, EnergyKind::multiplicative}) {
      const auto e = energy(x, y, kind);
      CHECK(e >= x.size() * y.size());
      CHECK(e <= x.size() * y.size() * std::min(x.size(), y.size()));
    }
  }
}

TEST_CASE("lambda sets and spectrum") {
  CHECK(*lambda_set(FiniteSet::of({1, 2, 4}), 2) == FiniteSet::of({2, 4}));
  const auto a = FiniteSet::of({1, 2, 3});
  CHECK(*lambda_set(a, 1) == a);
  CHECK_FALSE(lambda_set(a, 5).has_value());
  CHECK_THROWS_AS(lambda_set(a, 0), DomainError);

  const auto s = spectrum(a);
  CHECK(s.size() == 7);
  std::uint64_t sum = 0, sq = 0;
  for (const auto& e : s) {
    CHECK(e.size == (e.lambda == Scalar(1) ? 3u : 1u));
    sum += e.size;
    sq += e.size * e.size;
  }
  CHECK(sum == 9);
  CHECK(sq == 15);
  const auto c = spectrum(FiniteSet::of({6}));
  REQUIRE(c.size() == 1);
  CHECK(c[0].lambda == Scalar(1));
  CHECK(c[0].size == 1);

  std::map<Scalar, std::uint64_t> gp;
  for (const auto& e : spectrum(FiniteSet::of({1, 2, 4}))) gp[e.lambda] = e.size;
  CHECK(gp == std::map<Scalar, std::uint64_t>{{q(1, 4), 1}, {q(1, 2), 2}, {1, 3}, {2, 2}, {4, 1}});
  CHECK_THROWS_AS(spectrum(FiniteSet::of({0, 1})), DomainError);
}

TEST_CASE("dyadic slices") {
  auto sl = dyadic_slices(FiniteSet::of({1, 2, 3}));
  REQUIRE(sl.size() == 2);
  CHECK(sl[0].tau == q(1, 2));
  CHECK(sl[0].lambdas.size() == 6);
  CHECK(sl[1].tau == Scalar(2));
  CHECK(sl[1].lambdas == FiniteSet::of({1}));
  CHECK(sl[1].size_of(1) == 3);

  auto single = dyadic_slices(FiniteSet::of({9}));
  REQUIRE(single.size() == 1);
  CHECK(single[0].tau == q(1, 2));

  auto g = dyadic_slices(FiniteSet::of({1, 2, 4}));
  REQUIRE(g.size() == 3);
  CHECK(g[0].lambdas == make_set({q(1, 4), 4}));
  CHECK(g[1].tau == Scalar(1));
  CHECK(g[1].lambdas == make_set({q(1, 2), 2}));
  CHECK(g[2].lambdas == FiniteSet::of({1}));

  std::mt19937_64 rng(2);
  for (int i = 0; i < 40; ++i) {
    const auto a = testcorpus::random_rationals(rng, 12, 8);
    const auto quot = quotientset(a, a);
    std::size_t covered = 0;
    for (const auto& s : dyadic_slices(a)) {
      for (std::size_t k = 0; k < s.lambdas.size(); ++k) {
        CHECK(Scalar(static_cast<unsigned long>(s.sizes[k])) > s.tau);
        CHECK(Scalar(static_cast<unsigned long>(s.sizes[k])) <= s.tau * Scalar(2));
        CHECK(quot.contains(s.lambdas[k]));
      }
      covered += s.lambdas.size();
    }
    CHECK(covered == quot.size());
  }
}

TEST_CASE("d(A) upper bounds") {
  const auto a = FiniteSet::of({1, 2, 3});
  const FiniteSet one = FiniteSet::of({1});
  CHECK(doubling_ratio(a, one) == Scalar(3));
  CHECK(doubling_ratio(FiniteSet::of({1, 2, 4}), FiniteSet::of({1, 2, 4})) == q(25, 9));
  CHECK(doubling_ratio(a, a) == Scalar(4));
  const auto p = d_upper(a);
  CHECK(p.d_upper == Scalar(3));
  CHECK(p.witness == one);
  CHECK(p.k_mul == Scalar(2));
  CHECK(p.candidates_tried == 4);

  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    const auto x = testcorpus::random_rationals(rng, 8, 7);
    const auto prof = d_upper(x);
    CHECK(prof.d_upper <= Scalar(static_cast<unsigned long>(x.size())));
    CHECK(prof.d_upper <= prof.k_mul * prof.k_mul);
    CHECK(doubling_ratio(x, prof.witness) == prof.d_upper);
  }
}

TEST_CASE("d(A) exhaustive oracle") {
  const auto a = FiniteSet::of({1, 2, 3});
  const auto p = d_exhaustive(a, FiniteSet::of({1, 2, 3, 6}), 4);
  CHECK(p.d_upper == Scalar(3));
  CHECK(p.witness.size() == 1);

  const auto c = d_exhaustive(FiniteSet::of({5}), FiniteSet::of({2, 3}), 2);
  CHECK(c.d_upper == Scalar(1));

  // Enumerated by hand: {1},{2},{4} give 3, {1,2} and {2,4} give 16/6, {1,4} 25/6, A gives 25/9.
  const auto g = FiniteSet::of({1, 2, 4});
  const auto e = d_exhaustive(g, g, 3);
  CHECK(e.d_upper == q(8, 3));
  CHECK(e.witness == FiniteSet::of({1, 2}));

  std::vector<Scalar> big;
  for (long i = 1; i <= 21; ++i) big.push_back(i);
  CHECK_THROWS_AS(d_exhaustive(a, make_set(big), 3), ResourceError);
}

TEST_CASE("energy identity, Cauchy-Schwarz and dilation invariance") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 60; ++i) {
    const auto a = i % 2 ? testcorpus::random_rationals(rng, 14, 9) : testcorpus::random_integers(rng, 14, 40);
    std::uint64_t sq = 0;
    for (const auto& e : spectrum(a)) sq += e.size * e.size;
    const auto em = multiplicative_energy(a);
    CHECK(em == sq);

    const auto aa = productset(a, a).size();
    const auto quot = quotientset(a, a).size();
    std::vector<Scalar> s1, s2;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (rng() % 2) s1.push_back(a[k]);
      if (rng() % 2) s2.push_back(a[k]);
    }
    if (s1.empty()) s1.push_back(a[0]);
    if (s2.empty()) s2.push_back(a[1]);
    const auto a1 = make_set(s1), a2 = make_set(s2);
    const auto e12 = energy(a1, a2, EnergyKind::multiplicative);
    const auto rhs = a1.size() * a1.size() * a2.size() * a2.size();
    CHECK(e12 * quot >= rhs);
    CHECK(e12 * aa >= rhs);

    const Scalar alpha = q(-7, 3);
    const auto da = affine_image(a, alpha, 0);
    CHECK(multiplicative_energy(da) == em);
    CHECK(productset(da, da).size() == aa);
    CHECK(additive_energy(affine_image(a, 1, q(5, 2))) == additive_energy(a));
  }
}

TEST_CASE("hashed energy equals quadruple enumeration") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const auto a = testcorpus::random_rationals(rng, 1 + i % 12, 6);
    const auto b = testcorpus::random_integers(rng, 1 + (i * 7) % 12, 30);
    CHECK(energy(a, b, EnergyKind::additive) == oracle::energy(a, b, EnergyKind::additive));
    CHECK(energy(a, b, EnergyKind::multiplicative) == oracle::energy(a, b, EnergyKind::multiplicative));
  }
}

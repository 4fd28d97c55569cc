#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "sumprod/errors.hpp"
#include "sumprod/explore.hpp"
#include "sumprod/json_io.hpp"
#include "sumprod/stats.hpp"
#include "sumprod/verify.hpp"

using namespace sumprod;

namespace {
Scalar q(long p, long d = 1) { return Scalar::fraction(p, d); }
}  // namespace

TEST_CASE("explicit fixtures on {1,2,3}") {
  const auto a = FiniteSet::of({1, 2, 3});
  const auto soly = evaluate("SOLY-PROD", a);
  CHECK(soly.lhs.str() == "150");
  CHECK(soly.rhs.str() == "81/8");
  CHECK(soly.pass == std::optional<bool>(true));

  const auto cs = evaluate("CS-SUBS", a);
  CHECK(cs.lhs.str() == "90");
  CHECK(cs.rhs.str() == "81");
  CHECK(cs.pass == std::optional<bool>(true));

  const auto lv = evaluate("LEVELSET", a);
  CHECK(lv.lhs.str() == "1");
  CHECK(lv.rhs.str() == "25/4");
  CHECK(lv.ratio.str() == "4/25");
  CHECK_FALSE(lv.pass.has_value());
}

TEST_CASE("MAIN-A on a geometric progression") {
  const auto a = testcorpus::gp(1, 2, 16);
  const auto r = evaluate("MAIN-A", a);
  CHECK(r.lhs.str() == "136");
  const PowerProduct rhs = PowerProduct::power(16, q(19, 12)) * PowerProduct::power(q(31, 16), q(-5, 6));
  CHECK(r.rhs == rhs);
  CHECK(r.ratio == PowerProduct(136) / rhs);
  CHECK_FALSE(r.explicit_constant);
}

TEST_CASE("suite on {1,2,3}") {
  const auto s = verify_suite(FiniteSet::of({1, 2, 3}));
  CHECK(s.reports.size() >= 14);
  CHECK(s.all_explicit_pass());
  for (std::size_t i = 1; i < s.reports.size(); ++i) CHECK(s.reports[i - 1].id < s.reports[i].id);
  for (const auto& r : s.reports) CHECK(r.pass.has_value() == r.explicit_constant);
  const auto threaded = verify_suite(FiniteSet::of({1, 2, 3}), std::nullopt, {}, 4);
  REQUIRE(threaded.reports.size() == s.reports.size());
  for (std::size_t i = 0; i < s.reports.size(); ++i) CHECK(to_json(threaded.reports[i]) == to_json(s.reports[i]));
}

TEST_CASE("suite examples") {
  const auto ap = testcorpus::ap(1, 1, 64);
  auto r = verify_suite(ap, std::vector<std::string>{"SOLY-PROD"});
  REQUIRE(r.reports.size() == 1);
  CHECK(*r.reports[0].pass);
  const auto gp = testcorpus::gp(1, 2, 16);
  r = verify_suite(gp, std::vector<std::string>{"SOLY-QUOT"});
  REQUIRE(r.reports.size() == 1);
  CHECK(*r.reports[0].pass);
  CHECK(r.reports[0].lhs == PowerProduct(Scalar(136 * 136 * 31)));

  r = verify_suite(gp, std::vector<std::string>{"NOPE", "ER"});
  CHECK(r.reports.size() == 1);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].kind == "domain");
}

TEST_CASE("entry preconditions") {
  CHECK_THROWS_AS(evaluate("SOLY-PROD", FiniteSet::of({3})), DomainError);
  CHECK_THROWS_AS(evaluate("SOLY-PROD", FiniteSet::of({0, 1, 2})), DomainError);
  CHECK_THROWS_AS(evaluate("FOO", FiniteSet::of({1, 2})), DomainError);
  VerifyParams p;
  p.a1 = FiniteSet::of({1, 5});
  CHECK_THROWS_AS(evaluate("CS-SUBS", FiniteSet::of({1, 2}), p), DomainError);
  CHECK_THROWS_AS(evaluate("LEMMA3", FiniteSet::of({-1, 2, 3}), {}), DomainError);
  VerifyParams tight;
  tight.prop_crit_max = 3;
  CHECK_THROWS_AS(evaluate("PROP-CRIT-Q", FiniteSet::of({1, 2, 3}), tight), ResourceError);
}

TEST_CASE("explicit entries pass on random sets") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 40; ++i) {
    const auto a = i % 2 ? testcorpus::random_rationals(rng, 2 + i % 12, 9) : testcorpus::random_integers(rng, 2 + i % 15, 60);
    for (const auto* id : {"SOLY-PROD", "SOLY-QUOT", "CS-SUBS"}) CHECK_MESSAGE(*evaluate(id, a).pass, id);
    VerifyParams p;
    std::vector<Scalar> s1, s2;
    for (const auto& x : a) {
      if (rng() % 2) s1.push_back(x);
      if (rng() % 2) s2.push_back(x);
    }
    if (s1.empty()) s1.push_back(a.min());
    if (s2.empty()) s2.push_back(a.max());
    p.a1 = make_set(s1);
    p.a2 = make_set(s2);
    CHECK(*evaluate("CS-SUBS", a, p).pass);
  }
}

TEST_CASE("dilation leaves multiplicative entries unchanged") {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 10; ++i) {
    const auto a = testcorpus::random_integers(rng, 3 + i, 40);
    const auto b = affine_image(a, q(-3, 7), 0);
    for (const auto* id : {"SOLY-PROD", "SOLY-QUOT", "SOLY-MAX", "CS-SUBS", "MAIN-A", "GEN-SIGMA"})
      CHECK_MESSAGE(evaluate(id, a).ratio == evaluate(id, b).ratio, id);
  }
}

TEST_CASE("LEMMA3 entry") {
  const auto a = FiniteSet::of({1, 2, 3, 4, 6, 9, 12, 18, 36});
  const auto r = evaluate("LEMMA3", a);
  CHECK(r.explicit_constant);
  CHECK(*r.pass);
  VerifyParams p;
  p.tau = 2;
  p.m = 2;
  CHECK(*evaluate("LEMMA3", a, p).pass);
}

TEST_CASE("smallL construction fixtures") {
  const auto r = smallL_construction(FiniteSet::of({1, 2, 3}));
  CHECK(r.energy_mul == 15);
  CHECK(r.threshold == q(5, 6));
  REQUIRE(r.selection);
  CHECK(r.selection->tau == Scalar(2));
  CHECK(r.selection->s_tau == FiniteSet::of({1}));
  CHECK(r.selection->s_prime == FiniteSet::of({1}));
  CHECK(r.selection->s_doubleprime == FiniteSet::of({1}));
  CHECK(r.selection->min_additive_energy_ratio == q(19, 8));

  const auto g = smallL_construction(FiniteSet::of({1, 2, 4, 8}));
  CHECK(g.energy_mul == 44);
  CHECK(g.threshold == q(11, 8));
  REQUIRE(g.selection);
  CHECK(g.selection->tau == Scalar(2));
  CHECK(g.selection->s_tau == make_set({q(1, 2), 1, 2}));
  CHECK(g.selection->s_prime.size() + g.selection->s_doubleprime.size() == 3);
  CHECK_THROWS_AS(smallL_construction(FiniteSet::of({5})), DomainError);
}

TEST_CASE("smallL invariants") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 30; ++i) {
    const auto a = i % 2 ? testcorpus::random_rationals(rng, 2 + i % 10, 8) : testcorpus::random_integers(rng, 2 + i, 50);
    const auto r = smallL_construction(a);
    CHECK(r.total_mass_ok);
    REQUIRE(r.selection);
    const auto& s = *r.selection;
    CHECK(s.tau >= r.threshold);
    CHECK(2 * s.s_prime.size() >= s.s_tau.size());
    CHECK(unite(s.s_prime, s.s_doubleprime) == s.s_tau);
  }
}

TEST_CASE("Katz-Koester inclusions") {
  CHECK(katz_koester_check(FiniteSet::of({1, 2, 3})).empty());
  CHECK(katz_koester_check(FiniteSet::of({1, 2, 4, 8})).empty());
  CHECK(katz_koester_check(FiniteSet::of({7})).empty());
  std::mt19937_64 rng(67);
  for (int i = 0; i < 20; ++i) CHECK(katz_koester_check(testcorpus::random_rationals(rng, 2 + i % 9, 7)).empty());
  CHECK_THROWS_AS(katz_koester_check(FiniteSet::of({0, 1})), DomainError);
}

TEST_CASE("solplus trace") {
  const auto t = solplus_trace(FiniteSet::of({1, 2, 3}), 14);
  CHECK(t.tau == Scalar(2));
  CHECK(t.s_prime == FiniteSet::of({1}));
  CHECK(t.s_doubleprime == FiniteSet::of({1}));
  CHECK_FALSE(t.bsg_objective.has_value());
  CHECK(t.a_prime.size() == 1);
  CHECK(t.a_prime == FiniteSet::of({1}));

  const auto g = solplus_trace(FiniteSet::of({1, 2, 4, 8}), 14);
  CHECK(g.eta == g.l.pow(-64) * Scalar(44) * g.tau.pow(6) * Scalar(7).pow(-5));
  CHECK(g.a_prime.is_subset_of(FiniteSet::of({1, 2, 4, 8})));
  CHECK(g.a_prime.size() >= 1);

  CHECK_THROWS_AS(solplus_trace(FiniteSet::of({1, 2, 4, 8}), 1), ResourceError);
}

TEST_CASE("report JSON is canonical") {
  const auto r = evaluate("SOLY-PROD", FiniteSet::of({1, 2, 3}));
  const auto text = to_json(r).dump();
  CHECK(nlohmann::json::parse(text).dump() == text);
  CHECK(text.find("\"lhs\":\"150\"") != std::string::npos);
  CHECK(text.find("\"pass\":true") != std::string::npos);
  CHECK(to_json(evaluate("MAIN-A", FiniteSet::of({1, 2, 3})))["pass"].is_null());
}

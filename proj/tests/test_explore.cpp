#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sumprod/errors.hpp"
#include "sumprod/explore.hpp"
#include "sumprod/stats.hpp"

using namespace sumprod;

namespace {

std::string temp_path(const char* name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove(p);
  return p.string();
}

FiniteSet upto(long n) {
  std::vector<Scalar> v;
  for (long i = 1; i <= n; ++i) v.push_back(i);
  return make_set(v);
}

}  // namespace

TEST_CASE("generators") {
  GeneratorSpec ap{.kind = GeneratorKind::ap, .start = 1, .step = 1, .n = 4};
  CHECK(generate(ap) == FiniteSet::of({1, 2, 3, 4}));
  GeneratorSpec gp{.kind = GeneratorKind::gp, .start = 1, .ratio = 2, .n = 4};
  CHECK(generate(gp) == FiniteSet::of({1, 2, 4, 8}));
  GeneratorSpec mixed{.kind = GeneratorKind::ap_times_gp, .start = 1, .step = 1, .ratio = 2, .n = 3, .n2 = 2};
  CHECK(generate(mixed) == FiniteSet::of({1, 2, 3, 4, 6}));
  GeneratorSpec u{.kind = GeneratorKind::set_union, .operands = {ap, gp}};
  CHECK(generate(u) == FiniteSet::of({1, 2, 3, 4, 8}));

  GeneratorSpec ri{.kind = GeneratorKind::random_integer, .n = 5, .range = 100, .seed = 7};
  const auto r1 = generate(ri);
  CHECK(r1.size() == 5);
  CHECK(generate(ri) == r1);
  GeneratorSpec rq{.kind = GeneratorKind::random_rational, .n = 6, .range = 9, .seed = 3};
  CHECK(generate(rq) == generate(rq));
  CHECK(generate(rq).size() == 6);

  CHECK_THROWS_AS(generate(GeneratorSpec{.kind = GeneratorKind::random_integer, .n = 5}), DomainError);
  CHECK_THROWS_AS(generate(GeneratorSpec{.kind = GeneratorKind::gp, .ratio = -1, .n = 4}), DomainError);
  CHECK_THROWS_AS(generate(GeneratorSpec{.kind = GeneratorKind::ap, .n = 1}), DomainError);
  CHECK(parse_generator_kind("union") == GeneratorKind::set_union);
}

TEST_CASE("geometric progressions have extremal sumsets and product sets") {
  for (std::size_t n = 2; n <= 32; ++n) {
    const auto a = generate(GeneratorSpec{.kind = GeneratorKind::gp, .start = 1, .ratio = 2, .n = n});
    CHECK(productset(a, a).size() == 2 * n - 1);
    CHECK(sumset(a, a).size() == n * (n + 1) / 2);
  }
}

TEST_CASE("mutation") {
  const auto a = FiniteSet::of({1, 2, 3});
  const auto ground = upto(10);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = mutate(a, ground, seed);
    CHECK(m.moved);
    CHECK(m.set.size() == 3);
    CHECK(m.set.is_subset_of(ground));
    CHECK(intersect(m.set, a)->size() == 2);
    CHECK(mutate(a, ground, seed).set == m.set);
  }
  const auto none = mutate(a, a, 5);
  CHECK_FALSE(none.moved);
  CHECK(none.set == a);
  const auto r = mutate(a, a, 5, MutateOptions{.rational_moves = true});
  CHECK(r.moved);
  CHECK(r.set.size() == 3);
  CHECK(r.set.min() >= Scalar(1));
  CHECK(r.set.max() <= Scalar(3));
}

TEST_CASE("exhaustive search") {
  SearchConfig cfg{.mode = SearchMode::exhaustive, .ground = upto(12), .budget = 1000};
  const auto res = search_extremal("COR-SOL", 4, cfg);
  CHECK(res.evaluated == 495);
  CHECK_FALSE(res.truncated);
  // Brute-force minimum over all 4-subsets.
  std::optional<PowerProduct> best;
  std::optional<FiniteSet> arg;
  const auto g = upto(12);
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      for (int k = j + 1; k < 12; ++k)
        for (int l = k + 1; l < 12; ++l) {
          const auto s = make_set({g[i], g[j], g[k], g[l]});
          const auto r = evaluate("COR-SOL", s).ratio;
          if (!best || compare(r, *best) == std::strong_ordering::less) {
            best = r;
            arg = s;
          }
        }
  CHECK(res.record.ratio == *best);
  CHECK(res.record.set == *arg);

  SearchConfig soly{.mode = SearchMode::exhaustive, .ground = upto(8), .budget = 100};
  const auto sp = search_extremal("SOLY-PROD", 3, soly);
  CHECK(sp.evaluated == 56);
  CHECK(compare(sp.record.ratio, PowerProduct(1)) == std::strong_ordering::greater);

  SearchConfig small{.mode = SearchMode::exhaustive, .ground = upto(12), .budget = 10};
  CHECK(search_extremal("COR-SOL", 4, small).truncated);

  cfg.threads = 3;
  const auto par = search_extremal("COR-SOL", 4, cfg);
  CHECK(par.record.same_result(res.record));
}

TEST_CASE("hillclimb") {
  SearchConfig cfg{.mode = SearchMode::hillclimb, .ground = upto(14), .budget = 0, .seed = 9};
  const auto zero = search_extremal("MAIN-A", 5, cfg);
  CHECK(zero.evaluated == 1);
  cfg.budget = 60;
  cfg.restarts = 3;
  const auto a = search_extremal("MAIN-A", 5, cfg);
  const auto b = search_extremal("MAIN-A", 5, cfg);
  CHECK(a.record.same_result(b.record));
  cfg.threads = 3;
  CHECK(search_extremal("MAIN-A", 5, cfg).record.same_result(a.record));
  CHECK(compare(a.record.ratio, zero.record.ratio) != std::strong_ordering::greater);

  SearchConfig ex{.mode = SearchMode::exhaustive, .ground = upto(14), .budget = 5000};
  CHECK(compare(search_extremal("MAIN-A", 5, ex).record.ratio, a.record.ratio) != std::strong_ordering::greater);
  CHECK_THROWS_AS(search_extremal("NOPE", 5, ex), DomainError);
}

TEST_CASE("BSG subset oracle") {
  const auto r = bsg_subset_oracle(FiniteSet::of({1, 2, 4, 8}), 14);
  CHECK(r.subset == FiniteSet::of({1, 2, 4, 8}));
  CHECK(r.objective == Scalar::fraction(7, 4));
  const auto two = bsg_subset_oracle(FiniteSet::of({1, 2}), 14);
  CHECK(two.subset == FiniteSet::of({1, 2}));
  CHECK(two.objective == Scalar::fraction(3, 2));
  CHECK_THROWS_AS(bsg_subset_oracle(FiniteSet::of({3}), 14), DomainError);
  CHECK_THROWS_AS(bsg_subset_oracle(FiniteSet::of({1, 2, 3}), 2), ResourceError);
  CHECK_THROWS_AS(bsg_subset_oracle(FiniteSet::of({1, 2, 3}), 15), DomainError);
}

TEST_CASE("corpus round trip and tamper detection") {
  const auto path = temp_path("sumprod_corpus_test.jsonl");
  SearchConfig cfg{.mode = SearchMode::exhaustive, .ground = upto(8), .budget = 100};
  const auto rec = search_extremal("MAIN-A", 3, cfg).record;
  const auto rec2 = search_extremal("SMALLMD", 4, cfg).record;
  corpus_store(rec, path);
  corpus_store(rec2, path);
  auto loaded = corpus_load(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].same_result(rec));
  CHECK(loaded[0].timestamp == rec.timestamp);
  CHECK(loaded[1].same_result(rec2));
  CHECK_FALSE(loaded[1].drift);

  std::string text;
  {
    std::ifstream in(path);
    std::getline(in, text);
  }
  const auto pos = text.find("\"ratio\":\"");
  REQUIRE(pos != std::string::npos);
  text.insert(pos + 9, "2*");
  {
    std::ofstream out(path);
    out << text << '\n';
  }
  loaded = corpus_load(path);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].drift);

  { std::ofstream out(path); }
  CHECK(corpus_load(path).empty());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(corpus_load(path), IoError);
}

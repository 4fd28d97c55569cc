#include "sumprod/explore.hpp"

#include <algorithm>
#include <bitset>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "json.hpp"
#include "sumprod/errors.hpp"
#include "sumprod/stats.hpp"

namespace sumprod {

namespace {

using json = nlohmann::json;

constexpr std::pair<GeneratorKind, const char*> kKindNames[] = {
    {GeneratorKind::ap, "ap"},
    {GeneratorKind::gp, "gp"},
    {GeneratorKind::ap_times_gp, "ap_times_gp"},
    {GeneratorKind::random_integer, "random_integer"},
    {GeneratorKind::random_rational, "random_rational"},
    {GeneratorKind::set_union, "union"},
    {GeneratorKind::custom_file, "custom_file"},
};

json set_json(const FiniteSet& s) {
  json arr = json::array();
  for (const auto& x : s) arr.push_back(x.str());
  return arr;
}

FiniteSet set_from_json(const json& arr) {
  std::vector<Scalar> v;
  for (const auto& x : arr) v.push_back(Scalar::parse(x.get<std::string>()));
  return make_set(std::move(v));
}

json spec_json(const GeneratorSpec& s) {
  json j{{"kind", to_string(s.kind)}};
  switch (s.kind) {
    case GeneratorKind::ap:
      j.update({{"start", s.start.str()}, {"step", s.step.str()}, {"n", s.n}});
      break;
    case GeneratorKind::gp:
      j.update({{"start", s.start.str()}, {"ratio", s.ratio.str()}, {"n", s.n}});
      break;
    case GeneratorKind::ap_times_gp:
      j.update({{"start", s.start.str()}, {"step", s.step.str()}, {"ratio", s.ratio.str()}, {"n", s.n},
                {"n2", s.n2 ? s.n2 : s.n}});
      break;
    case GeneratorKind::random_integer:
    case GeneratorKind::random_rational:
      j.update({{"n", s.n}, {"range", s.range}, {"seed", s.seed ? json(*s.seed) : json()}});
      break;
    case GeneratorKind::set_union: {
      json ops = json::array();
      for (const auto& o : s.operands) ops.push_back(spec_json(o));
      j["operands"] = ops;
      break;
    }
    case GeneratorKind::custom_file:
      j["path"] = s.path;
      break;
  }
  return j;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

FiniteSet arithmetic(const Scalar& start, const Scalar& step, std::size_t n) {
  if (step.is_zero()) throw DomainError("ap step must be nonzero");
  std::vector<Scalar> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(start + step * Scalar(static_cast<unsigned long>(i)));
  return make_set(std::move(v));
}

FiniteSet geometric(const Scalar& start, const Scalar& ratio, std::size_t n) {
  if (start.is_zero()) throw DomainError("gp start must be nonzero");
  if (ratio.is_zero() || ratio.abs() == Scalar(1)) throw DomainError("gp ratio must not be 0, 1 or -1");
  std::vector<Scalar> v;
  Scalar x = start;
  for (std::size_t i = 0; i < n; ++i, x *= ratio) v.push_back(x);
  return make_set(std::move(v));
}

std::uint64_t need_seed(const GeneratorSpec& s) {
  if (!s.seed) throw DomainError(to_string(s.kind) + " needs a seed");
  if (s.range < 1) throw DomainError("range must be at least 1");
  return *s.seed;
}

// Ratio order; falls back to floating logs when the exact comparison is out of reach.
std::strong_ordering ratio_order(const PowerProduct& a, const PowerProduct& b) {
  try {
    return compare(a, b);
  } catch (const ResourceError&) {
    const double x = a.log_abs(), y = b.log_abs();
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
}

struct Candidate {
  FiniteSet set;
  PowerProduct ratio;
  std::size_t origin = 0;  // restart index for hillclimb
};

// True when x should replace y as the incumbent.
bool better(const Candidate& x, const Candidate& y, bool maximize) {
  auto c = ratio_order(x.ratio, y.ratio);
  if (maximize) c = 0 <=> c;
  if (c != 0) return c < 0;
  return x.set < y.set;
}

void keep_best(std::optional<Candidate>& best, Candidate c, bool maximize) {
  if (!best || better(c, *best, maximize)) best = std::move(c);
}

std::optional<PowerProduct> score(const std::string& id, const FiniteSet& s, const VerifyParams& p) {
  try {
    return evaluate(id, s, p).ratio;
  } catch (const DomainError&) {
  } catch (const ResourceError&) {
  }
  return std::nullopt;
}

// C(g, n), saturating.
std::uint64_t choose(std::uint64_t g, std::uint64_t n) {
  if (n > g) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const std::uint64_t num = g - n + i;
    if (r > UINT64_MAX / num) return UINT64_MAX;
    r = r * num / i;
  }
  return r;
}

FiniteSet subset_of(const FiniteSet& ground, const std::vector<std::uint32_t>& idx) {
  std::vector<Scalar> v;
  v.reserve(idx.size());
  for (auto i : idx) v.push_back(ground[i]);
  return FiniteSet::from_sorted(std::move(v));
}

template <class F>
void run_parallel(std::size_t jobs, unsigned threads, F f) {
  const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs)));
  if (nt == 1) {
    for (std::size_t i = 0; i < jobs; ++i) f(i, 0u);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < jobs; i += nt) f(i, t);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::string to_string(GeneratorKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "?";
}

GeneratorKind parse_generator_kind(const std::string& name) {
  for (const auto& [k, n] : kKindNames)
    if (name == n) return k;
  throw DomainError("unknown generator kind '" + name + "'");
}

FiniteSet generate(const GeneratorSpec& spec) {
  const bool sized = spec.kind != GeneratorKind::set_union && spec.kind != GeneratorKind::custom_file;
  if (sized && spec.n < 2) throw DomainError("generator needs n >= 2");
  switch (spec.kind) {
    case GeneratorKind::ap:
      return arithmetic(spec.start, spec.step, spec.n);
    case GeneratorKind::gp:
      return geometric(spec.start, spec.ratio, spec.n);
    case GeneratorKind::ap_times_gp:
      return productset(arithmetic(spec.start, spec.step, spec.n), geometric(1, spec.ratio, spec.n2 ? spec.n2 : spec.n));
    case GeneratorKind::random_integer: {
      std::mt19937_64 rng(need_seed(spec));
      if (spec.range < spec.n) throw DomainError("range is smaller than n");
      std::uniform_int_distribution<std::uint64_t> d(1, spec.range);
      std::set<std::uint64_t> drawn;
      while (drawn.size() < spec.n) drawn.insert(d(rng));
      std::vector<Scalar> v;
      for (auto x : drawn) v.push_back(Scalar(static_cast<unsigned long>(x)));
      return make_set(std::move(v));
    }
    case GeneratorKind::random_rational: {
      std::mt19937_64 rng(need_seed(spec));
      std::uniform_int_distribution<std::uint64_t> d(1, spec.range);
      std::set<Scalar> drawn;
      const std::size_t cap = 1000 * spec.n + 1000;
      for (std::size_t tries = 0; drawn.size() < spec.n; ++tries) {
        if (tries == cap) throw DomainError("range too small for n distinct rationals");
        const auto p = d(rng);
        const auto q = d(rng);
        drawn.insert(Scalar::fraction(BigInt(static_cast<unsigned long>(p)), BigInt(static_cast<unsigned long>(q))));
      }
      return make_set(std::vector<Scalar>(drawn.begin(), drawn.end()));
    }
    case GeneratorKind::set_union: {
      if (spec.operands.empty()) throw DomainError("union needs operands");
      FiniteSet out = generate(spec.operands.front());
      for (std::size_t i = 1; i < spec.operands.size(); ++i) out = unite(out, generate(spec.operands[i]));
      return out;
    }
    case GeneratorKind::custom_file: {
      std::ifstream in(spec.path);
      if (!in) throw IoError("cannot open " + spec.path);
      return parse_set_text(in).set;
    }
  }
  throw DomainError("unknown generator kind");
}

MutateResult mutate(const FiniteSet& a, const FiniteSet& ground, std::uint64_t seed, const MutateOptions& options) {
  std::vector<Scalar> outside;
  for (const auto& g : ground)
    if (!a.contains(g)) outside.push_back(g);
  std::mt19937_64 rng(seed);
  const bool can_swap = !outside.empty();
  bool rational = options.rational_moves && ground.min() < ground.max();
  if (rational && can_swap) rational = (rng() & 1) != 0;
  if (!can_swap && !rational) return {a, false};

  std::vector<Scalar> v(a.begin(), a.end());
  const std::size_t victim = std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng);
  if (rational) {
    std::uniform_int_distribution<std::uint64_t> dq(1, std::max<std::uint64_t>(1, options.rational_range));
    for (int attempt = 0; attempt < 64; ++attempt) {
      const BigInt den(static_cast<unsigned long>(dq(rng)));
      const BigInt lo = -floor(-ground.min() * Scalar(den));
      const BigInt hi = floor(ground.max() * Scalar(den));
      if (hi < lo) continue;
      const BigInt width = hi - lo + 1;
      const BigInt num = lo + BigInt(static_cast<unsigned long>(rng() % width.get_ui()));
      const Scalar x = Scalar::fraction(num, den);
      if (a.contains(x) || (x.is_zero() && !a.contains_zero())) continue;
      v[victim] = x;
      return {make_set(std::move(v)), true};
    }
    if (!can_swap) return {a, false};
  }
  v[victim] = outside[std::uniform_int_distribution<std::size_t>(0, outside.size() - 1)(rng)];
  return {make_set(std::move(v)), true};
}

bool ExtremalRecord::same_result(const ExtremalRecord& o) const {
  return set == o.set && inequality_id == o.inequality_id && ratio == o.ratio && generator == o.generator &&
         artifact_version == o.artifact_version && drift == o.drift;
}

SearchResult search_extremal(const std::string& inequality_id, std::size_t n, const SearchConfig& config) {
  const auto& reg = registry();
  if (std::none_of(reg.begin(), reg.end(), [&](const RegistryEntry& e) { return e.id == inequality_id; }))
    throw DomainError("unknown inequality id '" + inequality_id + "'");
  if (n < 2) throw DomainError("search needs n >= 2");
  const FiniteSet& ground = config.ground;
  if (ground.size() < n) throw DomainError("ground set has fewer than n elements");

  bool truncated = false;
  std::uint64_t evaluated_total = 0, skipped_total = 0;
  std::optional<Candidate> best;
  json lineage;
  std::mutex lock;

  if (config.mode == SearchMode::exhaustive) {
    const std::uint64_t total = choose(ground.size(), n);
    const std::uint64_t take = std::min(total, config.budget);
    truncated = take < total;
    std::vector<std::vector<std::uint32_t>> combos;
    combos.reserve(take);
    std::vector<std::uint32_t> idx(n);
    for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
    const auto g = static_cast<std::uint32_t>(ground.size());
    for (std::uint64_t c = 0; c < take; ++c) {
      combos.push_back(idx);
      // next combination in lexicographic order
      std::size_t i = n;
      while (i > 0 && idx[i - 1] == g - n + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    std::uint64_t skipped = 0;
    run_parallel(combos.size(), config.threads, [&](std::size_t i, unsigned) {
      FiniteSet s = subset_of(ground, combos[i]);
      auto r = score(inequality_id, s, config.params);
      std::lock_guard<std::mutex> g(lock);
      if (!r) {
        ++skipped;
        return;
      }
      keep_best(best, Candidate{std::move(s), std::move(*r)}, config.maximize);
    });
    evaluated_total = combos.size();
    skipped_total = skipped;
    lineage = {{"mode", "exhaustive"}, {"ground", set_json(ground)}, {"n", n}, {"budget", config.budget}};
  } else {
    std::vector<std::uint64_t> evaluated(config.restarts, 0), skipped(config.restarts, 0);
    run_parallel(config.restarts, config.threads, [&](std::size_t r, unsigned) {
      std::seed_seq seq{config.seed, static_cast<std::uint64_t>(r)};
      std::mt19937_64 rng(seq);
      std::vector<std::uint32_t> order(ground.size());
      for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(n);
      std::sort(order.begin(), order.end());
      FiniteSet cur = subset_of(ground, order);
      std::optional<PowerProduct> cur_score = score(inequality_id, cur, config.params);
      ++evaluated[r];
      std::optional<Candidate> local;
      if (cur_score) keep_best(local, Candidate{cur, *cur_score, r}, config.maximize);
      else ++skipped[r];
      for (std::uint64_t it = 0; it < config.budget; ++it) {
        auto m = mutate(cur, ground, rng(), config.mutation);
        if (!m.moved) break;
        auto sc = score(inequality_id, m.set, config.params);
        ++evaluated[r];
        if (!sc) {
          ++skipped[r];
          continue;
        }
        bool accept = !cur_score;
        if (cur_score) {
          auto c = ratio_order(*sc, *cur_score);
          if (config.maximize) c = 0 <=> c;
          accept = c < 0 || (c == 0 && (rng() & 1));
        }
        if (accept) {
          cur = m.set;
          cur_score = sc;
        }
        keep_best(local, Candidate{m.set, *sc, r}, config.maximize);
      }
      if (local) {
        std::lock_guard<std::mutex> g(lock);
        keep_best(best, std::move(*local), config.maximize);
      }
    });
    for (std::size_t r = 0; r < config.restarts; ++r) {
      evaluated_total += evaluated[r];
      skipped_total += skipped[r];
    }
    lineage = {{"mode", "hillclimb"}, {"ground", set_json(ground)}, {"n", n},           {"budget", config.budget},
               {"seed", config.seed},  {"restarts", config.restarts}, {"rational_moves", config.mutation.rational_moves}};
    if (best) lineage["restart"] = best->origin;
  }
  if (!best) throw DomainError("no candidate set could be evaluated for " + inequality_id);
  lineage["maximize"] = config.maximize;
  return SearchResult{.record = ExtremalRecord{.set = best->set,
                                               .inequality_id = inequality_id,
                                               .ratio = best->ratio,
                                               .generator = lineage.dump(),
                                               .timestamp = utc_timestamp()},
                      .truncated = truncated,
                      .evaluated = evaluated_total,
                      .skipped = skipped_total};
}

BsgResult bsg_subset_oracle(const FiniteSet& s, std::size_t max_size) {
  if (max_size > kBsgMaxSize) throw DomainError("subset oracle handles at most 14 elements");
  if (s.size() < 2) throw DomainError("subset oracle needs |S| >= 2");
  if (s.contains_zero()) throw DomainError("S must not contain 0");
  if (s.size() > max_size)
    throw ResourceError("|S| = " + std::to_string(s.size()) + " exceeds the subset oracle limit " + std::to_string(max_size));
  const std::size_t k = s.size();
  std::vector<Scalar> ratios;
  for (const auto& x : s)
    for (const auto& y : s) ratios.push_back(x / y);
  std::vector<Scalar> keys = ratios;
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<std::uint16_t> id(k * k);
  for (std::size_t i = 0; i < k * k; ++i)
    id[i] = static_cast<std::uint16_t>(std::lower_bound(keys.begin(), keys.end(), ratios[i]) - keys.begin());

  const Scalar k2 = Scalar(static_cast<unsigned long>(k * k));
  std::optional<Scalar> best_obj;
  std::vector<std::uint32_t> best_idx;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::uint32_t> idx;
    for (std::uint32_t i = 0; i < k; ++i)
      if (mask >> i & 1) idx.push_back(i);
    std::bitset<kBsgMaxSize * kBsgMaxSize> seen;
    for (auto i : idx)
      for (auto j : idx) seen.set(id[i * k + j]);
    const auto m = static_cast<unsigned long>(idx.size());
    const Scalar obj = Scalar(static_cast<unsigned long>(seen.count())) * k2 / Scalar(m * m * m);
    bool take = !best_obj || obj < *best_obj;
    if (!take && obj == *best_obj) {
      take = idx.size() > best_idx.size() || (idx.size() == best_idx.size() && idx < best_idx);
    }
    if (take) {
      best_obj = obj;
      best_idx = std::move(idx);
    }
  }
  return {subset_of(s, best_idx), *best_obj};
}

void corpus_store(const ExtremalRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open corpus " + path + " for appending");
  json generator;
  try {
    generator = json::parse(record.generator);
  } catch (const json::exception&) {
    generator = record.generator;
  }
  const json j{{"set", set_json(record.set)},        {"inequality_id", record.inequality_id},
               {"ratio", record.ratio.str()},        {"generator", generator},
               {"timestamp", record.timestamp},      {"artifact_version", record.artifact_version}};
  out << j.dump() << '\n';
  if (!out) throw IoError("write to corpus " + path + " failed");
}

std::vector<ExtremalRecord> corpus_load(const std::string& path, const VerifyParams& params) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus " + path);
  std::vector<ExtremalRecord> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      const auto& g = j.at("generator");
      ExtremalRecord r{.set = set_from_json(j.at("set")),
                       .inequality_id = j.at("inequality_id").get<std::string>(),
                       .ratio = PowerProduct(0),
                       .generator = g.is_string() ? g.get<std::string>() : g.dump(),
                       .timestamp = j.at("timestamp").get<std::string>(),
                       .artifact_version = j.at("artifact_version").get<std::string>()};
      const auto fresh = score(r.inequality_id, r.set, params);
      const auto text = j.at("ratio").get<std::string>();
      try {
        r.ratio = PowerProduct::parse(text);
        r.drift = !fresh || !(*fresh == r.ratio);
      } catch (const DomainError&) {
        // unreadable ratio: keep the recomputed value
        if (fresh) r.ratio = *fresh;
        r.drift = true;
      }
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(lineno, e.what());
    } catch (const DomainError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return out;
}

}  // namespace sumprod

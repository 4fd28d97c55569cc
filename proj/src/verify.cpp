#include "sumprod/verify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "sumprod/errors.hpp"
#include "sumprod/explore.hpp"
#include "sumprod/stats.hpp"

namespace sumprod {

namespace {

Scalar sz(std::uint64_t v) { return Scalar(static_cast<unsigned long>(v)); }

PowerProduct pw(const Scalar& base, const Scalar& e) { return PowerProduct::power(base, e); }

Scalar q(long p, long d) { return Scalar::fraction(p, d); }

std::string digest(const FiniteSet& s) {
  std::ostringstream out;
  out << "n=" << s.size() << " ";
  if (s.size() <= 8) {
    out << s.str();
  } else {
    out << "{";
    for (std::size_t i = 0; i < 4; ++i) out << s[i].str() << ", ";
    out << "..., " << s.max().str() << "}";
  }
  return out.str();
}

// Shared statistics of A, computed on first use.
class Context {
 public:
  explicit Context(const FiniteSet& a) : a_(a) {}

  const FiniteSet& a() const { return a_; }
  std::uint64_t n() const { return a_.size(); }
  std::uint64_t sum() { return lazy(sum_once_, sum_, [&] { return sumset(a_, a_).size(); }); }
  std::uint64_t prod() { return lazy(prod_once_, prod_, [&] { return productset(a_, a_).size(); }); }
  std::uint64_t quot() { return lazy(quot_once_, quot_, [&] { return quotientset(a_, a_).size(); }); }
  std::uint64_t e_add() { return lazy(eadd_once_, eadd_, [&] { return additive_energy(a_); }); }
  std::uint64_t e_mul() { return lazy(emul_once_, emul_, [&] { return multiplicative_energy(a_); }); }
  const Scalar& d_hat(std::span<const FiniteSet> extra) {
    std::call_once(dhat_once_, [&] { dhat_ = d_upper(a_, extra).d_upper; });
    return dhat_;
  }
  Scalar k() { return sz(std::min(prod(), quot())) / sz(n()); }
  // max(1, |A+A|^2 min(|A/A|, |AA|) / |A|^4)
  Scalar l() {
    const Scalar v = sz(sum()).pow(2) * sz(std::min(prod(), quot())) / sz(n()).pow(4);
    return std::max(Scalar(1), v);
  }
  std::string sizes() {
    std::ostringstream out;
    out << "A: " << digest(a_) << "; |A+A|=" << sum() << " |AA|=" << prod() << " |A/A|=" << quot();
    return out.str();
  }

 private:
  template <class F>
  static std::uint64_t lazy(std::once_flag& flag, std::uint64_t& slot, F f) {
    std::call_once(flag, [&] { slot = f(); });
    return slot;
  }

  const FiniteSet& a_;
  std::once_flag sum_once_, prod_once_, quot_once_, eadd_once_, emul_once_, dhat_once_;
  std::uint64_t sum_ = 0, prod_ = 0, quot_ = 0, eadd_ = 0, emul_ = 0;
  Scalar dhat_;
};

InequalityReport make_report(std::string_view id, const PowerProduct& lhs, const PowerProduct& rhs, bool explicit_constant,
                             std::string inputs) {
  InequalityReport r{.id = std::string(id), .lhs = lhs, .rhs = rhs, .ratio = lhs / rhs,
                     .explicit_constant = explicit_constant, .pass = std::nullopt, .inputs = std::move(inputs)};
  if (explicit_constant) r.pass = compare(lhs, rhs) != std::strong_ordering::less;
  return r;
}

// |A+A| against |A|^en K^ek extra, with both K variants listed.
InequalityReport k_entry(std::string_view id, Context& c, const Scalar& en, const Scalar& ek,
                         const PowerProduct& extra = PowerProduct(1)) {
  const PowerProduct lhs(sz(c.sum()));
  const PowerProduct base = pw(sz(c.n()), en) * extra;
  const Scalar k_mul = sz(c.prod()) / sz(c.n());
  const Scalar k_div = sz(c.quot()) / sz(c.n());
  std::ostringstream in;
  in << c.sizes() << "; K=" << c.k().str() << " (K_mul=" << k_mul.str() << ", K_div=" << k_div.str() << ")"
     << "; ratio[K_mul]=" << (lhs / (base * pw(k_mul, ek))).str() << "; ratio[K_div]=" << (lhs / (base * pw(k_div, ek))).str();
  return make_report(id, lhs, base * pw(c.k(), ek), false, in.str());
}

PowerProduct log2n(std::uint64_t n, const Scalar& e) { return PowerProduct::log2_power(n, e); }

Scalar tau_or_default(const VerifyParams& p) {
  const Scalar t = p.tau.value_or(Scalar(2));
  if (t.sign() <= 0) throw DomainError("tau must be positive");
  return t;
}

const FiniteSet& pick(const std::optional<FiniteSet>& v, const FiniteSet& fallback) { return v ? *v : fallback; }

void require_multiplicative(const FiniteSet& s, const char* what) {
  if (s.contains_zero()) throw DomainError(std::string(what) + " must not contain 0");
}

// Largest dyadic tau whose slice holds at least three slopes, else at least two.
Scalar default_lemma_tau(const FiniteSet& a, const std::optional<FiniteSet>& s_sub) {
  const auto slices = dyadic_slices(a);
  if (s_sub) {
    for (const auto& s : slices)
      if (s.lambdas.contains(s_sub->min())) return s.tau;
    throw DomainError("S' is not inside any slice");
  }
  for (std::size_t need : {3u, 2u}) {
    for (auto it = slices.rbegin(); it != slices.rend(); ++it)
      if (it->lambdas.size() >= need) return it->tau;
  }
  throw DomainError("no slice holds two slopes");
}

InequalityReport prop_crit(std::string_view id, Context& c, const VerifyParams& p, bool quotient) {
  const FiniteSet derived = quotient ? quotientset(c.a(), c.a()) : productset(c.a(), c.a());
  if (derived.size() > p.prop_crit_max)
    throw ResourceError(std::string(quotient ? "|A/A|" : "|AA|") + " = " + std::to_string(derived.size()) +
                        " exceeds the energy budget " + std::to_string(p.prop_crit_max));
  const Scalar lhs = sz(multiplicative_energy(derived));
  const Scalar l = c.l();
  const Scalar rhs = sz(c.e_mul()).pow(3) / (l.pow(32) * sz(c.n()).pow(4));
  std::ostringstream in;
  in << c.sizes() << "; E*(A)=" << c.e_mul() << "; L=" << l.str();
  return make_report(id, lhs, rhs, false, in.str());
}

InequalityReport lemma3(Context& c, const VerifyParams& p) {
  if (!c.a().all_positive()) throw DomainError("LEMMA3 needs positive elements");
  const Scalar tau = p.tau ? *p.tau : default_lemma_tau(c.a(), p.s_sub);
  const std::size_t m = p.m.value_or(2);
  const auto r = solymosi_cluster_report(c.a(), tau, m, p.s_sub);
  const Scalar s2 = sz(r.sumset_size).pow(2);
  const Scalar lhs = (Scalar(128) * s2).pow(2) * sz(r.sigma);
  const Scalar rhs = (tau.pow(3) * sz(r.s_prime.size())).pow(2);
  std::ostringstream in;
  in << "A: " << digest(c.a()) << "; tau=" << tau.str() << " M=" << m << " |S'|=" << r.s_prime.size()
     << " sigma=" << r.sigma << (r.sigma_exact ? " (exact)" : " (lower bound)") << "; cond_sigma=" << r.cond_sigma
     << " cond_sumset=" << r.cond_sumset << " conclusion=" << r.conclusion << " sums_in_sumset=" << r.sums_in_sumset
     << " total_within_square=" << r.total_within_square;
  auto rep = make_report("LEMMA3", lhs, rhs, true, in.str());
  rep.pass = r.lemma_pass && r.sums_in_sumset && r.total_within_square;
  return rep;
}

InequalityReport evaluate_in(std::string_view id, Context& c, const VerifyParams& p) {
  const auto& a = c.a();
  const std::uint64_t n = c.n();
  if (n < 2) throw DomainError("registry entries need |A| >= 2");
  require_multiplicative(a, "A");
  const Scalar nn = sz(n);

  if (id == "SOLY-PROD" || id == "SOLY-QUOT") {
    const bool prod = id == "SOLY-PROD";
    const Scalar lhs = sz(c.sum()).pow(2) * sz(prod ? c.prod() : c.quot());
    const Scalar rhs = nn.pow(4) / Scalar(4 * static_cast<long>(ceil_log2(n)));
    return make_report(id, lhs, rhs, true, c.sizes());
  }
  if (id == "SOLY-MAX") {
    const PowerProduct lhs(sz(std::max(c.sum(), c.prod())));
    return make_report(id, lhs, pw(nn, q(4, 3)) * log2n(n, q(-1, 3)), false, c.sizes());
  }
  if (id == "COR-SOL") return k_entry(id, c, q(3, 2), q(-1, 2));
  if (id == "PREV") return k_entry(id, c, q(58, 37), q(-42, 37));
  if (id == "PREV-DA") {
    const Scalar& d = c.d_hat(p.d_candidates);
    std::string in = c.sizes() + "; d_hat=" + d.str();
    return make_report(id, PowerProduct(sz(c.sum())), pw(nn, q(58, 37)) * pw(d, q(-21, 37)), false, in);
  }
  if (id == "MAIN-A") return k_entry(id, c, q(19, 12), q(-5, 6));
  if (id == "MAIN-B") return k_entry(id, c, q(49, 32), q(-19, 32));
  if (id == "SMALL2") return k_entry(id, c, q(49, 32), q(-19, 32));
  if (id == "SMALLMD") return k_entry(id, c, q(19, 12), q(-5, 6), log2n(n, q(-1, 2)));
  if (id == "CS-SUBS") {
    const FiniteSet& a1 = pick(p.a1, a);
    const FiniteSet& a2 = pick(p.a2, a);
    if (!a1.is_subset_of(a) || !a2.is_subset_of(a)) throw DomainError("A1 and A2 must be subsets of A");
    const Scalar lhs = sz(energy(a1, a2, EnergyKind::multiplicative)) * sz(std::min(c.prod(), c.quot()));
    const Scalar rhs = sz(a1.size()).pow(2) * sz(a2.size()).pow(2);
    return make_report(id, lhs, rhs, true, c.sizes() + "; A1: " + digest(a1) + "; A2: " + digest(a2));
  }
  if (id == "LEVELSET") {
    const FiniteSet& b = pick(p.b, a);
    require_multiplicative(b, "B");
    const Scalar tau = tau_or_default(p);
    const Scalar lhs = sz(rep_counts(a, b, Op::div).count_at_least(tau));
    const std::uint64_t bb = p.b ? sumset(b, b).size() : c.sum();
    const Scalar rhs = sz(c.sum()) * sz(bb) / tau.pow(2);
    return make_report(id, lhs, rhs, false, c.sizes() + "; B: " + digest(b) + " |B+B|=" + std::to_string(bb) + "; tau=" + tau.str());
  }
  if (id == "ENERGY-SUMSET") {
    const FiniteSet& b = pick(p.b, a);
    require_multiplicative(b, "B");
    const std::uint64_t mn = std::min(a.size(), b.size());
    if (mn < 2) throw DomainError("ENERGY-SUMSET needs |B| >= 2");
    const std::uint64_t bb = p.b ? sumset(b, b).size() : c.sum();
    const Scalar lhs = sz(p.b ? energy(a, b, EnergyKind::multiplicative) : c.e_mul());
    const PowerProduct rhs = PowerProduct(sz(c.sum()) * sz(bb)) * log2n(mn, 1);
    return make_report(id, lhs, rhs, false, c.sizes() + "; B: " + digest(b) + " |B+B|=" + std::to_string(bb));
  }
  if (id == "DA-LEVEL") {
    const FiniteSet& b = pick(p.b, a);
    const Scalar tau = tau_or_default(p);
    const Scalar& d = c.d_hat(p.d_candidates);
    const Scalar lhs = sz(rep_counts(a, b, Op::add).count_at_least(tau));
    const Scalar rhs = d * nn * sz(b.size()).pow(2) / tau.pow(3);
    return make_report(id, lhs, rhs, false, c.sizes() + "; B: " + digest(b) + "; tau=" + tau.str() + "; d_hat=" + d.str());
  }
  if (id == "GEN-SIGMA") {
    const FiniteSet& a1 = pick(p.a1, a);
    const FiniteSet& a2 = pick(p.a2, a);
    const FiniteSet& a3 = pick(p.a3, a);
    require_multiplicative(a1, "A1");
    const Scalar c1 = p.alpha1.value_or(1), c2 = p.alpha2.value_or(1), c3 = p.alpha3.value_or(-1);
    const Scalar d = p.a1 ? d_upper(a1, p.d_candidates).d_upper : c.d_hat(p.d_candidates);
    const Scalar lhs = sz(sigma_count(c1, a1, c2, a2, c3, a3).count);
    const PowerProduct rhs = pw(d, q(1, 3)) * pw(sz(a1.size()), q(1, 3)) * pw(sz(a2.size()), q(2, 3)) *
                             pw(sz(a3.size()), q(2, 3));
    std::ostringstream in;
    in << "A1: " << digest(a1) << "; A2: " << digest(a2) << "; A3: " << digest(a3) << "; alpha=(" << c1.str() << ", "
       << c2.str() << ", " << c3.str() << "); d_hat(A1)=" << d.str();
    return make_report(id, lhs, rhs, false, in.str());
  }
  if (id == "ER") {
    const Scalar lhs = sz(c.e_add()).pow(4);
    const PowerProduct rhs = PowerProduct(sz(std::min(c.prod(), c.quot())) * nn.pow(10)) * log2n(n, 1);
    return make_report(id, lhs, rhs, false, c.sizes() + "; E+(A)=" + std::to_string(c.e_add()));
  }
  if (id == "SMALLMD-ENERGY") {
    const PowerProduct rhs = pw(c.k(), q(1, 4)) * pw(nn, q(5, 8)) * pw(sz(c.sum()), q(3, 2)) * log2n(n, q(3, 4));
    return make_report(id, sz(c.e_mul()), rhs, false,
                       c.sizes() + "; E*(A)=" + std::to_string(c.e_mul()) + "; K=" + c.k().str());
  }
  if (id == "PROP-CRIT-Q") return prop_crit(id, c, p, true);
  if (id == "PROP-CRIT-P") return prop_crit(id, c, p, false);
  if (id == "SOLPLUS") {
    const std::uint64_t via_q = std::max(c.sum(), c.quot());
    const std::uint64_t via_p = std::max(c.sum(), c.prod());
    const Scalar exponent = q(4, 3) + q(1, 20598) - q(1, 1000000);
    std::ostringstream in;
    in << c.sizes() << "; max(|A+A|,|A/A|)=" << via_q << " max(|A+A|,|AA|)=" << via_p << "; exponent=" << exponent.str();
    return make_report(id, sz(std::min(via_q, via_p)), pw(nn, exponent), false, in.str());
  }
  if (id == "LEMMA3") return lemma3(c, p);
  throw DomainError("unknown inequality id '" + std::string(id) + "'");
}

}  // namespace

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = {
      {"SOLY-PROD", true, "|A+A|^2 |AA| >= |A|^4 / (4 ceil(log2 |A|))"},
      {"SOLY-QUOT", true, "|A+A|^2 |A/A| >= |A|^4 / (4 ceil(log2 |A|))"},
      {"SOLY-MAX", false, "max(|A+A|, |AA|) vs |A|^(4/3) log2(|A|)^(-1/3)"},
      {"COR-SOL", false, "|A+A| vs |A|^(3/2) K^(-1/2)"},
      {"PREV", false, "|A+A| vs |A|^(58/37) K^(-42/37)"},
      {"PREV-DA", false, "|A+A| vs |A|^(58/37) d(A)^(-21/37)"},
      {"MAIN-A", false, "|A+A| vs |A|^(19/12) K^(-5/6)"},
      {"MAIN-B", false, "|A+A| vs |A|^(49/32) K^(-19/32)"},
      {"CS-SUBS", true, "E*(A1, A2) min(|A/A|, |AA|) >= |A1|^2 |A2|^2"},
      {"LEVELSET", false, "#{x : |A ∩ xB| >= tau} vs |A+A| |B+B| / tau^2"},
      {"ENERGY-SUMSET", false, "E*(A, B) vs |A+A| |B+B| log2 min(|A|, |B|)"},
      {"DA-LEVEL", false, "#{x : |A ∩ (x - B)| >= tau} vs d(A) |A| |B|^2 / tau^3"},
      {"GEN-SIGMA", false, "sigma(a1 A1, a2 A2, a3 A3) vs d(A1)^(1/3) |A1|^(1/3) |A2|^(2/3) |A3|^(2/3)"},
      {"ER", false, "E+(A)^4 vs min(|A/A|, |AA|) |A|^10 log2 |A|"},
      {"SMALLMD-ENERGY", false, "E*(A) vs K^(1/4) |A|^(5/8) |A+A|^(3/2) log2(|A|)^(3/4)"},
      {"SMALLMD", false, "|A+A| vs |A|^(19/12) K^(-5/6) log2(|A|)^(-1/2)"},
      {"SMALL2", false, "|A+A| vs |A|^(49/32) K^(-19/32)"},
      {"PROP-CRIT-Q", false, "E*(A/A) vs E*(A)^3 / (L^32 |A|^4)"},
      {"PROP-CRIT-P", false, "E*(AA) vs E*(A)^3 / (L^32 |A|^4)"},
      {"SOLPLUS", false, "min over X in {A/A, AA} of max(|A+A|, |X|) vs |A|^(4/3 + 1/20598 - 10^-6)"},
      {"LEMMA3", true, "cluster conditions imply |A+A|^2 >= tau^3 |S'| / (128 sqrt(sigma))"},
  };
  return entries;
}

InequalityReport evaluate(std::string_view id, const FiniteSet& a, const VerifyParams& params) {
  Context c(a);
  return evaluate_in(id, c, params);
}

bool SuiteResult::all_explicit_pass() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const InequalityReport& r) { return !r.explicit_constant || r.pass.value_or(false); });
}

bool SuiteResult::has_resource_error() const {
  return std::any_of(errors.begin(), errors.end(), [](const EntryError& e) { return e.kind == "resource"; });
}

SuiteResult verify_suite(const FiniteSet& a, const std::optional<std::vector<std::string>>& ids,
                         const VerifyParams& params, unsigned threads) {
  std::vector<std::string> todo;
  if (ids) {
    todo = *ids;
  } else {
    for (const auto& e : registry()) todo.emplace_back(e.id);
  }
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());

  Context ctx(a);
  std::vector<std::optional<InequalityReport>> out(todo.size());
  std::vector<std::optional<EntryError>> errs(todo.size());
  std::vector<std::exception_ptr> fatal(todo.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      try {
        out[i] = evaluate_in(todo[i], ctx, params);
      } catch (const DomainError& e) {
        errs[i] = EntryError{todo[i], "domain", e.what()};
      } catch (const ResourceError& e) {
        errs[i] = EntryError{todo[i], "resource", e.what()};
      } catch (...) {
        fatal[i] = std::current_exception();
      }
    }
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(todo.size())));
  if (nt == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& f : fatal)
    if (f) std::rethrow_exception(f);

  SuiteResult r;
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (out[i]) r.reports.push_back(std::move(*out[i]));
    if (errs[i]) r.errors.push_back(std::move(*errs[i]));
  }
  return r;
}

SmallLReport smallL_construction(const FiniteSet& a) {
  const std::uint64_t n = a.size();
  if (n < 2) throw DomainError("smallL needs |A| >= 2");
  require_multiplicative(a, "A");
  Context c(a);
  SmallLReport r;
  r.l = c.l();
  r.energy_mul = c.e_mul();
  r.threshold = sz(r.energy_mul) / (Scalar(2) * sz(n).pow(2));
  const auto slices = dyadic_slices(a);
  const SpectrumSlice* best = nullptr;
  Scalar best_mass;
  for (const auto& s : slices) {
    const Scalar mass = sz(s.lambdas.size()) * s.tau * s.tau;
    r.slices.push_back({s.tau, s.lambdas.size(), mass});
    r.total_mass += mass;
    if (s.tau >= r.threshold && (!best || mass > best_mass)) {
      best = &s;
      best_mass = mass;
    }
  }
  r.total_mass_ok = r.total_mass * Scalar(4) >= sz(r.energy_mul);
  if (!best) return r;
  r.selected_dominates = best_mass * Scalar(static_cast<long>(ceil_log2(n)) + 1) >= r.total_mass;

  const Scalar tau = best->tau;
  struct Fiber {
    Scalar lambda;
    FiniteSet set;
    std::uint64_t e_add;
  };
  std::vector<Fiber> fibers;
  for (const auto& lam : best->lambdas) {
    auto f = lambda_set(a, lam);
    fibers.push_back({lam, *f, additive_energy(*f)});
  }
  std::sort(fibers.begin(), fibers.end(), [](const Fiber& x, const Fiber& y) {
    return x.e_add != y.e_add ? x.e_add < y.e_add : x.lambda < y.lambda;
  });
  const std::size_t half = fibers.size() / 2;
  std::vector<Scalar> low, high;
  for (std::size_t i = 0; i < fibers.size(); ++i) (i < half ? low : high).push_back(fibers[i].lambda);
  std::sort(low.begin(), low.end());
  std::sort(high.begin(), high.end());
  const FiniteSet s_prime = FiniteSet::from_sorted(high);
  const FiniteSet s_dprime = low.empty() ? s_prime : FiniteSet::from_sorted(low);

  std::optional<Scalar> min_e, min_q, min_p;
  for (const auto& f : fibers) {
    if (!s_prime.contains(f.lambda)) continue;
    const Scalar e = sz(f.e_add) / tau.pow(3);
    const Scalar qq = sz(quotientset(f.set, f.set).size()) / tau.pow(2);
    const Scalar pp = sz(productset(f.set, f.set).size()) / tau.pow(2);
    if (!min_e || e < *min_e) min_e = e;
    if (!min_q || qq < *min_q) min_q = qq;
    if (!min_p || pp < *min_p) min_p = pp;
  }
  r.selection = SmallLSelection{
      .tau = tau,
      .s_tau = best->lambdas,
      .s_prime = s_prime,
      .s_doubleprime = s_dprime,
      .min_additive_energy_ratio = *min_e,
      .min_quotient_ratio = *min_q,
      .min_product_ratio = *min_p,
      .additive_vs_scale = *min_e * r.l.pow(4),
      .quotient_vs_scale = *min_q * r.l.pow(16),
      .product_vs_scale = *min_p * r.l.pow(16),
  };
  return r;
}

std::vector<KatzKoesterViolation> katz_koester_check(const FiniteSet& a) {
  require_multiplicative(a, "A");
  const FiniteSet quot = quotientset(a, a);
  const FiniteSet prod = productset(a, a);
  std::vector<KatzKoesterViolation> out;
  for (const auto& lam : quot) {
    const auto fiber = lambda_set(a, lam);
    if (!fiber) continue;
    // x ∈ λΠ  ⇔  x/λ ∈ Π
    for (const auto& x : quotientset(*fiber, *fiber)) {
      if (!quot.contains(x) || !quot.contains(x / lam)) out.push_back({lam, x, false});
    }
    for (const auto& x : productset(*fiber, *fiber)) {
      if (!prod.contains(x) || !prod.contains(x / lam)) out.push_back({lam, x, true});
    }
  }
  return out;
}

SolPlusTrace solplus_trace(const FiniteSet& a, std::size_t max_bsg_size) {
  const auto small = smallL_construction(a);
  if (!small.selection) throw DomainError("no slice meets the energy threshold");
  const auto& sel = *small.selection;
  const Scalar n = sz(a.size());
  const Scalar quot = sz(quotientset(a, a).size());
  SolPlusTrace t{
      .l = small.l,
      .l_prime = std::max(Scalar(1), quot.pow(3) / n.pow(4)),
      .eta = small.l.pow(-64) * sz(small.energy_mul) * sel.tau.pow(6) * quot.pow(-5),
      .tau = sel.tau,
      .s_prime = sel.s_prime,
      .s_doubleprime = sel.s_prime,
      .bsg_objective = std::nullopt,
      .a_witness = a.min(),
      .a_prime = a,
  };
  if (sel.s_prime.size() > 1) {
    if (sel.s_prime.size() > max_bsg_size)
      throw ResourceError("|S'| = " + std::to_string(sel.s_prime.size()) + " exceeds the subset oracle limit " +
                          std::to_string(max_bsg_size));
    auto bsg = bsg_subset_oracle(sel.s_prime, max_bsg_size);
    t.s_doubleprime = bsg.subset;
    t.bsg_objective = bsg.objective;
  }
  std::size_t best = 0;
  for (const auto& x : a) {
    std::vector<Scalar> hit;
    for (const auto& lam : t.s_doubleprime) {
      const Scalar y = x * lam;
      if (a.contains(y)) hit.push_back(y);
    }
    if (hit.size() > best) {
      best = hit.size();
      t.a_witness = x;
      t.a_prime = make_set(std::move(hit));
    }
  }
  return t;
}

}  // namespace sumprod

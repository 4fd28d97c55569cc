#include "sumprod/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sumprod/counting.hpp"
#include "sumprod/errors.hpp"
#include "sumprod/explore.hpp"
#include "sumprod/json_io.hpp"
#include "sumprod/oracle.hpp"
#include "sumprod/stats.hpp"
#include "sumprod/verify.hpp"

namespace sumprod::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kTriplesBruteMax = 12;

std::string show(const PowerProduct& p) {
  if (auto r = p.as_rational()) return display(*r);
  return p.decimal() + " (" + p.str() + ")";
}

json set_json(const FiniteSet& s) {
  json a = json::array();
  for (const auto& x : s) a.push_back(x.str());
  return a;
}

struct Options {
  std::string input;
  bool as_json = false;
  unsigned threads = 1;
  std::string ids;
  std::string ineq;
  std::size_t n = 0;
  std::string mode = "exhaustive";
  std::uint64_t budget = 100000;
  std::optional<std::uint64_t> seed;
  std::string ground;
  std::string corpus;
  std::size_t restarts = 1;
  bool maximize = false;
  bool rational_moves = false;
  std::string op;
  std::size_t samples = 200;
};

int cmd_stats(const Options& o, std::ostream& out, std::ostream& err) {
  const FiniteSet a = load_set_file(o.input, err);
  const auto sum = sumset(a, a).size();
  const auto prod = productset(a, a).size();
  const bool mult = !a.contains_zero();
  const bool has_quot = mult || a.size() > 1;
  const std::size_t quot = has_quot ? quotientset(a, a).size() : 0;
  const auto e_add = additive_energy(a);
  std::optional<std::uint64_t> e_mul;
  std::vector<SpectrumSlice> slices;
  std::optional<DoublingProfile> prof;
  if (mult) {
    e_mul = multiplicative_energy(a);
    slices = dyadic_slices(a);
    prof = d_upper(a);
  } else {
    err << "note: A contains 0; multiplicative energy, spectrum and d_upper skipped\n";
  }
  std::size_t ratios = 0;
  for (const auto& s : slices) ratios += s.lambdas.size();

  if (o.as_json) {
    json j{{"size", a.size()},
           {"sumset", sum},
           {"productset", prod},
           {"quotientset", has_quot ? json(quot) : json()},
           {"additive_energy", e_add},
           {"multiplicative_energy", e_mul ? json(*e_mul) : json()}};
    json sl = json::array();
    for (const auto& s : slices) sl.push_back({{"tau", s.tau.str()}, {"count", s.lambdas.size()}});
    j["spectrum"] = mult ? json{{"ratios", ratios}, {"slices", sl}} : json();
    j["d_upper"] = prof ? json{{"k_mul", prof->k_mul.str()},
                               {"d_upper", prof->d_upper.str()},
                               {"witness", set_json(prof->witness)},
                               {"candidates_tried", prof->candidates_tried}}
                        : json();
    out << j.dump() << '\n';
    return kOk;
  }
  out << "|A|     " << a.size() << '\n'
      << "|A+A|   " << sum << '\n'
      << "|AA|    " << prod << '\n'
      << "|A/A|   " << (has_quot ? std::to_string(quot) : "n/a") << '\n'
      << "E+(A)   " << e_add << '\n'
      << "E*(A)   " << (e_mul ? std::to_string(*e_mul) : "n/a") << '\n';
  if (mult) {
    out << "spectrum: " << ratios << " ratios in " << slices.size() << " dyadic slices\n";
    for (const auto& s : slices) out << "  tau " << display(s.tau) << ": " << s.lambdas.size() << " ratios\n";
    out << "K       " << display(prof->k_mul) << '\n'
        << "d_upper " << display(prof->d_upper) << " witness " << prof->witness.str() << " of "
        << prof->candidates_tried << " candidates\n";
  }
  return kOk;
}

std::vector<std::string> split_ids(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    part.erase(0, part.find_first_not_of(" \t"));
    part.erase(part.find_last_not_of(" \t") + 1);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

bool is_explicit(const std::string& id) {
  for (const auto& e : registry())
    if (e.id == id) return e.explicit_constant;
  return false;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const FiniteSet a = load_set_file(o.input, err);
  std::optional<std::vector<std::string>> ids;
  if (!o.ids.empty()) ids = split_ids(o.ids);
  const auto suite = verify_suite(a, ids, {}, o.threads);
  bool ok = suite.all_explicit_pass();
  bool resource = false;
  for (const auto& e : suite.errors) {
    err << e.id << ": " << e.kind << " error: " << e.message << '\n';
    if (e.kind == "resource" && is_explicit(e.id)) resource = true;
  }

  // The full run also covers the chain inequalities and the fiber inclusions.
  std::optional<ErChain> chain;
  std::optional<std::size_t> kk;
  if (!ids) {
    if (a.size() >= 2 && a.all_positive()) {
      chain = er_chain(a);
      for (const auto& [name, pass] : chain->checks) ok = ok && pass;
    } else {
      err << "note: chain checks need |A| >= 2 and positive elements; skipped\n";
    }
    if (!a.contains_zero()) {
      kk = katz_koester_check(a).size();
      ok = ok && *kk == 0;
    }
  }

  if (o.as_json) {
    json j = to_json(suite);
    if (chain) {
      json checks = json::object();
      for (const auto& [name, pass] : chain->checks) checks[name] = pass;
      json ratios = json::object();
      for (const auto& [name, r] : chain->ratios) ratios[name] = r.str();
      j["er_chain"] = {{"checks", checks}, {"ratios", ratios}};
    }
    if (kk) j["katz_koester_violations"] = *kk;
    out << j.dump() << '\n';
  } else {
    for (const auto& r : suite.reports) {
      out << r.id << ": lhs " << show(r.lhs) << ", rhs " << show(r.rhs) << ", ratio " << show(r.ratio);
      if (r.pass) out << (*r.pass ? "  PASS" : "  FAIL");
      out << "\n  " << r.inputs << '\n';
    }
    if (chain) {
      for (const auto& [name, pass] : chain->checks) out << "ER-CHAIN " << name << (pass ? "  PASS" : "  FAIL") << '\n';
      for (const auto& [name, r] : chain->ratios) out << "ER-CHAIN " << name << " = " << show(r) << '\n';
    }
    if (kk) out << "KATZ-KOESTER violations: " << *kk << (*kk == 0 ? "  PASS" : "  FAIL") << '\n';
  }
  if (!ok) return kExplicitFailure;
  return resource ? kResource : kOk;
}

int cmd_explore(const Options& o, std::ostream& out, std::ostream& err) {
  SearchConfig cfg;
  if (o.mode == "exhaustive") {
    cfg.mode = SearchMode::exhaustive;
  } else if (o.mode == "hillclimb") {
    cfg.mode = SearchMode::hillclimb;
    if (!o.seed) {
      err << "error: --seed is required for hillclimb\n";
      return kUsage;
    }
  } else {
    err << "error: --mode must be exhaustive or hillclimb\n";
    return kUsage;
  }
  if (!o.ground.empty()) {
    cfg.ground = load_set_file(o.ground, err);
  } else {
    std::vector<Scalar> g;
    for (std::size_t i = 1; i <= std::max<std::size_t>(12, 2 * o.n); ++i) g.push_back(Scalar(static_cast<unsigned long>(i)));
    cfg.ground = make_set(std::move(g));
  }
  cfg.budget = o.budget;
  cfg.seed = o.seed.value_or(0);
  cfg.restarts = o.restarts;
  cfg.maximize = o.maximize;
  cfg.mutation.rational_moves = o.rational_moves;
  cfg.threads = o.threads;
  const auto res = search_extremal(o.ineq, o.n, cfg);
  if (res.truncated) err << "note: budget exhausted after " << res.evaluated << " subsets; result is best so far\n";

  std::string path = o.corpus;
  if (path.empty()) {
    const char* env = std::getenv("SUMPROD_CORPUS");
    path = env && *env ? env : "sumprod_corpus.jsonl";
  }
  corpus_store(res.record, path);

  if (o.as_json) {
    json j = to_json(res.record);
    j["truncated"] = res.truncated;
    j["evaluated"] = res.evaluated;
    out << j.dump() << '\n';
  } else {
    out << res.record.inequality_id << " best set " << res.record.set.str() << '\n'
        << "ratio " << show(res.record.ratio) << '\n'
        << "evaluated " << res.evaluated << (res.truncated ? " (truncated)" : "") << ", stored in " << path << '\n';
  }
  return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  const FiniteSet a = load_set_file(o.input, err);
  std::vector<std::string> mismatches;
  std::size_t checks = 0;
  auto expect = [&](bool same, const std::string& what) {
    ++checks;
    if (!same) mismatches.push_back(what);
  };
  if (o.op == "energy-brute") {
    expect(additive_energy(a) == oracle::energy(a, a, EnergyKind::additive), "additive energy");
    if (!a.contains_zero()) {
      expect(multiplicative_energy(a) == oracle::energy(a, a, EnergyKind::multiplicative), "multiplicative energy");
      std::map<Scalar, std::uint64_t> spec;
      for (const auto& e : spectrum(a)) spec[e.lambda] = e.size;
      expect(spec == oracle::spectrum(a), "spectrum");
    }
    for (Op op : {Op::add, Op::sub, Op::mul, Op::div}) {
      if (op == Op::div && a.size() == 1 && a.contains_zero()) continue;
      const auto fast = rep_counts(a, a, op);
      const std::map<Scalar, std::uint64_t> got(fast.entries().begin(), fast.entries().end());
      expect(got == oracle::rep_counts(a, a, op), "representation counts (" + std::string(to_string(op)) + ")");
    }
  } else if (o.op == "triples-brute") {
    if (a.size() > kTriplesBruteMax)
      throw ResourceError("triples-brute handles |A| <= " + std::to_string(kTriplesBruteMax));
    const PointSet grid = PointSet::cartesian(a, a);
    const BigInt brute = oracle::collinear_triples(grid);
    expect(collinear_triples(grid) == brute, "collinear triples (line grouping)");
    expect(product_collinear_triples(a, a) == brute, "collinear triples (grid formula)");
  } else if (o.op == "sigma-max-sample") {
    const auto best = sigma_max(a, a, a);
    const auto sample = oracle::sigma_max_sample(a, a, a, o.seed.value_or(1), o.samples);
    expect(sample.count <= best.count, "sampled coefficients beat sigma_max");
    expect(oracle::sigma_count(best.alpha1, a, best.alpha2, a, best.alpha3, a) == best.count, "sigma at the maximizer");
  } else {
    err << "error: unknown --op '" << o.op << "'\n";
    return kUsage;
  }
  for (const auto& m : mismatches) err << "mismatch: " << m << '\n';
  if (o.as_json) {
    out << json{{"op", o.op}, {"checks", checks}, {"mismatches", mismatches}}.dump() << '\n';
  } else {
    out << o.op << ": " << checks - mismatches.size() << "/" << checks << " checks identical\n";
  }
  return mismatches.empty() ? kOk : kOracleMismatch;
}

}  // namespace

FiniteSet load_set_file(const std::string& path, std::ostream& diag) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  auto parsed = parse_set_text(in);
  for (const auto& w : parsed.warnings) diag << path << ":" << w.line << ": warning: " << w.message << '\n';
  return std::move(parsed.set);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact sum-product statistics and inequality checks", "sumprod"};
  app.require_subcommand(1);
  Options o;

  auto* stats = app.add_subcommand("stats", "set statistics");
  stats->add_option("--input", o.input, "set file")->required();
  stats->add_flag("--json", o.as_json);

  auto* verify = app.add_subcommand("verify", "evaluate the inequality registry");
  verify->add_option("--input", o.input, "set file")->required();
  verify->add_option("--ids", o.ids, "comma separated registry ids");
  verify->add_flag("--json", o.as_json);
  verify->add_option("--threads", o.threads)->check(CLI::PositiveNumber);

  auto* explore = app.add_subcommand("explore", "extremal search over a registry ratio");
  explore->add_option("--ineq", o.ineq, "registry id")->required();
  explore->add_option("--n", o.n, "set size")->required();
  explore->add_option("--mode", o.mode, "exhaustive or hillclimb");
  explore->add_option("--budget", o.budget, "subsets or iterations per restart");
  explore->add_option("--seed", o.seed);
  explore->add_option("--ground", o.ground, "ground set file (default 1..max(12, 2n))");
  explore->add_option("--corpus", o.corpus, "corpus path (default $SUMPROD_CORPUS)");
  explore->add_option("--restarts", o.restarts)->check(CLI::PositiveNumber);
  explore->add_flag("--maximize", o.maximize);
  explore->add_flag("--rational-moves", o.rational_moves);
  explore->add_flag("--json", o.as_json);
  explore->add_option("--threads", o.threads)->check(CLI::PositiveNumber);

  auto* orc = app.add_subcommand("oracle", "compare fast paths with brute force");
  orc->add_option("--input", o.input, "set file")->required();
  orc->add_option("--op", o.op, "energy-brute, triples-brute or sigma-max-sample")->required();
  orc->add_option("--seed", o.seed);
  orc->add_option("--samples", o.samples);
  orc->add_flag("--json", o.as_json);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (stats->parsed()) return cmd_stats(o, out, err);
    if (verify->parsed()) return cmd_verify(o, out, err);
    if (explore->parsed()) return cmd_explore(o, out, err);
    return cmd_oracle(o, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kParse;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kResource;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace sumprod::cli

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sumprod/cli.hpp"
#include "sumprod/errors.hpp"

using namespace sumprod;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto p = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("load_set_file") {
  std::ostringstream diag;
  CHECK(cli::load_set_file(write_temp("cli_a.txt", "1\n2\n3\n"), diag) == FiniteSet::of({1, 2, 3}));
  const auto half = cli::load_set_file(write_temp("cli_b.txt", "1/2\n2/4\n"), diag);
  CHECK(half.size() == 1);
  CHECK(diag.str().find(":2: warning") != std::string::npos);
  try {
    cli::load_set_file(write_temp("cli_c.txt", "abc"), diag);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("stats") {
  const auto three = write_temp("cli_three.txt", "1\n2\n3\n");
  auto r = run({"stats", "--input", three, "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["sumset"] == 5);
  CHECK(j["productset"] == 6);
  CHECK(j["quotientset"] == 7);
  CHECK(j["additive_energy"] == 19);
  CHECK(j["multiplicative_energy"] == 15);
  r = run({"stats", "--input", three});
  CHECK(r.out.find("E*(A)   15") != std::string::npos);
  CHECK(run({"stats", "--input", write_temp("cli_empty.txt", "")}).code == 2);
  CHECK(run({"stats", "--input", write_temp("cli_bad.txt", "1\nx\n")}).code == 2);
  CHECK(run({"stats", "--input", "/nonexistent/set.txt"}).code == 2);
  CHECK(run({"stats"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify") {
  const auto three = write_temp("cli_three.txt", "1\n2\n3\n");
  auto r = run({"verify", "--input", three, "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["reports"].size() >= 14);
  CHECK(j["all_explicit_pass"] == true);
  CHECK(j["katz_koester_violations"] == 0);
  CHECK(j.dump() + "\n" == r.out);

  r = run({"verify", "--input", three, "--ids", "SOLY-PROD, LEVELSET", "--threads", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("SOLY-PROD: lhs 150, rhs 10.125 (81/8)") != std::string::npos);
  CHECK(r.out.find("LEVELSET") != std::string::npos);

  r = run({"verify", "--input", three, "--ids", "NOPE"});
  CHECK(r.code == 0);
  CHECK(r.err.find("unknown inequality id") != std::string::npos);
}

TEST_CASE("oracle") {
  const auto small = write_temp("cli_small.txt", "1\n2\n3\n5\n8\n13\n-4\n1/2\n");
  CHECK(run({"oracle", "--input", small, "--op", "energy-brute"}).code == 0);
  CHECK(run({"oracle", "--input", small, "--op", "triples-brute"}).code == 0);
  CHECK(run({"oracle", "--input", small, "--op", "sigma-max-sample", "--samples", "50"}).code == 0);
  CHECK(run({"oracle", "--input", small, "--op", "nope"}).code == 1);
  std::string big;
  for (int i = 1; i <= 13; ++i) big += std::to_string(i) + "\n";
  CHECK(run({"oracle", "--input", write_temp("cli_big.txt", big), "--op", "triples-brute"}).code == 5);
}

TEST_CASE("explore") {
  const auto corpus = (std::filesystem::temp_directory_path() / "cli_corpus.jsonl").string();
  std::filesystem::remove(corpus);
  auto r = run({"explore", "--ineq", "COR-SOL", "--n", "3", "--mode", "exhaustive", "--budget", "1000", "--corpus", corpus,
                "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["inequality_id"] == "COR-SOL");
  CHECK(j["evaluated"] == 220);
  CHECK(run({"explore", "--ineq", "COR-SOL", "--n", "3", "--mode", "hillclimb", "--corpus", corpus}).code == 1);
  CHECK(run({"explore", "--ineq", "COR-SOL", "--n", "3", "--mode", "hillclimb", "--budget", "5", "--seed", "1", "--corpus",
             corpus})
            .code == 0);
  std::ifstream in(corpus);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 2);

  const auto env_corpus = (std::filesystem::temp_directory_path() / "cli_env_corpus.jsonl").string();
  std::filesystem::remove(env_corpus);
  setenv("SUMPROD_CORPUS", env_corpus.c_str(), 1);
  CHECK(run({"explore", "--ineq", "SOLY-PROD", "--n", "2", "--budget", "100"}).code == 0);
  unsetenv("SUMPROD_CORPUS");
  CHECK(std::filesystem::exists(env_corpus));
  CHECK(run({"explore", "--ineq", "SOLY-PROD", "--n", "2", "--mode", "sideways", "--corpus", corpus}).code == 1);
}

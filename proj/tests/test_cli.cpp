// Black-box tests of the command-line tool; every check runs the real binary
// in a subprocess.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "testutil.hpp"

using testutil::run;
using testutil::slurp;
using testutil::spit;
using testutil::temp_dir;

namespace {

std::string cli() {
  const std::string path = testutil::cli_path();
  REQUIRE(!path.empty());
  // Scrub any ambient seed so defaults are actually exercised.
  return "env -u PPREG_SEED \"" + path + "\"";
}

std::string cli_with_env(const std::string& env) {
  const std::string path = testutil::cli_path();
  REQUIRE(!path.empty());
  return "env " + env + " \"" + path + "\"";
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

std::vector<std::string> cells_of(const std::string& line) {
  std::vector<std::string> cells;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  cells.push_back(current);
  return cells;
}

std::string data_file(const std::string& name, const std::string& content) {
  const std::string path = temp_dir() + "/" + name;
  spit(path, content);
  return path;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run(cli() + " --help").status == 0);
  CHECK(run(cli() + " fit --help").status == 0);
  CHECK(run(cli()).status == 2);
  CHECK(run(cli() + " fit").status == 2);
  CHECK(run(cli() + " frobnicate").status == 2);
  CHECK(run(cli() + " weights --dist weibull --n 5 --bogus").status == 2);
  CHECK(run(cli() + " weights --dist nonesuch --n 5").status == 2);
}

TEST_CASE("fit emits a json record") {
  const std::string input =
      data_file("ll.txt", "0.4\n1.2\n0.9\n2.5\n0.7\n1.9\n3.1\n1.1\n");
  const auto r =
      run(cli() + " fit --dist loglogistic --input " + input);
  CHECK(r.status == 0);
  CHECK(r.out.find("\"dist\": \"loglogistic\"") != std::string::npos);
  CHECK(r.out.find("\"method\": \"wls-exact\"") != std::string::npos);
  CHECK(r.out.find("\"log_likelihood\": null") != std::string::npos);
  CHECK(r.err.empty());

  const auto ml =
      run(cli() + " fit --dist loglogistic --method ml --input " + input);
  CHECK(ml.status == 0);
  CHECK(ml.out.find("\"method\": \"ml\"") != std::string::npos);
  CHECK(ml.out.find("\"log_likelihood\": null") == std::string::npos);
  CHECK(ml.err.empty());

  const auto mc = run(cli() + " fit --dist loglogistic --method wls-mc --input " +
                      input + " --mc-m 400");
  CHECK(mc.status == 0);
  CHECK(mc.err.find("# seed: 12345") != std::string::npos);

  const auto gls = run(cli() + " fit --dist loglogistic --method gls-full --input " +
                       input + " --mc-m 400 --seed 3");
  CHECK(gls.status == 0);
  CHECK(gls.err.find("# seed: 3") != std::string::npos);
  CHECK(gls.out.find("\"method\": \"gls-full\"") != std::string::npos);
}

TEST_CASE("data errors carry the offending row") {
  const std::string bad =
      data_file("bad.txt", "1.0\n2.0\n-0.5\n3.0\n");
  const auto r = run(cli() + " fit --dist weibull --input " + bad);
  CHECK(r.status == 1);
  CHECK(r.err.find("row 3") != std::string::npos);
  CHECK(r.err.find("requires x > 0") != std::string::npos);

  // The same file is fine for the logistic family.
  const auto ok = run(cli() + " fit --dist logistic --input " + bad);
  CHECK(ok.status == 0);

  const std::string text = data_file("text.txt", "x\nabc\n1.5\n");
  const auto t = run(cli() + " fit --dist weibull --input " + text);
  CHECK(t.status == 1);
  CHECK(t.err.find("row 2") != std::string::npos);
  CHECK(t.err.find("not a number") != std::string::npos);

  const auto missing =
      run(cli() + " fit --dist weibull --input " + temp_dir() + "/nofile");
  CHECK(missing.status == 1);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  const std::string empty = data_file("empty.txt", "\n\n");
  const auto e = run(cli() + " fit --dist weibull --input " + empty);
  CHECK(e.status == 1);
}

TEST_CASE("weights table") {
  const auto r = run(cli() + " weights --dist weibull --n 10");
  CHECK(r.status == 0);
  CHECK(r.err.empty());
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 11);
  CHECK(lines[0] == "rank,mean,variance,weight");
  const auto first = cells_of(lines[1]);
  REQUIRE(first.size() == 4);
  CHECK(first[0] == "1");
  // Smallest-rank variance is pi^2/6 for every n in this family.
  CHECK(std::fabs(std::stod(first[2]) - 1.6449340668482264) < 1e-12);

  const auto a = run(cli() + " weights --dist loglogistic --n 8 --method mc "
                             "--mc-m 500 --seed 7");
  const auto b = run(cli() + " weights --dist loglogistic --n 8 --method mc "
                             "--mc-m 500 --seed 7");
  CHECK(a.status == 0);
  CHECK(a.err.find("# seed: 7") != std::string::npos);
  CHECK(a.out == b.out);
}

TEST_CASE("covariance matrix") {
  const auto r = run(cli() + " cov --dist loglogistic --n 5 --m 300 --seed 4");
  CHECK(r.status == 0);
  CHECK(r.err.find("# seed: 4") != std::string::npos);
  CHECK(r.err.find("# log_det: ") != std::string::npos);
  CHECK(r.err.find("# det: ") != std::string::npos);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(cells_of(lines[0]).size() == 5);
}

TEST_CASE("sampling and seed precedence") {
  const auto plain = run(cli() + " sample --dist weibull --n 6");
  CHECK(plain.status == 0);
  CHECK(plain.err.find("# seed: 12345") != std::string::npos);
  CHECK(lines_of(plain.out).size() == 6);

  const auto csv = run(cli() + " sample --dist weibull --n 6 --format csv");
  CHECK(lines_of(csv.out).size() == 7);
  CHECK(lines_of(csv.out)[0] == "x");
  CHECK(csv.out.substr(2) == plain.out);

  const auto rerun = run(cli() + " sample --dist weibull --n 6");
  CHECK(rerun.out == plain.out);

  const auto env = run(cli_with_env("PPREG_SEED=999") +
                       " sample --dist weibull --n 6");
  CHECK(env.status == 0);
  CHECK(env.err.find("# seed: 999") != std::string::npos);
  CHECK(env.out != plain.out);

  const auto flag = run(cli_with_env("PPREG_SEED=999") +
                        " sample --dist weibull --n 6 --seed 5");
  CHECK(flag.err.find("# seed: 5") != std::string::npos);

  const auto garbage = run(cli_with_env("PPREG_SEED=banana") +
                           " sample --dist weibull --n 6");
  CHECK(garbage.status == 2);
  CHECK(garbage.err.find("PPREG_SEED") != std::string::npos);

  const auto domain = run(cli() + " sample --dist weibull --n 6 --alpha -1");
  CHECK(domain.status == 1);
}

TEST_CASE("simstudy csv") {
  const auto r = run(cli() + " simstudy --dist loglogistic --beta 1 --n 5 "
                             "--reps 20 --method wls-exact --seed 2");
  CHECK(r.status == 0);
  CHECK(r.err.find("# seed: 2") != std::string::npos);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "dist,n,beta_true,method,parameter,bias,mse,failures");
  CHECK(lines[1].rfind("loglogistic,5,1,wls-exact,alpha,", 0) == 0);
  CHECK(lines[2].rfind("loglogistic,5,1,wls-exact,beta,", 0) == 0);

  CHECK(run(cli() + " simstudy --dist logistic --n 5").status == 2);
}

TEST_CASE("figure data csv") {
  const auto r = run(cli() + " figure-data --dist weibull --n 6 --m 300 --seed 8");
  CHECK(r.status == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "rank,exact,mc,asymptotic");
}

TEST_CASE("output flag writes a file instead of stdout") {
  const std::string path = temp_dir() + "/weights.csv";
  const auto r =
      run(cli() + " weights --dist logistic --n 4 --output " + path);
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  const std::string content = slurp(path);
  CHECK(content.rfind("rank,mean,variance,weight\n", 0) == 0);
  CHECK(lines_of(content).size() == 5);
}

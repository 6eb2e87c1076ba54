#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "jetpot/cli.hpp"

using namespace jetpot;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("matrix and jet parsing") {
  CHECK(parse_matrix("I", 2).isApprox(Mat::Identity(2, 2)));
  const Mat D = parse_matrix("diag(1, 2, 3)");
  CHECK(D(2, 2) == 3.0);
  CHECK(parse_matrix("[[1,0],[0,-3]]")(1, 1) == -3.0);
  const Jet J = parse_jet(R"js({"r": 1.5, "p": [0, 1], "A": "diag(2,5)"})js");
  CHECK(J.r == 1.5);
  CHECK(J.A(1, 1) == 5.0);
  const Jet J0 = parse_jet_shorthand("-1,0,I", 3);
  CHECK(J0.r == -1.0);
  CHECK(J0.p.norm() == 0.0);
  CHECK(J0.A.isApprox(Mat::Identity(3, 3)));
  const Jet Jh = parse_jet_shorthand("0,1,2,0.5I", 2);
  CHECK(Jh.p(0) == 1.0);
  CHECK(Jh.A(0, 0) == 0.5);
}

TEST_CASE("ops listing and metadata") {
  const Run ls = run({"ops", "list"});
  CHECK(ls.code == 0);
  CHECK(ls.out.find("\"det\"") != std::string::npos);
  const Run show = run({"ops", "show", "special_lagrangian", "--params", R"({"n": 2})"});
  CHECK(show.code == 0);
  CHECK(show.out.find("\"levels\"") != std::string::npos);
}

TEST_CASE("canonical evaluation round trip") {
  const Run r = run({"canonical", "--set", "P", "--J0", "0,0,I", "--jet",
                     R"({"r":0,"p":[0,0],"A":[[2,0],[0,5]]})"});
  CHECK(r.code == 0);
  const json rep = json::parse(r.out);
  CHECK(rep["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(rep.contains("t_J"));
  CHECK(rep.contains("iterations"));
  CHECK(rep.contains("residual"));
}

TEST_CASE("garding eigenvalues from the command line") {
  const Run r = run({"garding", "eigs", "--poly", "det", "--A", "[[1,0],[0,-3]]"});
  CHECK(r.code == 0);
  const json rep = json::parse(r.out);
  CHECK(rep["eigenvalues"][0].get<double>() == doctest::Approx(-3.0));
  CHECK(rep["eigenvalues"][1].get<double>() == doctest::Approx(1.0));

  const Run b = run({"garding", "branch", "--poly", "det", "--A", "diag(-1,2)", "--k", "2"});
  CHECK(b.code == 0);
  CHECK(json::parse(b.out)["margin"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("cone queries") {
  const std::string cone = R"({"variant":"fundamental","gamma":1.0,"R":1.0,"D":{"variant":"full"}})";
  const Run member = run({"cone", "--cone", cone, "--jet",
                          R"({"r":-2,"p":[1,0],"A":"2I"})", "--query", "member"});
  CHECK(member.code == 0);
  CHECK(json::parse(member.out)["result"] == true);
  const Run outside = run({"cone", "--cone", cone, "--jet",
                           R"({"r":-0.5,"p":[1,0],"A":"I"})", "--query", "member"});
  CHECK(json::parse(outside.out)["result"] == false);
}

TEST_CASE("scenario subcommand writes reports and csv") {
  const std::string out_path = "/tmp/jetpot_test_report.json";
  const std::string csv_path = "/tmp/jetpot_test_report.csv";
  std::remove(out_path.c_str());
  std::remove(csv_path.c_str());
  const Run r = run({"--out", out_path, "--csv", csv_path, "scenario", "zmp-failure", "--R",
                     "1", "--Rprime", "1.5", "--n", "2", "--h", "0.02"});
  CHECK(r.code == 0);
  std::ifstream jf(out_path);
  REQUIRE(jf.good());
  json rep;
  jf >> rep;
  CHECK(rep["pass"] == true);
  CHECK(rep["scenario"] == "zmp-failure-large-ball");
  CHECK(rep.contains("seed"));
  std::ifstream cf(csv_path);
  REQUIRE(cf.good());
  std::string header;
  std::getline(cf, header);
  CHECK(header == "x0,x1,margin,verdict");
}

TEST_CASE("checks drive exit codes") {
  const Run good = run({"check", "compatibility", "--op", "det", "--params", R"({"n":2})",
                        "--samples", "800"});
  CHECK(good.code == 0);
  const Run dual = run({"check", "duality", "--n", "2", "--k", "1", "--R", "1", "--samples",
                        "200"});
  CHECK(dual.code == 0);
  CHECK(json::parse(dual.out)["reflection_index_holds"] == true);
}

TEST_CASE("usage and error paths") {
  CHECK(run({"ops", "show", "nosuch"}).code == 2);
  CHECK(run({"canonical", "--jet", "{broken"}).code == 2);
  CHECK(run({"garding", "eigs", "--poly", "det", "--A", "I"}).code == 2);  // no dimension
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("determinism: identical invocations emit identical bytes") {
  const std::vector<std::string> args = {"--seed", "7", "scenario", "subaffine-plus"};
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const json rep = json::parse(a.out);
  CHECK(rep["seed"] == 7);
}

TEST_CASE("environment seed is the default") {
  setenv("JETPOT_SEED", "99", 1);
  const Run r = run({"scenario", "subaffine-plus"});
  unsetenv("JETPOT_SEED");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["seed"] == 99);
}

TEST_CASE("config file mirrors flags") {
  const std::string path = "/tmp/jetpot_test_config.ini";
  {
    std::ofstream f(path);
    f << "seed=123\n";
  }
  const Run r = run({"--config", path, "scenario", "subaffine-plus"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["seed"] == 123);
}

TEST_CASE("dimension mismatches and missing closed forms exit as usage errors") {
  const std::string cone3 =
      R"({"variant":"fundamental","gamma":0.0,"R":"inf","D":{"variant":"half_space","axis":[0,0,1]}})";
  CHECK(run({"cone", "--cone", cone3, "--jet", R"({"r":0,"p":[1,0],"A":"I"})",
             "--query", "member"}).code == 2);
  const std::string enlarged = R"({"variant":"geo_mean_R","R":1.0})";
  CHECK(run({"cone", "--cone", enlarged, "--jet", R"({"r":0,"p":[0,0],"A":"I"})",
             "--query", "polar"}).code == 2);
}

TEST_CASE("global flags are accepted after the subcommand") {
  const std::string out_path = "/tmp/jetpot_trailing_out.json";
  std::remove(out_path.c_str());
  const Run r = run({"scenario", "subaffine-plus", "--seed", "5", "--out", out_path});
  CHECK(r.code == 0);
  std::ifstream f(out_path);
  REQUIRE(f.good());
  json rep;
  f >> rep;
  CHECK(rep["seed"] == 5);
}

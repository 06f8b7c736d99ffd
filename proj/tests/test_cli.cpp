#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "skewlab/cli.hpp"
#include "skewlab/matrix_json.hpp"
#include "skewlab/quantities.hpp"
#include "support.hpp"

using namespace skewlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "skewlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fx_file(const std::string& name, const std::string& key) {
  return (testing::data_dir() / "fixtures" / name / (key + ".json")).string();
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "skewlab_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("compute on fixture files") {
  const auto r = run_cli({"compute", "--rho", fx_file("fx_remark22", "rho"), "--obs",
                          "H=" + fx_file("fx_remark22", "H"), "--alpha", "0.1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto rep = j["reports"]["H"];
  CHECK(std::abs(rep["U_alpha"].get<double>() - rep["I"].get<double>() + 0.14736) <= 5e-4);
  CHECK_FALSE(j.contains("bounds"));

  const auto pair = run_cli({"compute", "--rho", fx_file("fx_counterexample15", "rho"), "--obs",
                             "X=" + fx_file("fx_counterexample15", "X"), "--obs",
                             "Y=" + fx_file("fx_counterexample15", "Y"), "--alpha", "0.5"});
  REQUIRE(pair.code == 0);
  CHECK(nlohmann::json::parse(pair.out)["bounds"]["B_alpha"].get<double>() ==
        doctest::Approx(0.25));
}

TEST_CASE("compute output round-trips") {
  const auto r = run_cli({"compute", "--rho", fx_file("fx_final_b", "rho"), "--obs",
                          "H=" + fx_file("fx_final_b", "H"), "--alpha", "0.2"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto rep = quantity_report_from_json(j["reports"]["H"]);
  const auto fx = fixture("fx_final_b");
  const auto direct = quantity_report(fx.rho, fx.primary(), Alpha(0.2));
  CHECK(to_json(rep) == to_json(direct));
}

TEST_CASE("compute at alpha 0 and 1 agree on a full-rank state") {
  auto report = [](const char* a) {
    const auto r = run_cli({"compute", "--rho", fx_file("fx_final_b", "rho"), "--obs",
                            "H=" + fx_file("fx_final_b", "H"), "--alpha", a});
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out)["reports"]["H"];
  };
  const auto r0 = report("0"), r1 = report("1");
  for (const auto& [key, v] : r0.items()) {
    CHECK(v.get<double>() == doctest::Approx(r1[key].get<double>()).epsilon(1e-12));
  }
}

TEST_CASE("compute input errors exit 2 with the invariant name") {
  const auto dir = scratch_dir();
  write_matrix_file(dir / "bad_rho.json", ComplexMatrix{{1.5, 0.0}, {0.0, -0.5}});
  auto r = run_cli({"compute", "--rho", (dir / "bad_rho.json").string(), "--obs",
                    "H=" + fx_file("fx_final_b", "H"), "--alpha", "0.2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("NotPositive") != std::string::npos);

  r = run_cli({"compute", "--rho", fx_file("fx_final_b", "rho"), "--obs",
               "H=" + fx_file("fx_final_b", "H")});
  CHECK(r.code == 2);
  CHECK(r.err.find("MissingAlpha") != std::string::npos);

  r = run_cli({"compute", "--rho", fx_file("fx_final_b", "rho"), "--obs",
               "H=" + fx_file("fx_remark28ii_a", "X"), "--alpha", "0.2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("DimensionMismatch") != std::string::npos);

  r = run_cli({"compute", "--rho", fx_file("fx_final_b", "rho"), "--obs", "H", "--alpha", "0.2"});
  CHECK(r.code == 2);

  r = run_cli({"compute", "--rho", fx_file("fx_final_b", "rho"), "--obs",
               "H=" + fx_file("fx_final_b", "H"), "--alpha", "1.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("BadAlpha") != std::string::npos);

  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({}).code == 2);
}

TEST_CASE("check exit codes") {
  const auto ce = run_cli({"check", "--rho", fx_file("fx_counterexample15", "rho"), "--obs",
                           "X=" + fx_file("fx_counterexample15", "X"), "--obs",
                           "Y=" + fx_file("fx_counterexample15", "Y"), "--alpha", "0.5"});
  CHECK(ce.code == 0);
  bool refuted_violated = false;
  for (const auto& r : nlohmann::json::parse(ce.out)) {
    if (r["entry_id"] == "k_bound_refuted") refuted_violated = r["verdict"] == "violated";
  }
  CHECK(refuted_violated);

  const auto unknown = run_cli({"check", "--rho", fx_file("fx_counterexample15", "rho"), "--obs",
                                "X=" + fx_file("fx_counterexample15", "X"), "--entry", "nope"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("UnknownId") != std::string::npos);

  const auto dir = scratch_dir();
  const auto inst = sample_instance({31, 4}, {4}, true);
  write_matrix_file(dir / "rho.json", inst.rho.matrix());
  write_matrix_file(dir / "X.json", inst.x.matrix());
  write_matrix_file(dir / "Y.json", inst.y->matrix());
  const auto rnd = run_cli({"check", "--rho", (dir / "rho.json").string(), "--obs",
                            "X=" + (dir / "X.json").string(), "--obs",
                            "Y=" + (dir / "Y.json").string(), "--alpha", "0.37"});
  CHECK(rnd.code == 0);

  const auto csv = run_cli({"check", "--rho", (dir / "rho.json").string(), "--obs",
                            "X=" + (dir / "X.json").string(), "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("entry_id,status,lhs,rhs,gap,verdict,tolerance,alpha\n", 0) == 0);
}

TEST_CASE("reproduce table") {
  const auto r = run_cli({"reproduce"});
  const auto rows = nlohmann::json::parse(r.out);
  CHECK(rows.size() == 17);
  int hard_failures = 0;
  for (const auto& row : rows) {
    const bool pass = row["pass"].get<bool>();
    CHECK(pass == (std::abs(row["computed"].get<double>() - row["expected"].get<double>()) <=
                   row["tolerance"].get<double>()));
    if (!row["diagnostic"].get<bool>() && !pass) ++hard_failures;
  }
  CHECK(r.code == (hard_failures > 0 ? 1 : 0));

  const auto csv = run_cli({"reproduce", "--format", "csv"});
  CHECK(csv.out.rfind("fixture,quantity,alpha,expected,computed,tolerance,pass,diagnostic,anchor\n",
                      0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 18);
}

TEST_CASE("search exit codes and outputs") {
  const auto dir = scratch_dir();
  const auto out = (dir / "search.json").string();
  auto r = run_cli({"search", "--entry", "k_bound_refuted", "--dim", "2", "--trials", "3000",
                    "--seed", "42", "--out", out});
  CHECK(r.code == 0);
  std::ifstream f(out);
  const auto rec = nlohmann::json::parse(f);
  CHECK(rec["best_gap"].get<double>() >= 0.1);
  std::ifstream log(out + ".jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(log, line)) {
    CHECK(nlohmann::json::parse(line).contains("fingerprint"));
    ++lines;
  }
  CHECK(lines == rec["history"].size());

  r = run_cli({"search", "--entry", "theorem_w", "--dim", "2,3", "--trials", "500"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["best_gap"].get<double>() <= 1e-9);

  CHECK(run_cli({"search", "--trials", "10"}).code == 2);
  CHECK(run_cli({"search", "--entry", "theorem_w", "--dim", "0"}).code == 2);
  CHECK(run_cli({"search", "--entry", "theorem_w", "--trials", "0"}).code == 2);
  CHECK(run_cli({"search", "--entry", "nope"}).code == 2);
  CHECK(run_cli({"search", "--entry", "theorem_w", "--format", "csv"}).code == 2);
}

TEST_CASE("seed comes from the environment by default") {
  auto strip = [](const std::string& s) {
    auto j = nlohmann::json::parse(s);
    j.erase("wall_time_s");
    return j;
  };
  ::setenv("SKEWLAB_SEED", "1234", 1);
  const auto env = run_cli({"search", "--entry", "conj_k_le_v", "--dim", "3", "--trials", "200"});
  ::unsetenv("SKEWLAB_SEED");
  const auto flag = run_cli(
      {"search", "--entry", "conj_k_le_v", "--dim", "3", "--trials", "200", "--seed", "1234"});
  const auto zero = run_cli({"search", "--entry", "conj_k_le_v", "--dim", "3", "--trials", "200"});
  CHECK(strip(env.out) == strip(flag.out));
  CHECK(strip(env.out) != strip(zero.out));

  ::setenv("SKEWLAB_SEED", "abc", 1);
  const auto bad = run_cli({"search", "--entry", "conj_k_le_v", "--trials", "2"});
  ::unsetenv("SKEWLAB_SEED");
  CHECK(bad.code == 2);
}

TEST_CASE("catalog command") {
  const auto r = run_cli({"catalog"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).size() == list_catalog().size());
  const auto csv = run_cli({"catalog", "--format", "csv"});
  CHECK(csv.out.rfind("id,status,arity,needs_alpha,description\n", 0) == 0);
}

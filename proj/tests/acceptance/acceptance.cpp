// One line per criterion: "PASS <n> <name>" or "FAIL <n> <name>", with detail lines indented.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "skewlab/catalog.hpp"
#include "skewlab/cli.hpp"
#include "skewlab/error.hpp"
#include "skewlab/explorer.hpp"
#include "skewlab/matrix_json.hpp"
#include "skewlab/quantities.hpp"
#include "skewlab/sampling.hpp"

using namespace skewlab;

namespace {

const std::vector<std::size_t> kDims{2, 3, 4, 6};

struct Tally {
  bool ok = true;
  int reported = 0;
  void fail(const std::string& what) {
    ok = false;
    if (reported++ < 20) std::cout << "    " << what << "\n";
  }
  void expect(bool cond, const std::string& what) {
    if (!cond) fail(what);
  }
};

bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// ---------------------------------------------------------------------------

bool reproduction(Tally& t) {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& row : cli::reproduce_rows()) {
    const std::string label = row.fixture + " " + row.quantity +
                              (row.alpha ? " @" + num(*row.alpha) : "") + ": computed " +
                              num(row.computed) + " expected " + num(row.expected) + " tol " +
                              num(row.tolerance);
    if (row.diagnostic) {
      std::cout << "    [diagnostic " << (row.pass ? "match" : "no match") << "] " << label << "\n";
      continue;
    }
    t.expect(row.pass, label);
  }
  for (const char* name : {"fx_remark28ii_a", "fx_remark28ii_b"}) {
    const double target = name[std::string(name).size() - 1] == 'a' ? 0.348097 : 0.304377;
    bool found = false;
    for (const auto& [a, v] : alpha_scan(name, "abs_tr_m2_comm_sq", cli::kScanGrid)) {
      found = found || std::abs(v - target) <= 1e-3;
    }
    t.expect(found, std::string(name) + ": no alpha reproduces " + num(target));
  }
  const auto fx = fixture("fx_counterexample15");
  const auto r = evaluate("k_bound_refuted", fx.rho, fx.observable("X"), &fx.observable("Y"),
                          Alpha::half());
  t.expect(std::abs(r.rhs - 0.25) <= 1e-12, "counterexample rhs " + num(r.rhs));
  t.expect(r.lhs < r.rhs && r.gap >= 0.1, "counterexample gap " + num(r.gap));
  const double secs = seconds_since(start);
  t.expect(secs < 10.0, "runtime " + num(secs) + " s");
  return t.ok;
}

bool proved_suite(Tally& t) {
  std::vector<std::string> ids;
  for (const auto& e : list_catalog()) {
    if (e.status == Status::proved) ids.push_back(e.id);
  }
  const auto start = std::chrono::steady_clock::now();
  int evaluated = 0;
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const auto inst = sample_instance({2024, k}, kDims, true);
    for (const auto& id : ids) {
      const auto r = check_instance(id, inst);
      ++evaluated;
      t.expect(r.verdict != Verdict::violated,
               id + " violated on trial " + std::to_string(k) + " gap " + num(r.gap));
    }
  }
  std::cout << "    " << ids.size() << " entries, " << evaluated << " checks, "
            << num(seconds_since(start)) << " s\n";
  return t.ok;
}

bool identity_suite(Tally& t) {
  constexpr double tol = 1e-9;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto inst = sample_instance({77, k}, kDims, true);
    const auto& h = inst.x;
    const auto& y = *inst.y;
    const std::string at = " on trial " + std::to_string(k);
    const SkewContext c(inst.rho, inst.alpha);
    const SkewContext co(inst.rho, inst.alpha.complement());
    const SkewContext half(inst.rho, Alpha::half());

    const double v = c.variance(h), ia = c.wyd_skew(h), ja = c.wyd_anti(h);
    t.expect(rel_close(ia + ja, 2 * v, tol), "I_a + J_a = 2V" + at);
    t.expect(rel_close(c.u_alpha(h), std::sqrt(ia * ja), tol), "U_a = sqrt(I_a J_a)" + at);
    t.expect(rel_close(c.k_alpha(h) + c.l_alpha(h), 2 * c.mean_power_weight(h), tol),
             "K + L = 2 Tr[m^2 H0^2]" + at);
    t.expect(rel_close(half.z_alpha(h), std::pow(half.wy_u(h), 2), tol), "Z_1/2 = U^2" + at);
    t.expect(rel_close(half.wyd_skew(h), half.wy_skew(h), tol), "I_1/2 = I" + at);
    t.expect(rel_close(half.k_alpha(h), half.wy_skew(h), tol), "K_1/2 = I" + at);
    t.expect(rel_close(half.w_alpha(h), half.wy_u(h), tol), "W_1/2 = U" + at);
    const auto hb = half.bounds(h, y);
    t.expect(rel_close(hb.b_alpha, hb.b0, tol), "b_1/2 = b0" + at);

    const auto r = c.report(h), rc = co.report(h);
    const std::vector<std::pair<const char*, std::pair<double, double>>> sym{
        {"I_a", {r.wyd_skew, rc.wyd_skew}}, {"J_a", {r.wyd_anti, rc.wyd_anti}},
        {"U_a", {r.u_alpha, rc.u_alpha}},   {"K_a", {r.k_alpha, rc.k_alpha}},
        {"L_a", {r.l_alpha, rc.l_alpha}},   {"W_a", {r.w_alpha, rc.w_alpha}},
        {"Z_a", {r.z_alpha, rc.z_alpha}}};
    for (const auto& [name, p] : sym) {
      t.expect(rel_close(p.first, p.second, tol), std::string(name) + " a <-> 1-a" + at);
    }
    t.expect(rel_close(c.bounds(h, y).b_alpha, co.bounds(h, y).b_alpha, tol), "b_a a <-> 1-a" + at);

    // unitary covariance
    const std::size_t d = inst.rho.dim();
    const auto u = eigh(sample_observable(d, 1.0, SeedSpec{78, k})).eigenvectors;
    auto conj = [&](const ComplexMatrix& m) {
      const auto x = u * m * u.adjoint();
      return 0.5 * (x + x.adjoint());
    };
    const auto rho_u = validate_density(conj(inst.rho.matrix()));
    const auto ru = SkewContext(rho_u, inst.alpha).report(Observable(conj(h.matrix())));
    const auto rj = to_json(r), ruj = to_json(ru);
    for (const auto& [key, val] : rj.items()) {
      t.expect(rel_close(val.get<double>(), ruj[key].get<double>(), tol),
               "unitary covariance of " + key + at);
    }

    // homogeneity: degree 2, except Z which is quartic (Z_1/2 = U^2)
    const double s = 0.5 + static_cast<double>(k % 7);
    const auto rs = c.report(Observable(Complex(s) * h.matrix()));
    const auto rsj = to_json(rs);
    for (const auto& [key, val] : rj.items()) {
      const double factor = key == "Z_alpha" ? s * s * s * s : s * s;
      t.expect(rel_close(factor * val.get<double>(), rsj[key].get<double>(), tol),
               "homogeneity of " + key + at);
    }
  }
  return t.ok;
}

bool oracle_equivalence(Tally& t) {
  int deficient = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto inst = sample_instance({4040, k}, kDims, false);
    deficient += inst.rank < inst.rho.dim();
    const auto s = spectral_forms(inst.rho, inst.x, inst.alpha);
    const double ia = wyd_skew(inst.rho, inst.x, inst.alpha);
    const double ka = quantity_k(inst.rho, inst.x, inst.alpha);
    t.expect(std::abs(s.wyd_skew - ia) <= 1e-9 * std::max(1.0, std::abs(ia)),
             "I_a spectral " + num(s.wyd_skew) + " trace " + num(ia));
    t.expect(std::abs(s.k_alpha - ka) <= 1e-9 * std::max(1.0, std::abs(ka)),
             "K_a spectral " + num(s.k_alpha) + " trace " + num(ka));
  }
  std::cout << "    " << deficient << " of 1000 states rank-deficient\n";
  t.expect(deficient > 0, "no rank-deficient states sampled");
  return t.ok;
}

bool search_soundness(Tally& t) {
  SearchConfig cfg;
  cfg.dims = {2};
  cfg.trials = 100000;
  cfg.seed = 42;
  const auto refuted = random_search("k_bound_refuted", cfg);
  std::cout << "    k_bound_refuted best gap " << num(refuted.best_gap) << " ("
            << num(refuted.wall_time_s) << " s)\n";
  t.expect(refuted.best_gap >= 0.1, "k_bound_refuted not rediscovered");

  cfg.dims = kDims;
  cfg.trials = 10000;
  const auto w = random_search("theorem_w", cfg);
  std::cout << "    theorem_w best gap " << num(w.best_gap) << "\n";
  t.expect(w.best_gap <= 1e-9, "theorem_w best gap " + num(w.best_gap));

  const auto dir = std::filesystem::temp_directory_path() / "skewlab_acceptance";
  std::filesystem::create_directories(dir);
  for (const char* id : {"conj_u_alpha", "conj_u_alpha_meanbound", "conj_k_le_v"}) {
    const auto out = (dir / (std::string(id) + ".json")).string();
    std::vector<std::string> args{"skewlab", "search", "--entry", id, "--dim", "2,3,4",
                                  "--trials", "10000", "--steps", "200", "--seed", "7",
                                  "--out", out};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream so, se;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), so, se);
    t.expect(code == 0, std::string(id) + " campaign exit " + std::to_string(code) + " " + se.str());
    std::ifstream f(out);
    std::ifstream log(out + ".jsonl");
    if (!f || !log) {
      t.fail(std::string(id) + " record not persisted");
      continue;
    }
    const auto rec = nlohmann::json::parse(f);
    t.expect(rec["entry_id"] == id, std::string(id) + " record mismatch");
    std::cout << "    " << id << " best gap " << num(rec["best_gap"].get<double>())
              << " (evidence only)\n";
  }
  return t.ok;
}

bool determinism(Tally& t) {
  const auto fxdir = std::filesystem::path(SKEWLAB_DATA_DIR) / "fixtures";
  auto file = [&](const char* fx, const char* key) {
    return (fxdir / fx / (std::string(key) + ".json")).string();
  };
  const std::vector<std::vector<std::string>> commands{
      {"reproduce"},
      {"reproduce", "--format", "csv"},
      {"catalog"},
      {"compute", "--rho", file("fx_remark28ii_a", "rho"), "--obs",
       "X=" + file("fx_remark28ii_a", "X"), "--obs", "Y=" + file("fx_remark28ii_a", "Y"),
       "--alpha", "0.3"},
      {"check", "--rho", file("fx_counterexample15", "rho"), "--obs",
       "X=" + file("fx_counterexample15", "X"), "--obs", "Y=" + file("fx_counterexample15", "Y"),
       "--alpha", "0.5"},
      {"search", "--entry", "conj_k_le_v", "--dim", "2,3,4,6", "--trials", "3000", "--steps",
       "300", "--seed", "9"},
      {"search", "--entry", "k_bound_refuted", "--dim", "2", "--trials", "5000", "--seed", "42"},
  };
  auto run_once = [](const std::vector<std::string>& cmd) {
    std::vector<std::string> args{"skewlab"};
    args.insert(args.end(), cmd.begin(), cmd.end());
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream so, se;
    cli::run(static_cast<int>(argv.size()), argv.data(), so, se);
    std::string text = so.str();
    if (cmd.front() == "search") {
      auto j = nlohmann::json::parse(text);
      j.erase("wall_time_s");
      text = j.dump(2);
    }
    return text;
  };
  for (const auto& cmd : commands) {
    const auto a = run_once(cmd), b = run_once(cmd);
    t.expect(!a.empty() && a == b, cmd.front() + " output differs between runs");
  }
  return t.ok;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(Tally&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "fixture-number reproduction", reproduction},
      {2, "proved-inequality property suite", proved_suite},
      {3, "identity suite", identity_suite},
      {4, "spectral oracle equivalence", oracle_equivalence},
      {5, "search soundness", search_soundness},
      {6, "determinism", determinism},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  bool all_ok = true;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    Tally t;
    bool ok = false;
    try {
      ok = c.run(t);
    } catch (const std::exception& e) {
      std::cout << "    exception: " << e.what() << "\n";
    }
    std::cout << (ok ? "PASS " : "FAIL ") << c.id << " " << c.name << std::endl;
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}

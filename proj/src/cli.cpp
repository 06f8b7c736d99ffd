#include "skewlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "skewlab/catalog.hpp"
#include "skewlab/error.hpp"
#include "skewlab/explorer.hpp"
#include "skewlab/matrix_json.hpp"
#include "skewlab/quantities.hpp"
#include "skewlab/sampling.hpp"

namespace skewlab::cli {

namespace {

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

double fixture_value(const Fixture& fx, const ExpectedValue& e, std::optional<double>& located) {
  using Q = FixtureQuantity;
  if (e.quantity == Q::tr_mean_comm_sq_scan) {
    const auto scan = alpha_scan(fx.name, "abs_tr_m2_comm_sq", kScanGrid);
    double best = scan.front().second, best_alpha = scan.front().first;
    for (const auto& [a, v] : scan) {
      if (std::abs(v - e.value) < std::abs(best - e.value)) {
        best = v;
        best_alpha = a;
      }
    }
    located = best_alpha;
    return best;
  }
  located = e.alpha;
  const SkewContext ctx(fx.rho, Alpha(e.alpha.value_or(0.5)));
  switch (e.quantity) {
    case Q::u_alpha_minus_wy_skew:
      return ctx.u_alpha(fx.primary()) - ctx.wy_skew(fx.primary());
    case Q::wy_u_minus_w_alpha:
      return ctx.wy_u(fx.primary()) - ctx.w_alpha(fx.primary());
    case Q::v_minus_w_alpha:
      return ctx.variance(fx.primary()) - ctx.w_alpha(fx.primary());
    case Q::tr_rho_comm_sq:
      return 4.0 * ctx.bounds(fx.observable("X"), fx.observable("Y")).b0;
    case Q::b0:
      return ctx.bounds(fx.observable("X"), fx.observable("Y")).b0;
    case Q::b_alpha:
      return ctx.bounds(fx.observable("X"), fx.observable("Y")).b_alpha;
    case Q::k_product_minus_i_product: {
      const auto& x = fx.observable("X");
      const auto& y = fx.observable("Y");
      return ctx.k_alpha(x) * ctx.k_alpha(y) - ctx.wyd_skew(x) * ctx.wyd_skew(y);
    }
    case Q::k_product:
      return ctx.k_alpha(fx.observable("X")) * ctx.k_alpha(fx.observable("Y"));
    case Q::tr_mean_comm_sq_scan:
      break;
  }
  throw Error(ErrorKind::ConfigError, "unhandled fixture quantity");
}

struct Options {
  std::string rho_path;
  std::vector<std::string> obs;
  std::optional<double> alpha;
  std::string entry;
  std::vector<std::size_t> dims{2};
  std::uint64_t trials = 1000;
  int steps = 0;
  double step_size = 0.05;
  double scale = 1.0;
  std::optional<std::uint64_t> seed;
  double tol = kVerdictTol;
  std::string out_path;
  std::string log_path;
  std::string format = "json";
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  const char* env = std::getenv("SKEWLAB_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || env[0] == '-') {
    throw Error(ErrorKind::ConfigError, std::string("SKEWLAB_SEED is not an unsigned integer: ") + env);
  }
  return v;
}

std::map<std::string, Observable> load_observables(const Options& o) {
  std::map<std::string, Observable> out;
  for (const auto& spec : o.obs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw Error(ErrorKind::ConfigError, "--obs expects name=path, got " + spec);
    }
    const std::string name = spec.substr(0, eq);
    if (out.contains(name)) throw Error(ErrorKind::ConfigError, "observable given twice: " + name);
    out.emplace(name, validate_observable(read_matrix_file(spec.substr(eq + 1))));
  }
  return out;
}

DensityMatrix load_rho(const Options& o) {
  if (o.rho_path.empty()) throw Error(ErrorKind::ConfigError, "--rho is required");
  return validate_density(read_matrix_file(o.rho_path));
}

void check_dims(const DensityMatrix& rho, const std::map<std::string, Observable>& obs) {
  for (const auto& [name, h] : obs) {
    if (h.dim() != rho.dim()) {
      throw Error(ErrorKind::DimensionMismatch, name + " is " + std::to_string(h.dim()) +
                                                    "-dimensional, rho is " +
                                                    std::to_string(rho.dim()));
    }
  }
}

const Observable& primary_observable(const std::map<std::string, Observable>& obs) {
  if (obs.empty()) throw Error(ErrorKind::ConfigError, "at least one --obs is required");
  for (const char* key : {"X", "H"}) {
    if (auto it = obs.find(key); it != obs.end()) return it->second;
  }
  return obs.begin()->second;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write " + o.out_path);
  f << text;
}

void require_json(const Options& o, const char* command) {
  if (o.format != "json") {
    throw Error(ErrorKind::ConfigError, std::string(command) + " only writes json");
  }
}

int cmd_compute(const Options& o, std::ostream& out) {
  const DensityMatrix rho = load_rho(o);
  const auto obs = load_observables(o);
  if (obs.empty()) throw Error(ErrorKind::ConfigError, "at least one --obs is required");
  check_dims(rho, obs);
  if (!o.alpha) throw Error(ErrorKind::MissingAlpha, "compute needs --alpha");
  const SkewContext ctx(rho, Alpha(*o.alpha));

  nlohmann::json reports = nlohmann::json::object();
  for (const auto& [name, h] : obs) reports[name] = to_json(ctx.report(h));
  nlohmann::json doc{{"alpha", *o.alpha}, {"dim", rho.dim()}, {"reports", reports}};
  if (obs.contains("X") && obs.contains("Y")) {
    doc["bounds"] = to_json(ctx.bounds(obs.at("X"), obs.at("Y")));
  }

  if (o.format == "csv") {
    std::string text = "observable,quantity,value\n";
    for (const auto& [name, r] : reports.items()) {
      for (const auto& [key, v] : r.items()) text += csv_field(name) + "," + key + "," + g12(v) + "\n";
    }
    if (doc.contains("bounds")) {
      for (const auto& [key, v] : doc["bounds"].items()) text += "X:Y," + key + "," + g12(v) + "\n";
    }
    emit(o, out, text);
  } else {
    emit(o, out, doc.dump(2) + "\n");
  }
  return 0;
}

int cmd_check(const Options& o, std::ostream& out) {
  const DensityMatrix rho = load_rho(o);
  const auto obs = load_observables(o);
  check_dims(rho, obs);
  const Observable& x = primary_observable(obs);
  const Observable* y = obs.contains("Y") ? &obs.at("Y") : nullptr;
  std::optional<Alpha> alpha;
  if (o.alpha) alpha = Alpha(*o.alpha);

  std::vector<CheckResult> results;
  if (!o.entry.empty()) {
    results.push_back(evaluate(o.entry, rho, x, y, alpha, o.tol));
  } else {
    results = check_all(rho, x, y, alpha, o.tol);
  }

  int code = 0;
  for (const auto& r : results) {
    if (find_entry(r.entry_id).asserted() && r.verdict == Verdict::violated) code = 1;
  }

  if (o.format == "csv") {
    std::string text = "entry_id,status,lhs,rhs,gap,verdict,tolerance,alpha\n";
    for (const auto& r : results) {
      text += r.entry_id + "," + std::string(to_string(r.status)) + "," + g12(r.lhs) + "," +
              g12(r.rhs) + "," + g12(r.gap) + "," + std::string(to_string(r.verdict)) + "," +
              g12(r.tolerance) + "," + (r.alpha ? g12(*r.alpha) : "") + "\n";
    }
    emit(o, out, text);
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) arr.push_back(to_json(r));
    emit(o, out, arr.dump(2) + "\n");
  }
  return code;
}

int cmd_reproduce(const Options& o, std::ostream& out) {
  const auto rows = reproduce_rows();
  int code = 0;
  for (const auto& r : rows) {
    if (!r.diagnostic && !r.pass) code = 1;
  }
  if (o.format == "csv") {
    emit(o, out, rows_to_csv(rows));
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    emit(o, out, arr.dump(2) + "\n");
  }
  return code;
}

int cmd_search(const Options& o, std::ostream& out) {
  require_json(o, "search");
  if (o.entry.empty()) throw Error(ErrorKind::ConfigError, "search needs --entry");
  const CatalogEntry& entry = find_entry(o.entry);
  if (o.dims.empty()) throw Error(ErrorKind::ConfigError, "--dim is empty");
  for (auto d : o.dims) {
    if (d < 1) throw Error(ErrorKind::ConfigError, "dimensions must be >= 1");
  }
  if (o.trials < 1) throw Error(ErrorKind::ConfigError, "--trials must be >= 1");
  if (o.steps < 0) throw Error(ErrorKind::ConfigError, "--steps must be >= 0");
  if (!(o.step_size > 0)) throw Error(ErrorKind::ConfigError, "--step-size must be > 0");
  if (!(o.scale > 0)) throw Error(ErrorKind::ConfigError, "--scale must be > 0");

  SearchConfig config;
  config.dims = o.dims;
  config.trials = o.trials;
  config.steps = o.steps;
  config.step_size = o.step_size;
  config.seed = resolve_seed(o);
  config.rel_tol = o.tol;
  config.scale = o.scale;
  const SearchRecord rec = run_campaign(entry.id, config);

  std::string log_path = o.log_path;
  if (log_path.empty() && !o.out_path.empty()) log_path = o.out_path + ".jsonl";
  if (!log_path.empty()) {
    std::ofstream f(log_path);
    if (!f) throw Error(ErrorKind::ConfigError, "cannot write " + log_path);
    for (const auto& r : rec.log) f << to_json(r).dump() << "\n";
  }
  emit(o, out, to_json(rec).dump(2) + "\n");
  return entry.asserted() && rec.violation() ? 1 : 0;
}

int cmd_catalog(const Options& o, std::ostream& out) {
  const auto& entries = list_catalog();
  if (o.format == "csv") {
    std::string text = "id,status,arity,needs_alpha,description\n";
    for (const auto& e : entries) {
      text += e.id + "," + std::string(to_string(e.status)) + "," + std::string(to_string(e.arity)) +
              "," + (e.needs_alpha ? "true" : "false") + "," + csv_field(e.description) + "\n";
    }
    emit(o, out, text);
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) arr.push_back(to_json(e));
    emit(o, out, arr.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

std::vector<ReproductionRow> reproduce_rows() {
  std::vector<ReproductionRow> rows;
  for (const auto& name : fixture_names()) {
    const Fixture fx = fixture(name);
    for (const auto& e : fx.expected) {
      ReproductionRow row;
      row.fixture = name;
      row.quantity = std::string(to_string(e.quantity));
      row.expected = e.value;
      row.tolerance = e.tolerance;
      row.diagnostic = e.diagnostic;
      row.anchor = e.anchor;
      row.computed = fixture_value(fx, e, row.alpha);
      row.pass = std::abs(row.computed - row.expected) <= row.tolerance;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

nlohmann::json to_json(const ReproductionRow& row) {
  return {{"fixture", row.fixture},
          {"quantity", row.quantity},
          {"alpha", row.alpha ? nlohmann::json(*row.alpha) : nlohmann::json(nullptr)},
          {"expected", row.expected},
          {"computed", row.computed},
          {"tolerance", row.tolerance},
          {"pass", row.pass},
          {"diagnostic", row.diagnostic},
          {"anchor", row.anchor}};
}

std::string rows_to_csv(const std::vector<ReproductionRow>& rows) {
  std::string text = "fixture,quantity,alpha,expected,computed,tolerance,pass,diagnostic,anchor\n";
  for (const auto& r : rows) {
    text += r.fixture + "," + r.quantity + "," + (r.alpha ? g12(*r.alpha) : "") + "," +
            g12(r.expected) + "," + g12(r.computed) + "," + g12(r.tolerance) + "," +
            (r.pass ? "true" : "false") + "," + (r.diagnostic ? "true" : "false") + "," +
            csv_field(r.anchor) + "\n";
  }
  return text;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"skew information toolkit", "skewlab"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", o.out_path, "output file (default stdout)");
  };
  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--rho", o.rho_path, "density matrix file")->required();
    sub->add_option("--obs", o.obs, "observable as name=path (repeatable)");
    sub->add_option("--alpha", o.alpha, "exponent in [0,1]");
  };

  auto* compute = app.add_subcommand("compute", "quantity and bound reports");
  add_inputs(compute);
  add_format(compute);

  auto* check = app.add_subcommand("check", "evaluate catalog entries on one instance");
  add_inputs(check);
  add_format(check);
  check->add_option("--entry", o.entry, "restrict to one catalog id");
  check->add_option("--tol", o.tol, "relative verdict tolerance");

  auto* reproduce = app.add_subcommand("reproduce", "recompute the embedded fixture values");
  add_format(reproduce);

  auto* search = app.add_subcommand("search", "random search plus refinement for a gap");
  add_format(search);
  search->add_option("--entry", o.entry, "catalog id")->required();
  search->add_option("--dim", o.dims, "dimensions to draw from")->delimiter(',');
  search->add_option("--trials", o.trials, "random trials");
  search->add_option("--steps", o.steps, "refinement steps on the best trial");
  search->add_option("--step-size", o.step_size, "refinement step size");
  search->add_option("--scale", o.scale, "observable scale");
  search->add_option("--seed", o.seed, "master seed (default $SKEWLAB_SEED, else 0)");
  search->add_option("--tol", o.tol, "relative verdict tolerance");
  search->add_option("--log", o.log_path, "JSONL log path (default <out>.jsonl)");

  auto* catalog = app.add_subcommand("catalog", "list catalog entries");
  add_format(catalog);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ConfigError: " << e.what() << "\n";
    return 2;
  }

  try {
    if (o.alpha && !(*o.alpha >= 0.0 && *o.alpha <= 1.0)) {
      throw Error(ErrorKind::BadAlpha, "alpha must lie in [0,1]");
    }
    if (!(o.tol >= 0.0)) throw Error(ErrorKind::ConfigError, "--tol must be >= 0");
    if (*compute) return cmd_compute(o, out);
    if (*check) return cmd_check(o, out);
    if (*reproduce) return cmd_reproduce(o, out);
    if (*search) return cmd_search(o, out);
    return cmd_catalog(o, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
}

}  // namespace skewlab::cli

#include "skewlab/explorer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "skewlab/error.hpp"
#include "skewlab/matrix_json.hpp"

namespace skewlab {

namespace {

std::optional<Alpha> alpha_for(const CatalogEntry& entry, const Instance& inst) {
  if (entry.needs_alpha) return inst.alpha;
  return std::nullopt;
}

double gap_unchecked(const CatalogEntry& entry, const Instance& inst) {
  const SkewContext ctx(inst.rho, alpha_for(entry, inst).value_or(Alpha::half()));
  return evaluate(entry, ctx, inst.x, inst.y_ptr(), entry.needs_alpha).gap;
}

std::uint64_t fingerprint_seed(const std::string& fp) { return std::stoull(fp, nullptr, 16); }

double alpha_quantity(const SkewContext& ctx, const Fixture& fx, const std::string& key) {
  static const std::vector<std::string> bound_keys{"B0", "B_alpha", "B_Z", "schrodinger_rhs",
                                                   "abs_tr_m2_comm_sq", "abs_tr_rho_comm_sq"};
  if (std::find(bound_keys.begin(), bound_keys.end(), key) != bound_keys.end()) {
    if (!fx.has("X") || !fx.has("Y")) {
      throw Error(ErrorKind::ConfigError, fx.name + " has no observable pair for " + key);
    }
    const nlohmann::json b = to_json(ctx.bounds(fx.observable("X"), fx.observable("Y")));
    if (key == "abs_tr_m2_comm_sq") return 4.0 * b.at("B_alpha").get<double>();
    if (key == "abs_tr_rho_comm_sq") return 4.0 * b.at("B0").get<double>();
    return b.at(key).get<double>();
  }
  const nlohmann::json r = to_json(ctx.report(fx.primary()));
  if (!r.contains(key)) throw Error(ErrorKind::ConfigError, "unknown scan quantity " + key);
  return r.at(key).get<double>();
}

}  // namespace

Instance sample_instance(SeedSpec seed, const std::vector<std::size_t>& dims, bool pair,
                         double scale) {
  if (dims.empty()) throw Error(ErrorKind::ConfigError, "no dimensions to sample from");
  auto engine = make_engine(seed);
  std::uniform_int_distribution<std::size_t> pick_dim(0, dims.size() - 1);
  const std::size_t d = dims[pick_dim(engine)];
  std::uniform_int_distribution<std::size_t> pick_rank(1, d);
  const std::size_t rank = pick_rank(engine);
  ComplexMatrix g = sample_ginibre(d, rank, engine);
  Observable x = sample_observable(d, scale, engine);
  std::optional<Observable> y;
  if (pair) y = sample_observable(d, scale, engine);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Alpha alpha(unit(engine));

  Provenance p;
  p.kind = Provenance::Kind::sampled;
  p.seed = seed;
  p.dims = dims;
  p.pair = pair;
  p.scale = scale;
  DensityMatrix rho = density_from_factor(g);
  return Instance{std::move(g), rank, std::move(rho), std::move(x), std::move(y), alpha, std::move(p)};
}

Instance instance_from_fixture(const std::string& name, double alpha) {
  Fixture fx = fixture(name);
  ComplexMatrix root = fx.rho.spectrum().apply([](double l) { return eigen_power(l, 0.5); });
  Provenance p;
  p.kind = Provenance::Kind::fixture;
  p.fixture_name = name;
  p.fixture_alpha = alpha;
  const std::size_t d = fx.rho.dim();
  std::optional<Observable> y;
  if (fx.has("Y")) y = fx.observable("Y");
  return Instance{std::move(root), d,     fx.rho,       fx.primary(), std::move(y),
                  Alpha(alpha),    std::move(p)};
}

Instance regenerate(const Provenance& provenance) {
  Instance inst = provenance.kind == Provenance::Kind::fixture
                      ? instance_from_fixture(provenance.fixture_name, provenance.fixture_alpha)
                      : sample_instance(provenance.seed, provenance.dims, provenance.pair,
                                        provenance.scale);
  for (const auto& step : provenance.lineage) {
    inst = refine(step.entry_id, inst, step.steps, step.step_size);
  }
  return inst;
}

CheckResult check_instance(const std::string& entry_id, const Instance& inst, double rel_tol) {
  const CatalogEntry& entry = find_entry(entry_id);
  const std::optional<Alpha> alpha = alpha_for(entry, inst);
  const SkewContext ctx(inst.rho, alpha.value_or(Alpha::half()));
  return evaluate(entry, ctx, inst.x, inst.y_ptr(), entry.needs_alpha, rel_tol,
                  fingerprint(inst.rho, inst.x, inst.y_ptr(), alpha));
}

double gap(const std::string& entry_id, const Instance& inst) {
  return gap_unchecked(find_entry(entry_id), inst);
}

SearchRecord random_search(const std::string& entry_id, const SearchConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const CatalogEntry& entry = find_entry(entry_id);
  if (config.trials < 1) throw Error(ErrorKind::ConfigError, "trials must be >= 1");
  if (config.dims.empty()) throw Error(ErrorKind::ConfigError, "no dimensions");
  const bool pair = entry.arity == Arity::pair;

  std::vector<double> gaps(config.trials, std::numeric_limits<double>::quiet_NaN());
  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         std::min<std::uint64_t>(config.trials, 64))));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t t = w; t < config.trials; t += threads) {
          try {
            gaps[t] = gap_unchecked(entry, sample_instance({config.seed, t}, config.dims, pair, config.scale));
          } catch (const Error&) {
            // left as NaN and counted below
          }
        }
      });
    }
  }

  SearchRecord rec;
  rec.entry_id = entry_id;
  rec.config = config;
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    if (std::isnan(gaps[t])) {
      ++rec.failed_trials;
      continue;
    }
    if (gaps[t] > best) {
      best = gaps[t];
      rec.best_trial = t;
      rec.history.push_back({t, best});
    }
  }
  rec.sampled_gap = best;
  rec.best_gap = best;
  if (!rec.history.empty()) {
    for (const auto& point : rec.history) {
      rec.log.push_back(check_instance(
          entry_id, sample_instance({config.seed, point.trial}, config.dims, pair, config.scale), config.rel_tol));
    }
    rec.best = sample_instance({config.seed, rec.best_trial}, config.dims, pair, config.scale);
    rec.best_check = rec.log.back();
  }
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

RefineResult refine_traced(const std::string& entry_id, const Instance& inst, int steps,
                           double step_size) {
  const CatalogEntry& entry = find_entry(entry_id);
  if (steps < 0) throw Error(ErrorKind::ConfigError, "steps must be >= 0");
  const std::optional<Alpha> fp_alpha = alpha_for(entry, inst);
  auto engine = make_engine({fingerprint_seed(fingerprint(inst.rho, inst.x, inst.y_ptr(), fp_alpha)),
                             inst.provenance.lineage.size()});
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t d = inst.rho.dim();
  std::uniform_int_distribution<std::size_t> pick_row(0, d - 1);
  std::uniform_int_distribution<std::size_t> pick_col(0, inst.rank - 1);
  std::vector<int> blocks{0, 1};
  if (inst.y) blocks.push_back(2);
  if (entry.needs_alpha) blocks.push_back(3);
  std::uniform_int_distribution<std::size_t> pick_block(0, blocks.size() - 1);

  Instance current = inst;
  double current_gap = gap_unchecked(entry, current);
  RefineResult out{current, {current_gap}};

  auto perturb_hermitian = [&](const Observable& h) {
    ComplexMatrix m = h.matrix();
    const std::size_t i = pick_row(engine), j = pick_row(engine);
    if (i == j) {
      m(i, i) += step_size * normal(engine);
    } else {
      const double re = normal(engine), im = normal(engine);
      m(i, j) += step_size * Complex(re, im);
      m(j, i) = std::conj(m(i, j));
    }
    return Observable(std::move(m));
  };

  for (int step = 0; step < steps; ++step) {
    const int block = blocks[pick_block(engine)];
    try {
      ComplexMatrix factor = current.factor;
      Observable x = current.x;
      std::optional<Observable> y = current.y;
      double a = current.alpha.value();
      switch (block) {
        case 0: {
          const std::size_t i = pick_row(engine), j = pick_col(engine);
          const double re = normal(engine), im = normal(engine);
          factor(i, j) += step_size * Complex(re, im);
          break;
        }
        case 1: x = perturb_hermitian(x); break;
        case 2: y = perturb_hermitian(*y); break;
        default: a = std::clamp(a + step_size * normal(engine), 0.0, 1.0); break;
      }
      DensityMatrix rho = density_from_factor(factor);
      Instance candidate{std::move(factor), current.rank, std::move(rho), std::move(x),
                         std::move(y),      Alpha(a),     current.provenance};
      const double g = gap_unchecked(entry, candidate);
      if (g > current_gap) {
        current = std::move(candidate);
        current_gap = g;
        out.accepted_gaps.push_back(g);
      }
    } catch (const Error&) {
      // invalid proposal: skip the step
    }
  }
  current.provenance.lineage.push_back({entry_id, steps, step_size});
  out.instance = std::move(current);
  return out;
}

Instance refine(const std::string& entry_id, const Instance& inst, int steps, double step_size) {
  return refine_traced(entry_id, inst, steps, step_size).instance;
}

SearchRecord run_campaign(const std::string& entry_id, const SearchConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SearchRecord rec = random_search(entry_id, config);
  if (config.steps > 0 && rec.best) {
    RefineResult refined = refine_traced(entry_id, *rec.best, config.steps, config.step_size);
    rec.refine_gaps = refined.accepted_gaps;
    rec.best = std::move(refined.instance);
    rec.best_check = check_instance(entry_id, *rec.best, config.rel_tol);
    rec.best_gap = rec.best_check.gap;
    rec.log.push_back(rec.best_check);
  }
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<std::pair<double, double>> alpha_scan(const std::string& fixture_name,
                                                  const std::string& quantity, int grid) {
  if (grid < 2) throw Error(ErrorKind::ConfigError, "alpha grid needs at least 2 points");
  const Fixture fx = fixture(fixture_name);
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(grid - 1);
    const SkewContext ctx(fx.rho, Alpha(a));
    out.emplace_back(a, alpha_quantity(ctx, fx, quantity));
  }
  return out;
}

nlohmann::json to_json(const Provenance& p) {
  nlohmann::json lineage = nlohmann::json::array();
  for (const auto& step : p.lineage) {
    lineage.push_back(
        {{"entry_id", step.entry_id}, {"steps", step.steps}, {"step_size", step.step_size}});
  }
  nlohmann::json j{{"lineage", std::move(lineage)}};
  if (p.kind == Provenance::Kind::fixture) {
    j["kind"] = "fixture";
    j["fixture"] = p.fixture_name;
    j["alpha"] = p.fixture_alpha;
  } else {
    j["kind"] = "sampled";
    j["master_seed"] = p.seed.master;
    j["trial"] = p.seed.trial;
    j["dims"] = p.dims;
    j["pair"] = p.pair;
    j["scale"] = p.scale;
  }
  return j;
}

nlohmann::json to_json(const Instance& inst) {
  nlohmann::json j{{"rho", matrix_to_json(inst.rho.matrix())},
                   {"X", matrix_to_json(inst.x.matrix())},
                   {"alpha", inst.alpha.value()},
                   {"rank", inst.rank},
                   {"factor", matrix_to_json(inst.factor)},
                   {"provenance", to_json(inst.provenance)}};
  j["Y"] = inst.y ? matrix_to_json(inst.y->matrix()) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const SearchRecord& rec) {
  const CatalogEntry& entry = find_entry(rec.entry_id);
  nlohmann::json history = nlohmann::json::array();
  for (const auto& point : rec.history) history.push_back({{"trial", point.trial}, {"gap", point.gap}});
  nlohmann::json j{
      {"entry_id", rec.entry_id},
      {"status", to_string(entry.status)},
      {"config",
       {{"dims", rec.config.dims},
        {"trials", rec.config.trials},
        {"steps", rec.config.steps},
        {"step_size", rec.config.step_size},
        {"master_seed", rec.config.seed},
        {"tolerance", rec.config.rel_tol},
        {"scale", rec.config.scale}}},
      {"best_trial", rec.best_trial},
      {"sampled_gap", rec.sampled_gap},
      {"best_gap", rec.best_gap},
      {"history", std::move(history)},
      {"refine_accepted_gaps", rec.refine_gaps},
      {"failed_trials", rec.failed_trials},
      {"violation_threshold", kViolationThreshold},
      {"violation", rec.violation()},
      {"wall_time_s", rec.wall_time_s},
  };
  if (rec.best) {
    j["best"] = to_json(*rec.best);
    j["best_check"] = to_json(rec.best_check);
  } else {
    j["best"] = nullptr;
    j["best_check"] = nullptr;
  }
  return j;
}

}  // namespace skewlab

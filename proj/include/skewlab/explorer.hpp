#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skewlab/catalog.hpp"
#include "skewlab/sampling.hpp"

namespace skewlab {

inline constexpr double kViolationThreshold = 1e-7;

struct RefineStep {
  std::string entry_id;
  int steps = 0;
  double step_size = 0;
};

/// Enough to rebuild an Instance bit-for-bit.
struct Provenance {
  enum class Kind { fixture, sampled };
  Kind kind = Kind::sampled;
  std::string fixture_name;        // Kind::fixture
  double fixture_alpha = 0.5;      // Kind::fixture
  SeedSpec seed;                   // Kind::sampled
  std::vector<std::size_t> dims;   // Kind::sampled
  bool pair = true;                // Kind::sampled: was a Y drawn
  double scale = 1.0;              // Kind::sampled
  std::vector<RefineStep> lineage;
};

/// A point of the search space. The state is carried through a factor G with
/// rho = G G† / Tr[G G†]; only its first `rank` columns are nonzero.
struct Instance {
  ComplexMatrix factor;
  std::size_t rank;
  DensityMatrix rho;
  Observable x;
  std::optional<Observable> y;
  Alpha alpha;
  Provenance provenance;

  const Observable* y_ptr() const { return y ? &*y : nullptr; }
};

Instance sample_instance(SeedSpec seed, const std::vector<std::size_t>& dims, bool pair,
                         double scale = 1.0);
Instance instance_from_fixture(const std::string& name, double alpha);
Instance regenerate(const Provenance& provenance);

CheckResult check_instance(const std::string& entry_id, const Instance& inst,
                           double rel_tol = kVerdictTol);
double gap(const std::string& entry_id, const Instance& inst);

struct SearchConfig {
  std::vector<std::size_t> dims{2};
  std::uint64_t trials = 1000;
  int steps = 0;
  double step_size = 0.05;
  std::uint64_t seed = 0;
  double rel_tol = kVerdictTol;
  double scale = 1.0;
  unsigned threads = 0;  // 0: hardware concurrency; never affects results
};

struct GapPoint {
  std::uint64_t trial;
  double gap;
};

struct SearchRecord {
  std::string entry_id;
  SearchConfig config;
  std::uint64_t best_trial = 0;
  double sampled_gap = 0;  // best gap before refinement
  double best_gap = 0;     // after refinement (== sampled_gap when steps = 0)
  std::optional<Instance> best;
  CheckResult best_check;
  std::vector<GapPoint> history;    // running-best improvements
  std::vector<double> refine_gaps;  // accepted refine gaps, in order
  std::uint64_t failed_trials = 0;  // evaluation threw (numerical corruption)
  std::vector<CheckResult> log;     // one per improvement, JSONL payload
  double wall_time_s = 0;

  bool violation() const noexcept { return best_gap > kViolationThreshold; }
};

SearchRecord random_search(const std::string& entry_id, const SearchConfig& config);

struct RefineResult {
  Instance instance;
  std::vector<double> accepted_gaps;  // starts with the input gap
};

RefineResult refine_traced(const std::string& entry_id, const Instance& inst, int steps,
                           double step_size);
Instance refine(const std::string& entry_id, const Instance& inst, int steps, double step_size);

/// Random search followed by `config.steps` refinement steps on the best point.
SearchRecord run_campaign(const std::string& entry_id, const SearchConfig& config);

/// Quantity values on the uniform grid k/(grid-1), k = 0..grid-1. Accepts any
/// QuantityReport or BoundReport key, plus "abs_tr_m2_comm_sq" (4 B_alpha)
/// and "abs_tr_rho_comm_sq" (4 B0).
std::vector<std::pair<double, double>> alpha_scan(const std::string& fixture_name,
                                                  const std::string& quantity, int grid);

nlohmann::json to_json(const Provenance& p);
nlohmann::json to_json(const Instance& inst);
nlohmann::json to_json(const SearchRecord& rec);

}  // namespace skewlab

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skewlab/quantities.hpp"

namespace skewlab {

inline constexpr double kVerdictTol = 1e-9;

enum class Arity { single, pair };
enum class Status { proved, conjectured, refuted, identity, no_ordering };
enum class Verdict { holds, violated, within_tolerance };

std::string_view to_string(Arity a) noexcept;
std::string_view to_string(Status s) noexcept;
std::string_view to_string(Verdict v) noexcept;

/// Every statement is oriented as lhs >= rhs (identities as lhs == rhs).
struct CatalogEntry {
  std::string id;
  std::string description;
  Arity arity;
  bool needs_alpha;
  Status status;
  std::string anchor;

  /// Proved statements and identities; a violation means a numerical bug.
  bool asserted() const noexcept { return status == Status::proved || status == Status::identity; }
};

/// gap = rhs - lhs (positive means the statement fails on this instance).
/// For identities gap = |rhs - lhs|. Chains report their worst link.
struct CheckResult {
  std::string entry_id;
  Status status;
  double lhs = 0;
  double rhs = 0;
  double gap = 0;
  Verdict verdict = Verdict::holds;
  double tolerance = 0;
  std::optional<double> alpha;
  std::string fingerprint;
};

const std::vector<CatalogEntry>& list_catalog();
const CatalogEntry& find_entry(std::string_view id);

/// FNV-1a over the canonical JSON of the inputs and alpha, as 16 hex digits.
std::string fingerprint(const DensityMatrix& rho, const Observable& x, const Observable* y,
                        std::optional<Alpha> alpha);

CheckResult evaluate(std::string_view id, const DensityMatrix& rho, const Observable& x,
                     const Observable* y, std::optional<Alpha> alpha, double rel_tol = kVerdictTol);

/// Evaluates against a prepared context (its alpha is used when the entry
/// needs one). Skips fingerprinting when `fp` is empty.
CheckResult evaluate(const CatalogEntry& entry, const SkewContext& ctx, const Observable& x,
                     const Observable* y, bool alpha_given, double rel_tol = kVerdictTol,
                     std::string fp = {});

/// One result per applicable entry: pair entries need y, alpha entries need
/// alpha. Single-observable entries use x.
std::vector<CheckResult> check_all(const DensityMatrix& rho, const Observable& x,
                                   const Observable* y, std::optional<Alpha> alpha,
                                   double rel_tol = kVerdictTol);

nlohmann::json to_json(const CatalogEntry& e);
nlohmann::json to_json(const CheckResult& r);

}  // namespace skewlab

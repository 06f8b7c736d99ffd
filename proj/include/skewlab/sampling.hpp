#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skewlab/hermitian.hpp"

namespace skewlab {

/// (master seed, trial index) -> independent stream.
struct SeedSpec {
  std::uint64_t master = 0;
  std::uint64_t trial = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t stream_seed(SeedSpec spec) noexcept;
std::mt19937_64 make_engine(SeedSpec spec);

/// d x d matrix whose first `rank` columns hold standard complex normal
/// entries (E|z|^2 = 1) and whose remaining columns are zero.
ComplexMatrix sample_ginibre(std::size_t dim, std::size_t rank, std::mt19937_64& engine);

/// G G† / Tr[G G†], validated.
DensityMatrix density_from_factor(const ComplexMatrix& factor);

DensityMatrix sample_density(std::size_t dim, std::optional<std::size_t> rank, SeedSpec spec);
Observable sample_observable(std::size_t dim, double scale, std::mt19937_64& engine);
Observable sample_observable(std::size_t dim, double scale, SeedSpec spec);

// ---------------------------------------------------------------------------
// Fixtures: small hand-checkable instances and the values they produce.

enum class FixtureQuantity {
  u_alpha_minus_wy_skew,  // U_{rho,a}(H) - I_rho(H)
  wy_u_minus_w_alpha,     // U_rho(H) - W_{rho,a}(H)
  v_minus_w_alpha,        // V_rho(H) - W_{rho,a}(H)
  tr_rho_comm_sq,         // |Tr[rho [X,Y]]|^2
  tr_mean_comm_sq_scan,   // |Tr[m_a^2 [X,Y]]|^2 for some a (located by scan)
  b0,
  b_alpha,
  k_product_minus_i_product,  // K(X)K(Y) - I(X)I(Y)
  k_product,                  // K(X)K(Y)
};

std::string_view to_string(FixtureQuantity q) noexcept;

struct ExpectedValue {
  FixtureQuantity quantity;
  std::optional<double> alpha;  // absent when alpha is irrelevant or unknown
  double value = 0;
  double tolerance = 0;
  bool diagnostic = false;  // reported, never gating
  std::string anchor;
};

struct Fixture {
  std::string name;
  DensityMatrix rho;
  std::map<std::string, Observable> observables;
  std::vector<double> alphas;
  std::vector<ExpectedValue> expected;

  const Observable& observable(const std::string& key) const;
  /// "H" when present, otherwise "X".
  const Observable& primary() const;
  bool has(const std::string& key) const { return observables.contains(key); }
};

const std::vector<std::string>& fixture_names();
Fixture fixture(std::string_view name);

nlohmann::json expected_to_json(const ExpectedValue& e);
/// name -> list of expected values
nlohmann::json fixture_manifest();
/// Writes <dir>/<fixture>/<rho|H|X|Y>.json and <dir>/manifest.json.
void export_fixtures(const std::filesystem::path& dir);

}  // namespace skewlab

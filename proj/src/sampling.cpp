#include "skewlab/sampling.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "skewlab/error.hpp"
#include "skewlab/matrix_json.hpp"

namespace skewlab {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(SeedSpec spec) noexcept {
  return splitmix64(splitmix64(spec.master) ^ splitmix64(spec.trial + 0x632be59bd9b4e019ULL));
}

std::mt19937_64 make_engine(SeedSpec spec) { return std::mt19937_64(stream_seed(spec)); }

namespace {

Complex complex_normal(std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::numbers::sqrt2);
  const double re = normal(engine);
  const double im = normal(engine);
  return {re, im};
}

}  // namespace

ComplexMatrix sample_ginibre(std::size_t dim, std::size_t rank, std::mt19937_64& engine) {
  if (dim == 0 || rank < 1 || rank > dim) {
    throw Error(ErrorKind::BadRank,
                "rank " + std::to_string(rank) + " outside [1, " + std::to_string(dim) + "]");
  }
  ComplexMatrix g(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < rank; ++j) g(i, j) = complex_normal(engine);
  return g;
}

DensityMatrix density_from_factor(const ComplexMatrix& factor) {
  ComplexMatrix rho = factor * factor.adjoint();
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw Error(ErrorKind::TraceNotOne, "factor has zero norm");
  rho *= 1.0 / tr;
  return validate_density(rho);
}

DensityMatrix sample_density(std::size_t dim, std::optional<std::size_t> rank, SeedSpec spec) {
  auto engine = make_engine(spec);
  return density_from_factor(sample_ginibre(dim, rank.value_or(dim), engine));
}

Observable sample_observable(std::size_t dim, double scale, std::mt19937_64& engine) {
  if (!(scale > 0.0)) throw Error(ErrorKind::ConfigError, "observable scale must be positive");
  ComplexMatrix a(dim);
  for (auto& z : a.entries()) z = complex_normal(engine);
  ComplexMatrix h = 0.5 * scale * (a + a.adjoint());
  return Observable(std::move(h));
}

Observable sample_observable(std::size_t dim, double scale, SeedSpec spec) {
  auto engine = make_engine(spec);
  return sample_observable(dim, scale, engine);
}

// ---------------------------------------------------------------------------

std::string_view to_string(FixtureQuantity q) noexcept {
  switch (q) {
    case FixtureQuantity::u_alpha_minus_wy_skew: return "U_alpha(H) - I(H)";
    case FixtureQuantity::wy_u_minus_w_alpha: return "U(H) - W_alpha(H)";
    case FixtureQuantity::v_minus_w_alpha: return "V(H) - W_alpha(H)";
    case FixtureQuantity::tr_rho_comm_sq: return "|Tr[rho[X,Y]]|^2";
    case FixtureQuantity::tr_mean_comm_sq_scan: return "|Tr[m_alpha^2[X,Y]]|^2 (alpha scan)";
    case FixtureQuantity::b0: return "B0";
    case FixtureQuantity::b_alpha: return "B_alpha";
    case FixtureQuantity::k_product_minus_i_product: return "K(X)K(Y) - I(X)I(Y)";
    case FixtureQuantity::k_product: return "K(X)K(Y)";
  }
  return "?";
}

const Observable& Fixture::observable(const std::string& key) const {
  const auto it = observables.find(key);
  if (it == observables.end()) {
    throw Error(ErrorKind::UnknownFixture, name + " has no observable " + key);
  }
  return it->second;
}

const Observable& Fixture::primary() const { return has("H") ? observable("H") : observable("X"); }

namespace {

using Q = FixtureQuantity;
constexpr Complex I{0.0, 1.0};

ComplexMatrix remark28ii_state() {
  ComplexMatrix rho{{2.0, 2.0 * I, 1.0}, {-2.0 * I, 3.0, -2.0 * I}, {1.0, 2.0 * I, 2.0}};
  rho *= 1.0 / 7.0;
  return rho;
}

ComplexMatrix remark28ii_x() { return {{3.0, 3.0, -I}, {3.0, 1.0, 0.0}, {I, 0.0, 1.0}}; }

Fixture build(std::string_view name) {
  const double root3 = std::sqrt(3.0);
  if (name == "fx_remark22") {
    return Fixture{
        .name = "fx_remark22",
        .rho = validate_density({{0.6, 0.48}, {0.48, 0.4}}),
        .observables = {{"H", Observable({{1.0, 0.5}, {0.5, 5.0}})}},
        .alphas = {0.1, 0.2},
        .expected = {{Q::u_alpha_minus_wy_skew, 0.1, -0.14736, 5e-4, false,
                      "no ordering between U_alpha and I: negative side"},
                     {Q::u_alpha_minus_wy_skew, 0.2, 0.4451, 5e-4, false,
                      "no ordering between U_alpha and I: positive side"}}};
  }
  if (name == "fx_remark28i") {
    return Fixture{
        .name = "fx_remark28i",
        .rho = validate_density({{0.8, 0.0}, {0.0, 0.2}}),
        .observables = {{"H", Observable({{2.0, 3.0}, {3.0, 1.0}})}},
        .alphas = {0.8, 0.9},
        .expected = {{Q::wy_u_minus_w_alpha, 0.8, -0.0241367, 1e-5, false,
                      "no ordering between U and W_alpha: negative side"},
                     {Q::wy_u_minus_w_alpha, 0.9, 0.404141, 1e-5, false,
                      "no ordering between U and W_alpha: positive side"}}};
  }
  if (name == "fx_remark28ii_a" || name == "fx_remark28ii_b") {
    const bool a = name == "fx_remark28ii_a";
    ComplexMatrix y = a ? ComplexMatrix{{1.0, -I, 1.0 - I}, {I, 1.0, I}, {1.0 + I, -I, 3.0}}
                        : ComplexMatrix{{1.0, -I, 0.0}, {I, 1.0, I}, {0.0, -I, 3.0}};
    const double scan_target = a ? 0.348097 : 0.304377;
    return Fixture{
        .name = std::string(name),
        .rho = validate_density(remark28ii_state()),
        .observables = {{"X", Observable(remark28ii_x())}, {"Y", Observable(std::move(y))}},
        .alphas = {},
        .expected = {{Q::tr_rho_comm_sq, std::nullopt, 0.326531, 1e-5, false,
                      "commutator weight under rho"},
                     {Q::tr_rho_comm_sq, std::nullopt, 16.0 / 49.0, 1e-12, true,
                      "commutator weight under rho, exact rational 16/49"},
                     {Q::tr_mean_comm_sq_scan, std::nullopt, scan_target, 1e-3, true,
                      a ? "mean-power commutator weight above the rho weight (alpha unstated)"
                        : "mean-power commutator weight below the rho weight (alpha unstated)"}}};
  }
  if (name == "fx_counterexample15") {
    const double factor = (1.0 - root3) / 2.0;
    return Fixture{
        .name = "fx_counterexample15",
        .rho = validate_density({{0.75, 0.0}, {0.0, 0.25}}),
        .observables = {{"X", Observable({{0.0, I}, {-I, 0.0}})},
                        {"Y", Observable({{0.0, 1.0}, {1.0, 0.0}})}},
        .alphas = {0.5},
        .expected = {{Q::b_alpha, 0.5, 0.25, 1e-12, false, "K-product bound right-hand side = 1/4"},
                     {Q::b0, 0.5, 0.25, 1e-12, false, "Heisenberg right-hand side = 1/4"},
                     {Q::k_product_minus_i_product, 0.5, 0.0, 1e-12, false,
                      "K(X)K(Y) = I(X)I(Y) at alpha = 1/2"},
                     {Q::k_product, 0.5, factor * factor, 1e-12, true,
                      "printed product ((1-sqrt3)/2)^2"},
                     {Q::k_product, 0.5, std::pow(factor, 4), 1e-12, true,
                      "product of the two factors ((1-sqrt3)/2)^2 each"}}};
  }
  if (name == "fx_final_a" || name == "fx_final_b") {
    const bool a = name == "fx_final_a";
    const double off = a ? 0.45 : 0.4;
    return Fixture{
        .name = std::string(name),
        .rho = validate_density({{0.3, off}, {off, 0.7}}),
        .observables = {{"H", Observable({{1.0, 3.0}, {3.0, 1.0}})}},
        .alphas = {0.2},
        .expected = {{Q::v_minus_w_alpha, 0.2, a ? -0.3072 : 0.682011, a ? 1e-3 : 1e-4, false,
                      a ? "no ordering between V and W_alpha: negative side"
                        : "no ordering between V and W_alpha: positive side"}}};
  }
  throw Error(ErrorKind::UnknownFixture, std::string(name));
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"fx_remark22",         "fx_remark28i",
                                              "fx_remark28ii_a",     "fx_remark28ii_b",
                                              "fx_counterexample15", "fx_final_a",
                                              "fx_final_b"};
  return names;
}

Fixture fixture(std::string_view name) { return build(name); }

nlohmann::json expected_to_json(const ExpectedValue& e) {
  nlohmann::json j{{"quantity", to_string(e.quantity)},
                   {"value", e.value},
                   {"tolerance", e.tolerance},
                   {"diagnostic", e.diagnostic},
                   {"anchor", e.anchor}};
  j["alpha"] = e.alpha ? nlohmann::json(*e.alpha) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json fixture_manifest() {
  nlohmann::json manifest = nlohmann::json::object();
  for (const auto& name : fixture_names()) {
    const Fixture fx = fixture(name);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : fx.expected) rows.push_back(expected_to_json(e));
    manifest[name] = {{"alphas", fx.alphas}, {"expected", std::move(rows)}};
  }
  return manifest;
}

void export_fixtures(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& name : fixture_names()) {
    const Fixture fx = fixture(name);
    const auto sub = dir / name;
    std::filesystem::create_directories(sub);
    write_matrix_file(sub / "rho.json", fx.rho.matrix());
    for (const auto& [key, obs] : fx.observables) write_matrix_file(sub / (key + ".json"), obs.matrix());
  }
  std::ofstream out(dir / "manifest.json");
  out << fixture_manifest().dump(2) << '\n';
}

}  // namespace skewlab

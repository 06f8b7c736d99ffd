#include "skewlab/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "skewlab/error.hpp"
#include "skewlab/matrix_json.hpp"

namespace skewlab {

std::string_view to_string(Arity a) noexcept {
  return a == Arity::single ? "single-observable" : "pair-observable";
}

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::proved: return "proved";
    case Status::conjectured: return "conjectured";
    case Status::refuted: return "refuted";
    case Status::identity: return "identity";
    case Status::no_ordering: return "no-ordering";
  }
  return "?";
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::within_tolerance: return "within-tolerance";
  }
  return "?";
}

namespace {

struct Link {
  double lhs;
  double rhs;
};

using Links = std::vector<Link>;
using Evaluator = Links (*)(const SkewContext&, const Observable&, const Observable*);

struct Row {
  CatalogEntry entry;
  Evaluator eval;
};

const std::vector<Row>& rows() {
  using A = Arity;
  using S = Status;
  static const std::vector<Row> table{
      {{"heisenberg", "V(X) V(Y) >= 1/4 |Tr[rho [X,Y]]|^2", A::pair, false, S::proved,
        "Heisenberg uncertainty relation"},
       [](const SkewContext& c, const Observable& x, const Observable* y) -> Links {
         return {{c.variance(x) * c.variance(*y), c.bounds(x, *y).b0}};
       }},
      {{"schrodinger", "V(X) V(Y) >= (Re Cov(X,Y))^2 + 1/4 |Tr[rho [X,Y]]|^2", A::pair, false,
        S::proved, "Schrodinger uncertainty relation"},
       [](const SkewContext& c, const Observable& x, const Observable* y) -> Links {
         return {{c.variance(x) * c.variance(*y), c.bounds(x, *y).schrodinger_rhs}};
       }},
      {{"luo_u", "U(X) U(Y) >= 1/4 |Tr[rho [X,Y]]|^2", A::pair, false, S::proved,
        "Luo's uncertainty relation for the quantum part of the variance"},
       [](const SkewContext& c, const Observable& x, const Observable* y) -> Links {
         return {{c.wy_u(x) * c.wy_u(*y), c.bounds(x, *y).b0}};
       }},
      {{"chain_note1", "0 <= I <= U <= V", A::single, false, S::proved,
        "ordering of skew information, quantum uncertainty and variance"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         const double i = c.wy_skew(h), u = c.wy_u(h), v = c.variance(h);
         return {{i, 0.0}, {u, i}, {v, u}};
       }},
      {{"chain_ineq_i", "I_alpha <= I <= J <= J_alpha", A::single, true, S::proved,
        "WYD skew information sandwiched by the alpha = 1/2 pair"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         const double ia = c.wyd_skew(h), i = c.wy_skew(h), j = c.wy_anti(h), ja = c.wyd_anti(h);
         return {{i, ia}, {j, i}, {ja, j}};
       }},
      {{"gen_u_chain", "0 <= I_alpha <= U_alpha <= U", A::single, true, S::proved,
        "ordering of the generalized quantum uncertainty"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         const double ia = c.wyd_skew(h), ua = c.u_alpha(h), u = c.wy_u(h);
         return {{ia, 0.0}, {ua, ia}, {u, ua}};
       }},
      {{"u_product", "U_alpha = sqrt(I_alpha J_alpha)", A::single, true, S::identity,
        "product form of the generalized quantum uncertainty"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.u_alpha(h), std::sqrt(c.wyd_skew(h) * c.wyd_anti(h))}};
       }},
      {{"sum_identity", "I_alpha + J_alpha = 2 V", A::single, true, S::identity,
        "commutator and anticommutator parts add to twice the variance"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.wyd_skew(h) + c.wyd_anti(h), 2.0 * c.variance(h)}};
       }},
      {{"kl_sum_identity", "K_alpha + L_alpha = 2 Tr[m_alpha^2 H0^2]", A::single, true,
        S::identity, "mean-power skew information pair sums to the weighted second moment"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.k_alpha(h) + c.l_alpha(h), 2.0 * c.mean_power_weight(h)}};
       }},
      {{"k_ge_i", "K_alpha >= I_alpha", A::single, true, S::proved,
        "mean-power skew information dominates the WYD skew information"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.k_alpha(h), c.wyd_skew(h)}};
       }},
      {{"l_ge_j", "L_alpha >= J_alpha", A::single, true, S::proved,
        "mean-power anticommutator form dominates J_alpha"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.l_alpha(h), c.wyd_anti(h)}};
       }},
      {{"l_ge_k", "L_alpha >= K_alpha", A::single, true, S::proved,
        "anticommutator form dominates commutator form"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.l_alpha(h), c.k_alpha(h)}};
       }},
      {{"w_ge_k", "W_alpha >= K_alpha", A::single, true, S::proved,
        "W dominates the mean-power skew information"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.w_alpha(h), c.k_alpha(h)}};
       }},
      {{"w_ge_u_alpha", "W_alpha >= U_alpha", A::single, true, S::proved,
        "W dominates the generalized quantum uncertainty"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.w_alpha(h), c.u_alpha(h)}};
       }},
      {{"theorem_w", "W_alpha(X) W_alpha(Y) >= 1/4 |Tr[m_alpha^2 [X,Y]]|^2", A::pair, true,
        S::proved, "uncertainty relation for W"},
       [](const SkewContext& c, const Observable& x, const Observable* y) -> Links {
         return {{c.w_alpha(x) * c.w_alpha(*y), c.bounds(x, *y).b_alpha}};
       }},
      {{"z_bound",
        "sqrt(Z_alpha(X) Z_alpha(Y)) >= 1/4 |Tr[rho^{2a}[X,Y]] Tr[rho^{2(1-a)}[X,Y]]|",
        A::pair, true, S::proved, "uncertainty relation for Z"},
       [](const SkewContext& c, const Observable& x, const Observable* y) -> Links {
         return {{std::sqrt(c.z_alpha(x) * c.z_alpha(*y)), c.bounds(x, *y).b_z}};
       }},
      {{"conj_u_alpha", "U_alpha(X) U_alpha(Y) >= 1/4 |Tr[rho [X,Y]]|^2", A::pair, true,
        S::conjectured, "open: generalized quantum uncertainty against the rho weight"},
       [](const SkewContext& c, const Observable& x, const Observable* y) -> Links {
         return {{c.u_alpha(x) * c.u_alpha(*y), c.bounds(x, *y).b0}};
       }},
      {{"conj_u_alpha_meanbound", "U_alpha(X) U_alpha(Y) >= 1/4 |Tr[m_alpha^2 [X,Y]]|^2",
        A::pair, true, S::conjectured,
        "open: generalized quantum uncertainty against the mean-power weight"},
       [](const SkewContext& c, const Observable& x, const Observable* y) -> Links {
         return {{c.u_alpha(x) * c.u_alpha(*y), c.bounds(x, *y).b_alpha}};
       }},
      {{"conj_k_le_v", "V >= K_alpha", A::single, true, S::conjectured,
        "open: variance dominates the mean-power skew information"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.variance(h), c.k_alpha(h)}};
       }},
      {{"k_bound_refuted", "K_alpha(X) K_alpha(Y) >= 1/4 |Tr[m_alpha^2 [X,Y]]|^2", A::pair, true,
        S::refuted, "fails: two-level counterexample at alpha = 1/2"},
       [](const SkewContext& c, const Observable& x, const Observable* y) -> Links {
         return {{c.k_alpha(x) * c.k_alpha(*y), c.bounds(x, *y).b_alpha}};
       }},
      {{"no_order_u_alpha_i", "U_alpha >= I (sign varies)", A::single, true, S::no_ordering,
        "no ordering between U_alpha and I"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.u_alpha(h), c.wy_skew(h)}};
       }},
      {{"no_order_u_w", "U >= W_alpha (sign varies)", A::single, true, S::no_ordering,
        "no ordering between U and W_alpha"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.wy_u(h), c.w_alpha(h)}};
       }},
      {{"no_order_v_w", "V >= W_alpha (sign varies)", A::single, true, S::no_ordering,
        "no ordering between V and W_alpha"},
       [](const SkewContext& c, const Observable& h, const Observable*) -> Links {
         return {{c.variance(h), c.w_alpha(h)}};
       }},
      {{"no_order_b_alpha_b0", "1/4|Tr[m_alpha^2[X,Y]]|^2 >= 1/4|Tr[rho[X,Y]]|^2 (sign varies)",
        A::pair, true, S::no_ordering, "no ordering between the two commutator weights"},
       [](const SkewContext& c, const Observable& x, const Observable* y) -> Links {
         const BoundReport b = c.bounds(x, *y);
         return {{b.b_alpha, b.b0}};
       }},
  };
  return table;
}

const Row& find_row(std::string_view id) {
  for (const auto& row : rows())
    if (row.entry.id == id) return row;
  throw Error(ErrorKind::UnknownId, std::string(id));
}

double normalized(double gap, double rhs) { return gap / std::max(1.0, std::abs(rhs)); }

}  // namespace

const std::vector<CatalogEntry>& list_catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (const auto& row : rows()) out.push_back(row.entry);
    return out;
  }();
  return entries;
}

const CatalogEntry& find_entry(std::string_view id) { return find_row(id).entry; }

std::string fingerprint(const DensityMatrix& rho, const Observable& x, const Observable* y,
                        std::optional<Alpha> alpha) {
  std::string text = matrix_to_json(rho.matrix()).dump();
  text += '|' + matrix_to_json(x.matrix()).dump();
  text += '|' + (y ? matrix_to_json(y->matrix()).dump() : std::string("null"));
  text += '|' + (alpha ? nlohmann::json(alpha->value()).dump() : std::string("null"));
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CheckResult evaluate(const CatalogEntry& entry, const SkewContext& ctx, const Observable& x,
                     const Observable* y, bool alpha_given, double rel_tol, std::string fp) {
  if (entry.arity == Arity::pair && y == nullptr) {
    throw Error(ErrorKind::ArityMismatch, entry.id + " needs two observables");
  }
  if (entry.needs_alpha && !alpha_given) {
    throw Error(ErrorKind::MissingAlpha, entry.id + " needs alpha");
  }
  const Links links = find_row(entry.id).eval(ctx, x, y);
  const bool identity = entry.status == Status::identity;
  auto gap_of = [identity](const Link& l) {
    return identity ? std::abs(l.rhs - l.lhs) : l.rhs - l.lhs;
  };
  const Link* worst = &links.front();
  for (const auto& link : links) {
    if (normalized(gap_of(link), link.rhs) > normalized(gap_of(*worst), worst->rhs)) worst = &link;
  }

  CheckResult r;
  r.entry_id = entry.id;
  r.status = entry.status;
  r.lhs = worst->lhs;
  r.rhs = worst->rhs;
  r.gap = gap_of(*worst);
  r.tolerance = rel_tol * std::max(1.0, std::abs(r.rhs));
  r.verdict = r.gap <= 0.0           ? Verdict::holds
              : r.gap <= r.tolerance ? Verdict::within_tolerance
                                     : Verdict::violated;
  if (alpha_given) r.alpha = ctx.alpha().value();
  r.fingerprint = std::move(fp);
  return r;
}

CheckResult evaluate(std::string_view id, const DensityMatrix& rho, const Observable& x,
                     const Observable* y, std::optional<Alpha> alpha, double rel_tol) {
  const CatalogEntry& entry = find_entry(id);
  const SkewContext ctx(rho, alpha.value_or(Alpha::half()));
  return evaluate(entry, ctx, x, y, alpha.has_value(), rel_tol, fingerprint(rho, x, y, alpha));
}

std::vector<CheckResult> check_all(const DensityMatrix& rho, const Observable& x,
                                   const Observable* y, std::optional<Alpha> alpha,
                                   double rel_tol) {
  const SkewContext ctx(rho, alpha.value_or(Alpha::half()));
  const std::string fp = fingerprint(rho, x, y, alpha);
  std::vector<CheckResult> out;
  for (const auto& entry : list_catalog()) {
    if (entry.arity == Arity::pair && y == nullptr) continue;
    if (entry.needs_alpha && !alpha) continue;
    out.push_back(evaluate(entry, ctx, x, y, alpha.has_value(), rel_tol, fp));
  }
  return out;
}

nlohmann::json to_json(const CatalogEntry& e) {
  return {{"id", e.id},
          {"description", e.description},
          {"arity", to_string(e.arity)},
          {"needs_alpha", e.needs_alpha},
          {"status", to_string(e.status)},
          {"anchor", e.anchor}};
}

nlohmann::json to_json(const CheckResult& r) {
  nlohmann::json j{{"entry_id", r.entry_id},
                   {"status", to_string(r.status)},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"gap", r.gap},
                   {"verdict", to_string(r.verdict)},
                   {"tolerance", r.tolerance},
                   {"fingerprint", r.fingerprint}};
  j["alpha"] = r.alpha ? nlohmann::json(*r.alpha) : nlohmann::json(nullptr);
  return j;
}

}  // namespace skewlab

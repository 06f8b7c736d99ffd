#include "skewlab/quantities.hpp"

#include <cmath>
#include <string>

#include "skewlab/error.hpp"

namespace skewlab {

namespace {

double clamp_rounding(double value, double scale) {
  if (value < 0.0 && value >= -kClampWindow * std::max(1.0, scale)) return 0.0;
  return value;
}

double checked_sqrt(double radicand, double scale, const char* what) {
  radicand = clamp_rounding(radicand, scale);
  if (radicand < 0.0) {
    throw Error(ErrorKind::NegativeRadicand,
                std::string(what) + " radicand " + std::to_string(radicand));
  }
  return std::sqrt(radicand);
}

double frob_sq(const ComplexMatrix& m) {
  const double f = m.frobenius_norm();
  return f * f;
}

void require_dim(const DensityMatrix& rho, const Observable& h) {
  if (rho.dim() != h.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "state " + std::to_string(rho.dim()) + " vs observable " + std::to_string(h.dim()));
  }
}

}  // namespace

SkewContext::SkewContext(DensityMatrix rho, Alpha alpha)
    : rho_(std::move(rho)),
      alpha_(alpha),
      power_(matrix_power(rho_, alpha).matrix()),
      co_power_(matrix_power(rho_, alpha.complement()).matrix()),
      root_(matrix_power(rho_, Alpha::half()).matrix()),
      mean_(0.5 * (power_ + co_power_)) {}

ComplexMatrix SkewContext::centered(const Observable& h) const {
  require_dim(rho_, h);
  return center(rho_, h).matrix();
}

// -1/2 Tr[[A,H0][B,H0]] = 1/2 Tr[(i[A,H0])(i[B,H0])]
double SkewContext::half_commutator_form(const ComplexMatrix& a, const ComplexMatrix& b,
                                         const ComplexMatrix& h0) const {
  const ComplexMatrix ca = bracket(a, h0, BracketKind::commutator);
  const ComplexMatrix cb = bracket(b, h0, BracketKind::commutator);
  return -0.5 * trace_product(ca, cb).real();
}

double SkewContext::variance(const Observable& h) const {
  require_dim(rho_, h);
  const ComplexMatrix& m = h.matrix();
  const double second = trace_product(rho_.matrix(), m * m).real();
  const double mean = expectation(rho_, h);
  return clamp_rounding(second - mean * mean, second);
}

Complex SkewContext::covariance(const Observable& a, const Observable& b) const {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "covariance operands");
  return trace_product(rho_.matrix(), centered(a) * centered(b));
}

double SkewContext::wy_skew(const Observable& h) const {
  const ComplexMatrix h0 = centered(h);
  const double scale = trace_product(rho_.matrix(), h0 * h0).real();
  return clamp_rounding(half_commutator_form(root_, root_, h0), scale);
}

double SkewContext::wyd_skew(const Observable& h) const {
  const ComplexMatrix h0 = centered(h);
  const double scale = trace_product(rho_.matrix(), h0 * h0).real();
  return clamp_rounding(half_commutator_form(power_, co_power_, h0), scale);
}

double SkewContext::wyd_anti(const Observable& h) const {
  const ComplexMatrix h0 = centered(h);
  const double scale = trace_product(rho_.matrix(), h0 * h0).real();
  const ComplexMatrix a = bracket(power_, h0, BracketKind::anticommutator);
  const ComplexMatrix b = bracket(co_power_, h0, BracketKind::anticommutator);
  return clamp_rounding(0.5 * trace_product(a, b).real(), scale);
}

double SkewContext::wy_anti(const Observable& h) const {
  const ComplexMatrix h0 = centered(h);
  const double scale = trace_product(rho_.matrix(), h0 * h0).real();
  const ComplexMatrix a = bracket(root_, h0, BracketKind::anticommutator);
  return clamp_rounding(0.5 * trace_product(a, a).real(), scale);
}

// sqrt(V^2 - (V - I)^2) evaluated as sqrt(I (2V - I)).
double SkewContext::u_from(double v, double skew) const {
  return checked_sqrt(skew * (2.0 * v - skew), v * v, "U");
}

double SkewContext::wy_u(const Observable& h) const { return u_from(variance(h), wy_skew(h)); }

double SkewContext::u_alpha(const Observable& h) const {
  return u_from(variance(h), wyd_skew(h));
}

double SkewContext::mean_power_weight(const Observable& h) const {
  return frob_sq(mean_ * centered(h));
}

double SkewContext::k_alpha(const Observable& h) const {
  const ComplexMatrix h0 = centered(h);
  return clamp_rounding(half_commutator_form(mean_, mean_, h0), frob_sq(mean_ * h0));
}

double SkewContext::l_alpha(const Observable& h) const {
  const ComplexMatrix h0 = centered(h);
  const ComplexMatrix a = bracket(mean_, h0, BracketKind::anticommutator);
  return clamp_rounding(0.5 * trace_product(a, a).real(), frob_sq(mean_ * h0));
}

double SkewContext::w_alpha(const Observable& h) const {
  const double weight = mean_power_weight(h);
  return checked_sqrt(k_alpha(h) * l_alpha(h), weight * weight, "W");
}

double SkewContext::z_alpha(const Observable& h) const {
  const ComplexMatrix h0 = centered(h);
  auto commutator_term = [&](const ComplexMatrix& a) {
    const ComplexMatrix c = bracket(a, h0, BracketKind::commutator);
    const double t = -trace_product(c, c).real();
    const double s = 2.0 * frob_sq(a * h0);
    const double clamped = clamp_rounding(t, s);
    if (clamped < 0.0) throw Error(ErrorKind::NegativeRadicand, "Z commutator term");
    return clamped;
  };
  auto anticommutator_term = [&](const ComplexMatrix& a) {
    const ComplexMatrix c = bracket(a, h0, BracketKind::anticommutator);
    const double t = trace_product(c, c).real();
    const double clamped = clamp_rounding(t, 2.0 * frob_sq(a * h0));
    if (clamped < 0.0) throw Error(ErrorKind::NegativeRadicand, "Z anticommutator term");
    return clamped;
  };
  const double t1 = commutator_term(power_);
  const double t2 = commutator_term(co_power_);
  const double t3 = anticommutator_term(power_);
  const double t4 = anticommutator_term(co_power_);
  return 0.25 * std::sqrt(t1 * t2 * t3 * t4);
}

QuantityReport SkewContext::report(const Observable& h) const {
  QuantityReport r;
  r.variance = variance(h);
  r.wy_skew = wy_skew(h);
  r.wyd_skew = wyd_skew(h);
  r.wyd_anti = wyd_anti(h);
  r.u = u_from(r.variance, r.wy_skew);
  r.u_alpha = u_from(r.variance, r.wyd_skew);
  r.k_alpha = k_alpha(h);
  r.l_alpha = l_alpha(h);
  const double weight = mean_power_weight(h);
  r.w_alpha = checked_sqrt(r.k_alpha * r.l_alpha, weight * weight, "W");
  r.z_alpha = z_alpha(h);
  return r;
}

BoundReport SkewContext::bounds(const Observable& x, const Observable& y) const {
  require_dim(rho_, x);
  require_dim(rho_, y);
  const ComplexMatrix comm = bracket(x, y, BracketKind::commutator);
  BoundReport b;
  b.b0 = 0.25 * std::norm(trace_product(rho_.matrix(), comm));
  b.b_alpha = 0.25 * std::norm(trace_product(mean_ * mean_, comm));
  b.b_z = 0.25 * std::abs(trace_product(power_ * power_, comm) *
                          trace_product(co_power_ * co_power_, comm));
  const double re_cov = covariance(x, y).real();
  b.schrodinger_rhs = b.b0 + re_cov * re_cov;
  return b;
}

Observable mean_power(const DensityMatrix& rho, Alpha a) {
  return Observable(SkewContext(rho, a).mean_power());
}

double variance(const DensityMatrix& rho, const Observable& h) {
  return SkewContext(rho, Alpha::half()).variance(h);
}

Complex covariance(const DensityMatrix& rho, const Observable& a, const Observable& b) {
  return SkewContext(rho, Alpha::half()).covariance(a, b);
}

double wy_skew(const DensityMatrix& rho, const Observable& h) {
  return SkewContext(rho, Alpha::half()).wy_skew(h);
}

double wyd_skew(const DensityMatrix& rho, const Observable& h, Alpha a) {
  return SkewContext(rho, a).wyd_skew(h);
}

double wyd_anti(const DensityMatrix& rho, const Observable& h, Alpha a) {
  return SkewContext(rho, a).wyd_anti(h);
}

double quantity_u(const DensityMatrix& rho, const Observable& h, Alpha a) {
  return SkewContext(rho, a).u_alpha(h);
}

double quantity_k(const DensityMatrix& rho, const Observable& h, Alpha a) {
  return SkewContext(rho, a).k_alpha(h);
}

double quantity_l(const DensityMatrix& rho, const Observable& h, Alpha a) {
  return SkewContext(rho, a).l_alpha(h);
}

double quantity_w(const DensityMatrix& rho, const Observable& h, Alpha a) {
  return SkewContext(rho, a).w_alpha(h);
}

double quantity_z(const DensityMatrix& rho, const Observable& h, Alpha a) {
  return SkewContext(rho, a).z_alpha(h);
}

BoundReport bounds(const DensityMatrix& rho, const Observable& x, const Observable& y, Alpha a) {
  return SkewContext(rho, a).bounds(x, y);
}

QuantityReport quantity_report(const DensityMatrix& rho, const Observable& h, Alpha a) {
  return SkewContext(rho, a).report(h);
}

SpectralForms spectral_forms(const DensityMatrix& rho, const Observable& h, Alpha a) {
  require_dim(rho, h);
  const Spectrum& s = rho.spectrum();
  const std::size_t d = s.dim();
  // H in the eigenbasis of rho: <phi_m|H|phi_n>.
  const ComplexMatrix& v = s.eigenvectors;
  const ComplexMatrix hv = v.adjoint() * h.matrix() * v;
  const double p = a.value();
  SpectralForms out;
  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t n = 0; n < d; ++n) {
      const double lm = s.eigenvalues[m], ln = s.eigenvalues[n];
      const double dp = eigen_power(lm, p) - eigen_power(ln, p);
      const double dq = eigen_power(lm, 1.0 - p) - eigen_power(ln, 1.0 - p);
      const double weight = std::norm(hv(m, n));
      out.wyd_skew += 0.5 * dp * dq * weight;
      const double mean_diff = 0.5 * (dp + dq);
      out.k_alpha += 0.5 * mean_diff * mean_diff * weight;
    }
  }
  return out;
}

nlohmann::json to_json(const QuantityReport& r) {
  return {{"V", r.variance},      {"I", r.wy_skew},       {"I_alpha", r.wyd_skew},
          {"J_alpha", r.wyd_anti}, {"U", r.u},             {"U_alpha", r.u_alpha},
          {"K_alpha", r.k_alpha},  {"L_alpha", r.l_alpha}, {"W_alpha", r.w_alpha},
          {"Z_alpha", r.z_alpha}};
}

nlohmann::json to_json(const BoundReport& b) {
  return {{"B0", b.b0}, {"B_alpha", b.b_alpha}, {"B_Z", b.b_z}, {"schrodinger_rhs", b.schrodinger_rhs}};
}

QuantityReport quantity_report_from_json(const nlohmann::json& j) {
  QuantityReport r;
  r.variance = j.at("V").get<double>();
  r.wy_skew = j.at("I").get<double>();
  r.wyd_skew = j.at("I_alpha").get<double>();
  r.wyd_anti = j.at("J_alpha").get<double>();
  r.u = j.at("U").get<double>();
  r.u_alpha = j.at("U_alpha").get<double>();
  r.k_alpha = j.at("K_alpha").get<double>();
  r.l_alpha = j.at("L_alpha").get<double>();
  r.w_alpha = j.at("W_alpha").get<double>();
  r.z_alpha = j.at("Z_alpha").get<double>();
  return r;
}

BoundReport bound_report_from_json(const nlohmann::json& j) {
  BoundReport b;
  b.b0 = j.at("B0").get<double>();
  b.b_alpha = j.at("B_alpha").get<double>();
  b.b_z = j.at("B_Z").get<double>();
  b.schrodinger_rhs = j.at("schrodinger_rhs").get<double>();
  return b;
}

}  // namespace skewlab

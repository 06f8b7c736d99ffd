#pragma once

#include <json.hpp>

#include "skewlab/hermitian.hpp"

namespace skewlab {

// Negative values in [-kClampWindow * max(1, scale), 0) are rounding and are
// clamped to zero; anything below feeds NegativeRadicand.
inline constexpr double kClampWindow = 1e-12;

struct QuantityReport {
  double variance = 0;   // V
  double wy_skew = 0;    // I   (alpha = 1/2)
  double wyd_skew = 0;   // I_alpha
  double wyd_anti = 0;   // J_alpha
  double u = 0;          // U   (alpha = 1/2)
  double u_alpha = 0;
  double k_alpha = 0;
  double l_alpha = 0;
  double w_alpha = 0;
  double z_alpha = 0;
};

struct BoundReport {
  double b0 = 0;               // 1/4 |Tr[rho [X,Y]]|^2
  double b_alpha = 0;          // 1/4 |Tr[m_alpha^2 [X,Y]]|^2
  double b_z = 0;              // 1/4 |Tr[rho^{2a} [X,Y]] Tr[rho^{2(1-a)} [X,Y]]|
  double schrodinger_rhs = 0;  // b0 + (Re Cov(X,Y))^2
};

struct SpectralForms {
  double wyd_skew = 0;
  double k_alpha = 0;
};

/// Precomputes the fractional powers of one state at one exponent so every
/// quantity for that (rho, alpha) pair shares them.
class SkewContext {
 public:
  SkewContext(DensityMatrix rho, Alpha alpha);

  const DensityMatrix& rho() const noexcept { return rho_; }
  Alpha alpha() const noexcept { return alpha_; }
  const ComplexMatrix& power() const noexcept { return power_; }        // rho^a
  const ComplexMatrix& co_power() const noexcept { return co_power_; }  // rho^{1-a}
  const ComplexMatrix& root() const noexcept { return root_; }          // rho^{1/2}
  const ComplexMatrix& mean_power() const noexcept { return mean_; }    // (rho^a + rho^{1-a})/2

  double variance(const Observable& h) const;
  Complex covariance(const Observable& a, const Observable& b) const;

  double wy_skew(const Observable& h) const;
  double wyd_skew(const Observable& h) const;
  double wyd_anti(const Observable& h) const;
  double wy_anti(const Observable& h) const;  // J_rho = J_{rho,1/2}
  double wy_u(const Observable& h) const;
  double u_alpha(const Observable& h) const;
  double k_alpha(const Observable& h) const;
  double l_alpha(const Observable& h) const;
  double w_alpha(const Observable& h) const;
  double z_alpha(const Observable& h) const;

  /// Tr[m_alpha^2 H_0^2]
  double mean_power_weight(const Observable& h) const;

  QuantityReport report(const Observable& h) const;
  BoundReport bounds(const Observable& x, const Observable& y) const;

 private:
  ComplexMatrix centered(const Observable& h) const;
  double half_commutator_form(const ComplexMatrix& a, const ComplexMatrix& b,
                              const ComplexMatrix& h0) const;
  double u_from(double v, double skew) const;

  DensityMatrix rho_;
  Alpha alpha_;
  ComplexMatrix power_;
  ComplexMatrix co_power_;
  ComplexMatrix root_;
  ComplexMatrix mean_;
};

Observable mean_power(const DensityMatrix& rho, Alpha a);

double variance(const DensityMatrix& rho, const Observable& h);
Complex covariance(const DensityMatrix& rho, const Observable& a, const Observable& b);
double wy_skew(const DensityMatrix& rho, const Observable& h);
double wyd_skew(const DensityMatrix& rho, const Observable& h, Alpha a);
double wyd_anti(const DensityMatrix& rho, const Observable& h, Alpha a);
double quantity_u(const DensityMatrix& rho, const Observable& h, Alpha a);
double quantity_k(const DensityMatrix& rho, const Observable& h, Alpha a);
double quantity_l(const DensityMatrix& rho, const Observable& h, Alpha a);
double quantity_w(const DensityMatrix& rho, const Observable& h, Alpha a);
double quantity_z(const DensityMatrix& rho, const Observable& h, Alpha a);
BoundReport bounds(const DensityMatrix& rho, const Observable& x, const Observable& y, Alpha a);
QuantityReport quantity_report(const DensityMatrix& rho, const Observable& h, Alpha a);

/// The eigenbasis sums for I_alpha and K_alpha. Works from the cached
/// spectrum only and never touches matrix_power, so it can cross-check the
/// trace forms.
SpectralForms spectral_forms(const DensityMatrix& rho, const Observable& h, Alpha a);

nlohmann::json to_json(const QuantityReport& r);
nlohmann::json to_json(const BoundReport& b);
QuantityReport quantity_report_from_json(const nlohmann::json& j);
BoundReport bound_report_from_json(const nlohmann::json& j);

}  // namespace skewlab

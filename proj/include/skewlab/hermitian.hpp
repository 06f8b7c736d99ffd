#pragma once

#include <functional>
#include <vector>

#include "skewlab/matrix.hpp"

namespace skewlab {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kDensityTol = 1e-10;
// Eigenvalues of a state at or below this are treated as exact zeros by the
// spectral calculus.
inline constexpr double kZeroEigenvalue = 1e-13;

inline constexpr double kJacobiThreshold = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues with
/// matching orthonormal eigenvector columns. Each eigenvector's first
/// nonzero component is real and positive.
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;  // column k pairs with eigenvalues[k]

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  Complex vector_component(std::size_t row, std::size_t k) const { return eigenvectors(row, k); }

  /// Σ f(λ_k) v_k v_k†
  ComplexMatrix apply(const std::function<double(double)>& f) const;
};

/// Hermitian matrix (within kHermitianTol, stored exactly Hermitian).
class Observable {
 public:
  explicit Observable(ComplexMatrix m, double tol = kHermitianTol);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }

 private:
  ComplexMatrix m_;
};

/// Exponent in [0, 1].
class Alpha {
 public:
  explicit Alpha(double value);
  static Alpha half() { return Alpha(0.5); }

  double value() const noexcept { return value_; }
  Alpha complement() const { return Alpha(1.0 - value_); }

 private:
  double value_;
};

/// Validated quantum state. Keeps the matrix as given and a cached spectrum
/// whose eigenvalues are clamped into [0, 1].
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return m_; }
  const Spectrum& spectrum() const noexcept { return spectrum_; }
  std::size_t dim() const noexcept { return m_.dim(); }

 private:
  friend DensityMatrix validate_density(const ComplexMatrix& m, double tol);
  DensityMatrix(ComplexMatrix m, Spectrum s) : m_(std::move(m)), spectrum_(std::move(s)) {}

  ComplexMatrix m_;
  Spectrum spectrum_;
};

enum class BracketKind { commutator, anticommutator };

Observable validate_observable(const ComplexMatrix& m, double tol = kHermitianTol);
DensityMatrix validate_density(const ComplexMatrix& m, double tol = kDensityTol);

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
Spectrum eigh(const Observable& h);

/// λ^p with 0^p := 0 for every p >= 0.
double eigen_power(double lambda, double p);

/// ρ^a through the spectral calculus. a = 0 yields the support projection.
Observable matrix_power(const DensityMatrix& rho, Alpha a);

ComplexMatrix bracket(const ComplexMatrix& a, const ComplexMatrix& b, BracketKind kind);
ComplexMatrix bracket(const Observable& a, const Observable& b, BracketKind kind);

/// H - Tr[ρH]·Id
Observable center(const DensityMatrix& rho, const Observable& h);

/// Tr[ρH], real for Hermitian H.
double expectation(const DensityMatrix& rho, const Observable& h);

}  // namespace skewlab

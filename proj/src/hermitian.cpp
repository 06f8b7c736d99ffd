#include "skewlab/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "skewlab/error.hpp"

namespace skewlab {

namespace {

ComplexMatrix symmetrized(const ComplexMatrix& m) {
  ComplexMatrix out = m;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    out(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.dim(); ++j) {
      const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      out(i, j) = avg;
      out(j, i) = std::conj(avg);
    }
  }
  return out;
}

void require_valid_matrix(const ComplexMatrix& m) {
  if (m.empty()) throw Error(ErrorKind::NotSquare, "empty matrix");
  if (!m.all_finite()) throw Error(ErrorKind::NonFinite, "matrix has non-finite entries");
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Applies the unitary U acting on coordinates (p, q):
//   [U_pp U_pq; U_qp U_qq] = [c, s·z; -s·conj(z), c]
// as A <- U† A U and V <- V U.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q, double c,
            double s, Complex z) {
  const std::size_t d = a.dim();
  const Complex upp = c, upq = s * z, uqp = -s * std::conj(z), uqq = c;
  for (std::size_t k = 0; k < d; ++k) {
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * upp + akq * uqp;
    a(k, q) = akp * upq + akq * uqq;
  }
  for (std::size_t k = 0; k < d; ++k) {
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
  }
  for (std::size_t k = 0; k < d; ++k) {
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * upp + vkq * uqp;
    v(k, q) = vkp * upq + vkq * uqq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

ComplexMatrix Spectrum::apply(const std::function<double(double)>& f) const {
  const std::size_t d = dim();
  ComplexMatrix out(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double w = f(eigenvalues[k]);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) {
      const Complex vi = w * eigenvectors(i, k);
      for (std::size_t j = 0; j < d; ++j) out(i, j) += vi * std::conj(eigenvectors(j, k));
    }
  }
  return out;
}

Observable::Observable(ComplexMatrix m, double tol) {
  require_valid_matrix(m);
  const double defect = hermiticity_defect(m);
  if (defect > tol) {
    throw Error(ErrorKind::NotHermitian, "max |M - M^dagger| = " + std::to_string(defect));
  }
  m_ = symmetrized(m);
}

Alpha::Alpha(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorKind::BadAlpha, "alpha must lie in [0, 1], got " + std::to_string(value));
  }
}

Observable validate_observable(const ComplexMatrix& m, double tol) { return Observable(m, tol); }

DensityMatrix validate_density(const ComplexMatrix& m, double tol) {
  const Observable h(m);
  Spectrum s = eigh(h);
  const double lowest = s.eigenvalues.front();
  if (lowest < -tol) {
    throw Error(ErrorKind::NotPositive, "smallest eigenvalue " + std::to_string(lowest));
  }
  const double tr = h.matrix().trace().real();
  if (std::abs(tr - 1.0) > tol) {
    throw Error(ErrorKind::TraceNotOne, "trace " + std::to_string(tr));
  }
  for (double& lambda : s.eigenvalues) {
    if (lambda <= kZeroEigenvalue) lambda = 0.0;
    lambda = std::min(lambda, 1.0);
  }
  return DensityMatrix(h.matrix(), std::move(s));
}

Spectrum eigh(const Observable& h) {
  const std::size_t d = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(d);
  const double scale = a.frobenius_norm();

  bool converged = scale == 0.0;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    if (off_diagonal_norm(a) <= kJacobiThreshold * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        rotate(a, v, p, q, c, t * c, apq / mag);
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > kJacobiThreshold * scale) {
    throw Error(ErrorKind::NoConvergence,
                "Jacobi did not converge in " + std::to_string(kJacobiMaxSweeps) + " sweeps");
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  Spectrum out;
  out.eigenvalues.resize(d);
  out.eigenvectors = ComplexMatrix(d);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = a(src, src).real();
    Complex phase = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double mag = std::abs(v(i, src));
      if (mag > 1e-10) {
        phase = std::conj(v(i, src)) / mag;
        break;
      }
    }
    for (std::size_t i = 0; i < d; ++i) out.eigenvectors(i, k) = v(i, src) * phase;
    // The leading component is exactly real after the phase fix.
    for (std::size_t i = 0; i < d; ++i) {
      if (std::abs(out.eigenvectors(i, k)) > 1e-10) {
        out.eigenvectors(i, k) = out.eigenvectors(i, k).real();
        break;
      }
    }
  }
  return out;
}

double eigen_power(double lambda, double p) {
  if (lambda <= 0.0) return 0.0;
  if (p == 0.0) return 1.0;
  return std::pow(lambda, p);
}

Observable matrix_power(const DensityMatrix& rho, Alpha a) {
  const double p = a.value();
  return Observable(rho.spectrum().apply([p](double lambda) { return eigen_power(lambda, p); }));
}

ComplexMatrix bracket(const ComplexMatrix& a, const ComplexMatrix& b, BracketKind kind) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  const ComplexMatrix ab = a * b;
  const ComplexMatrix ba = b * a;
  return kind == BracketKind::commutator ? ab - ba : ab + ba;
}

ComplexMatrix bracket(const Observable& a, const Observable& b, BracketKind kind) {
  return bracket(a.matrix(), b.matrix(), kind);
}

double expectation(const DensityMatrix& rho, const Observable& h) {
  if (rho.dim() != h.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "state " + std::to_string(rho.dim()) + " vs observable " + std::to_string(h.dim()));
  }
  return trace_product(rho.matrix(), h.matrix()).real();
}

Observable center(const DensityMatrix& rho, const Observable& h) {
  const double mean = expectation(rho, h);
  ComplexMatrix out = h.matrix();
  for (std::size_t i = 0; i < out.dim(); ++i) out(i, i) -= mean;
  return Observable(std::move(out));
}

}  // namespace skewlab

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "signqr/core.hpp"

namespace signqr {

// Scaled Frobenius norm, same two-pass scheme as euclidean_norm, column-major
// visit order.
template <class Derived>
typename Derived::Scalar frobenius_norm(const Eigen::MatrixBase<Derived>& b) {
  using Scalar = typename Derived::Scalar;
  Scalar scale(0);
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = 0; i < b.rows(); ++i) {
      const Scalar a = std::abs(b(i, j));
      if (a > scale) scale = a;
    }
  }
  if (scale == Scalar(0)) return Scalar(0);
  Scalar sum(0);
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = 0; i < b.rows(); ++i) {
      const Scalar t = b(i, j) / scale;
      sum += t * t;
    }
  }
  return scale * std::sqrt(sum);
}

template <class Scalar>
struct SpectralNormResult {
  Scalar value;
  int iterations;
  bool converged;  // false when the iteration cap hit or the estimate stagnated
};

// Largest singular value by power iteration on B'B. Start vector is the
// normalized all-ones vector; stop once the Rayleigh-quotient estimate moves
// by less than 1e-12 relative (2 eps in binary32, where 1e-12 is below the
// representable resolution), or after 10000 iterations. The estimate is a
// Rayleigh quotient, hence a lower bound on sigma_max^2 up to rounding; it is
// capped at the Frobenius norm and flagged degraded if it falls below the
// largest column norm, which brackets sigma_max from below.
template <class Scalar>
SpectralNormResult<Scalar> spectral_norm_detailed(const Matrix<Scalar>& b) {
  constexpr int max_iterations = 10000;
  const Index n = b.cols();
  const Scalar fro = frobenius_norm(b);
  if (n == 0 || b.rows() == 0 || fro == Scalar(0)) return {Scalar(0), 0, true};

  Scalar max_col_norm(0);
  for (Index j = 0; j < n; ++j) max_col_norm = std::max(max_col_norm, euclidean_norm(b.col(j)));

  const Scalar tol = std::max(Scalar(1e-12), Scalar(2) * machine_epsilon<Scalar>);
  Vector<Scalar> x = Vector<Scalar>::Constant(n, Scalar(1));
  x /= euclidean_norm(x);
  Vector<Scalar> bx(b.rows());
  Vector<Scalar> y(n);
  Scalar lambda(0);
  Scalar prev = std::numeric_limits<Scalar>::quiet_NaN();
  bool converged = false;
  int it = 0;
  while (it < max_iterations) {
    ++it;
    bx.noalias() = b * x;
    y.noalias() = b.transpose() * bx;
    const Scalar ny = euclidean_norm(y);
    if (ny == Scalar(0)) {
      // x landed in the null space of B'B; restart from the heaviest column's
      // axis, which cannot be annihilated.
      Index jmax = 0;
      Scalar best(-1);
      for (Index j = 0; j < n; ++j) {
        const Scalar cn = euclidean_norm(b.col(j));
        if (cn > best) {
          best = cn;
          jmax = j;
        }
      }
      x = Vector<Scalar>::Zero(n);
      x(jmax) = Scalar(1);
      prev = std::numeric_limits<Scalar>::quiet_NaN();
      continue;
    }
    lambda = x.dot(y);  // Rayleigh quotient of B'B at the unit vector x
    if (std::abs(lambda - prev) <= tol * std::abs(lambda)) {
      converged = true;
      break;
    }
    prev = lambda;
    x = y / ny;
  }

  Scalar value = std::sqrt(std::max(lambda, Scalar(0)));
  value = std::min(value, fro);
  if (value < max_col_norm * (Scalar(1) - Scalar(1e-10))) converged = false;
  return {value, it, converged};
}

template <class Scalar>
Scalar spectral_norm(const Matrix<Scalar>& b) {
  return spectral_norm_detailed(b).value;
}

// The quantities plotted per factorization: ||A - QR|| in the 2-norm and
// Frobenius norm, ||Q'Q - I||, and the 2-norm of the first column of A - QR.
template <class Scalar>
struct ErrorReport {
  Scalar backward_error_2norm;
  Scalar backward_error_frobenius;
  Scalar orthogonality_loss;
  Scalar first_column_error;
};

// Forms E = A - Q*R densely in working precision and measures it. Pure and
// deterministic: identical inputs give bitwise identical reports.
template <class Scalar>
ErrorReport<Scalar> evaluate(const Matrix<Scalar>& a, const Matrix<Scalar>& q,
                             const Matrix<Scalar>& r) {
  const Index m = a.rows();
  if (q.rows() != m || q.cols() != m || r.rows() != m || r.cols() != a.cols())
    throw std::invalid_argument("evaluate: dimension mismatch");
  const Matrix<Scalar> e = a - q * r;
  const Matrix<Scalar> gram_defect = q.transpose() * q - Matrix<Scalar>::Identity(m, m);
  ErrorReport<Scalar> report;
  report.backward_error_2norm = spectral_norm(e);
  report.backward_error_frobenius = frobenius_norm(e);
  report.orthogonality_loss = spectral_norm(gram_defect);
  report.first_column_error = euclidean_norm(e.col(0));
  return report;
}

}  // namespace signqr

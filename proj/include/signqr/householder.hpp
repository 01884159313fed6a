#pragma once

#include <cassert>
#include <stdexcept>
#include <utility>
#include <vector>

#include "signqr/core.hpp"

namespace signqr {

// Choice of sigma in v = x - sigma*||x||*e1. `stable` (sigma = -sgn(x1))
// avoids cancellation in the first component; `wrong` (sigma = +sgn(x1)) is
// the cancellation-prone choice, kept selectable on purpose.
enum class SignPolicy { stable, wrong };

template <class Scalar>
inline Scalar policy_sigma(SignPolicy policy, Scalar x1) {
  return policy == SignPolicy::stable ? -sgn(x1) : sgn(x1);
}

inline const char* policy_name(SignPolicy policy) {
  return policy == SignPolicy::stable ? "stable" : "wrong";
}

// One reflector P = I - (2/v'v) v v', acting on rows offset..offset+v.size()-1.
// vtv == 0 marks the zero-v degenerate case, where P is the identity by
// convention and no division by v'v ever happens.
template <class Scalar>
struct Reflector {
  Vector<Scalar> v;
  Scalar vtv;
  Index offset;

  bool is_identity() const { return vtv == Scalar(0); }
};

template <class Scalar>
Reflector<Scalar> make_reflector(Vector<Scalar> v, Index offset) {
  Scalar vtv(0);
  for (Index i = 0; i < v.size(); ++i) vtv += v(i) * v(i);
  return Reflector<Scalar>{std::move(v), vtv, offset};
}

template <class Scalar>
struct HouseholderVector {
  Vector<Scalar> v;
  Scalar beta;  // sigma*||x||, the intended value of (P x)_1
};

// v = x - sigma*||x||*e1, evaluated exactly as written in working precision.
// No rearrangement: under the wrong policy the first component is allowed to
// cancel catastrophically, which is the behavior under study.
template <class Scalar>
HouseholderVector<Scalar> householder_vector(const Vector<Scalar>& x, SignPolicy policy) {
  if (x.size() < 1) throw std::invalid_argument("householder_vector: empty vector");
  const Scalar norm = euclidean_norm(x);
  const Scalar beta = policy_sigma(policy, x(0)) * norm;
  Vector<Scalar> v = x;
  v(0) -= beta;
  return HouseholderVector<Scalar>{std::move(v), beta};
}

// Overwrites columns first_col.. of b with P*b, touching rows offset.. only.
// Two passes per column: w = v' * b(offset.., j), then b(offset.., j) -= (2/vtv)*w * v.
// Identity reflectors leave b untouched.
template <class Scalar>
void apply_reflector_left(const Reflector<Scalar>& refl, Matrix<Scalar>& b, Index first_col = 0) {
  assert(refl.offset >= 0 && refl.offset + refl.v.size() == b.rows() &&
         "reflector must span rows offset..m-1");
  assert(first_col >= 0 && first_col < b.cols() && "first_col out of range");
  if (refl.is_identity()) return;
  const Index len = refl.v.size();
  const Scalar two_over_vtv = Scalar(2) / refl.vtv;
  for (Index j = first_col; j < b.cols(); ++j) {
    Scalar w(0);
    for (Index i = 0; i < len; ++i) w += refl.v(i) * b(refl.offset + i, j);
    const Scalar tau = two_over_vtv * w;
    for (Index i = 0; i < len; ++i) b(refl.offset + i, j) -= tau * refl.v(i);
  }
}

template <class Scalar>
struct QrFactorization {
  std::vector<Reflector<Scalar>> reflectors;  // P1..Pn in application order
  Matrix<Scalar> r;                           // m x n, exactly upper trapezoidal
  SignPolicy policy;
  Index rows = 0;
  Index cols = 0;
};

// Column-by-column Householder reduction, plain level-2 scheme: step k builds
// a reflector from the subcolumn a(k.., k) and applies it to columns k..n-1
// of the working copy. R takes beta on the diagonal and exact zeros below it;
// the rounding residue of the annihilated entries is discarded deliberately.
// The input matrix is left untouched.
template <class Scalar>
QrFactorization<Scalar> qr_factorize(const Matrix<Scalar>& a, SignPolicy policy) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (n < 1 || m < n) throw std::invalid_argument("qr_factorize: need rows >= cols >= 1");

  Matrix<Scalar> b = a;
  QrFactorization<Scalar> f;
  f.policy = policy;
  f.rows = m;
  f.cols = n;
  f.reflectors.reserve(static_cast<std::size_t>(n));
  Vector<Scalar> beta(n);
  for (Index k = 0; k < n; ++k) {
    const Vector<Scalar> x = b.col(k).segment(k, m - k);
    HouseholderVector<Scalar> hv = householder_vector(x, policy);
    beta(k) = hv.beta;
    Reflector<Scalar> p = make_reflector(std::move(hv.v), k);
    apply_reflector_left(p, b, k);
    f.reflectors.push_back(std::move(p));
  }
  f.r = Matrix<Scalar>::Zero(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) f.r(i, j) = b(i, j);
    f.r(j, j) = beta(j);
  }
  return f;
}

// Q = P1 P2 ... Pn, accumulated right to left onto the identity so each
// reflector is applied exactly once.
template <class Scalar>
Matrix<Scalar> form_q(const QrFactorization<Scalar>& f) {
  Matrix<Scalar> q = Matrix<Scalar>::Identity(f.rows, f.rows);
  for (auto it = f.reflectors.rbegin(); it != f.reflectors.rend(); ++it) {
    apply_reflector_left(*it, q, 0);
  }
  return q;
}

}  // namespace signqr

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "signqr/householder.hpp"
#include "signqr/metrics.hpp"
#include "test_util.hpp"

using namespace signqr;

TEST_CASE("frobenius_norm basics") {
  Matrix<double> b(2, 2);
  b << 3.0, 0.0, 4.0, 0.0;
  CHECK(bit_equal(frobenius_norm(b), 5.0));
  CHECK(bit_equal(frobenius_norm(Matrix<double>(Matrix<double>::Zero(3, 2))), 0.0));
}

TEST_CASE("spectral_norm of a diagonal matrix") {
  Matrix<double> b(2, 2);
  b << 3.0, 0.0, 0.0, 1.0;
  CHECK(std::abs(spectral_norm(b) - 3.0) <= 1e-10 * 3.0);
}

TEST_CASE("spectral_norm of the nilpotent shift") {
  Matrix<double> b(2, 2);
  b << 0.0, 1.0, 0.0, 0.0;
  CHECK(std::abs(spectral_norm(b) - 1.0) <= 1e-10);
}

TEST_CASE("spectral_norm of the zero matrix is exactly zero") {
  const auto res = spectral_norm_detailed(Matrix<double>(Matrix<double>::Zero(4, 3)));
  CHECK(bit_equal(res.value, 0.0));
  CHECK(res.converged);
}

TEST_CASE("spectral_norm recovers when the start vector spans the null space") {
  // B'B annihilates the all-ones start exactly; the restart path must engage.
  Matrix<double> b(2, 2);
  b << 1.0, -1.0, 0.0, 0.0;
  const auto res = spectral_norm_detailed(b);
  CHECK(res.converged);
  CHECK(std::abs(res.value - std::sqrt(2.0)) <= 1e-10);
}

TEST_CASE("spectral_norm matches the closed-form two-column oracle") {
  RngState rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    const Index m = rep % 2 == 0 ? 3 : 2;
    const Matrix<double> b = test_util::random_matrix<double>(m, 2, rng);
    const double got = spectral_norm(b);
    const double want = test_util::gram_2x2_largest_singular_value(b);
    CHECK(std::abs(got - want) <= 1e-10 * want);
  }
}

TEST_CASE("spectral_norm lies between the largest column norm and the Frobenius norm") {
  RngState rng(23);
  for (int rep = 0; rep < 100; ++rep) {
    const Index m = 2 + static_cast<Index>(rng.next_u64() % 6);
    const Index n = 1 + static_cast<Index>(rng.next_u64() % 6);
    Matrix<double> b(m, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < m; ++i) b(i, j) = rng_uniform(rng) - 0.5;
    const auto res = spectral_norm_detailed(b);
    CHECK(res.converged);
    double max_col = 0;
    for (Index j = 0; j < n; ++j) max_col = std::max(max_col, euclidean_norm(b.col(j)));
    CHECK(res.value >= max_col * (1.0 - 1e-10));
    CHECK(res.value <= frobenius_norm(b));
  }
}

TEST_CASE("spectral_norm is absolutely homogeneous to 1e-10") {
  RngState rng(29);
  const Matrix<double> b = test_util::random_matrix<double>(4, 3, rng);
  const double base = spectral_norm(b);
  for (double c : {2.0, 0.5, -3.0, 1e-8}) {
    const Matrix<double> scaled = c * b;
    CHECK(std::abs(spectral_norm(scaled) - std::abs(c) * base) <= 1e-10 * std::abs(c) * base);
  }
}

TEST_CASE("evaluate on an exact factorization returns all zeros") {
  const Matrix<double> eye = Matrix<double>::Identity(3, 3);
  const auto report = evaluate(eye, eye, eye);
  CHECK(bit_equal(report.backward_error_2norm, 0.0));
  CHECK(bit_equal(report.backward_error_frobenius, 0.0));
  CHECK(bit_equal(report.orthogonality_loss, 0.0));
  CHECK(bit_equal(report.first_column_error, 0.0));
}

TEST_CASE("evaluate reproduces the exact first-column error in the rounded-norm regime") {
  const double delta = 1e-10;
  RngState rng(1);
  Matrix<double> a(3, 2);
  a << 1.0, rng_uniform(rng), delta, rng_uniform(rng), 0.0, rng_uniform(rng);

  const auto wrong = qr_factorize(a, SignPolicy::wrong);
  const auto wrong_report = evaluate(a, form_q(wrong), wrong.r);
  CHECK(bit_equal(wrong_report.first_column_error, delta));

  const auto stable = qr_factorize(a, SignPolicy::stable);
  const auto stable_report = evaluate(a, form_q(stable), stable.r);
  CHECK(stable_report.backward_error_2norm <= 100 * machine_epsilon<double>);
}

TEST_CASE("evaluate is bitwise deterministic") {
  RngState rng(31);
  const Matrix<double> a = test_util::random_matrix<double>(5, 3, rng);
  const auto f = qr_factorize(a, SignPolicy::stable);
  const Matrix<double> q = form_q(f);
  const auto r1 = evaluate(a, q, f.r);
  const auto r2 = evaluate(a, q, f.r);
  CHECK(bit_equal(r1.backward_error_2norm, r2.backward_error_2norm));
  CHECK(bit_equal(r1.backward_error_frobenius, r2.backward_error_frobenius));
  CHECK(bit_equal(r1.orthogonality_loss, r2.orthogonality_loss));
  CHECK(bit_equal(r1.first_column_error, r2.first_column_error));
}

TEST_CASE("evaluate rejects nonconforming shapes") {
  const Matrix<double> a = Matrix<double>::Zero(3, 2);
  const Matrix<double> q = Matrix<double>::Identity(3, 3);
  const Matrix<double> r_bad = Matrix<double>::Zero(2, 2);
  CHECK_THROWS_AS((void)evaluate(a, q, r_bad), std::invalid_argument);
  const Matrix<double> q_bad = Matrix<double>::Identity(2, 2);
  CHECK_THROWS_AS((void)evaluate(a, q_bad, Matrix<double>(Matrix<double>::Zero(3, 2))),
                  std::invalid_argument);
}

TEST_CASE("error reports are nonnegative and norm-ordered") {
  RngState rng(37);
  for (int rep = 0; rep < 50; ++rep) {
    const Index m = 2 + static_cast<Index>(rng.next_u64() % 5);
    const Index n = 2 + static_cast<Index>(rng.next_u64() % (static_cast<std::uint64_t>(m) - 1));
    const Matrix<double> a = test_util::random_matrix<double>(m, n, rng);
    const auto policy = rep % 2 == 0 ? SignPolicy::stable : SignPolicy::wrong;
    const auto f = qr_factorize(a, policy);
    const auto report = evaluate(a, form_q(f), f.r);
    CHECK(report.backward_error_2norm >= 0.0);
    CHECK(report.backward_error_frobenius >= 0.0);
    CHECK(report.orthogonality_loss >= 0.0);
    CHECK(report.first_column_error >= 0.0);
    CHECK(report.backward_error_2norm <= report.backward_error_frobenius);
  }
}

TEST_CASE("spectral_norm works in binary32") {
  Matrix<float> b(2, 2);
  b << 3.0f, 0.0f, 0.0f, 1.0f;
  CHECK(std::abs(spectral_norm(b) - 3.0f) <= 1e-5f);
}

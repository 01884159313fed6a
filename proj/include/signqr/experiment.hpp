#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "signqr/core.hpp"
#include "signqr/householder.hpp"
#include "signqr/metrics.hpp"

namespace signqr {

enum class Precision { binary64, binary32 };

struct ExperimentConfig {
  Index m = 3;
  Index n = 2;
  int p_min = 1;
  int p_max = 16;
  std::uint64_t seed = 1;
  Precision precision = Precision::binary64;
};

// delta = 10^-p, correctly rounded to binary64 and then into the working
// precision (the narrowing never double-rounds for p = 1..16).
template <class Scalar>
Scalar delta_for_exponent(int p) {
  return static_cast<Scalar>(std::pow(10.0, -static_cast<double>(p)));
}

// One plotted point of the sweep.
template <class Scalar>
struct SweepRecord {
  int p;
  Scalar delta;
  Scalar err_stable;
  Scalar err_wrong;
  Scalar orth_stable;
  Scalar orth_wrong;
  Scalar first_col_err_wrong;
};

// First column [1, delta, 0, ..., 0]'; columns 2..n drawn uniform [0,1) in
// column-major order. A fixed seed reproduces the matrix bit for bit.
template <class Scalar>
Matrix<Scalar> build_sweep_matrix(Scalar delta, Index m, Index n, RngState& rng) {
  if (n < 2 || m < n) throw std::invalid_argument("build_sweep_matrix: need m >= n >= 2");
  Matrix<Scalar> a = Matrix<Scalar>::Zero(m, n);
  a(0, 0) = Scalar(1);
  a(1, 0) = delta;
  for (Index j = 1; j < n; ++j)
    for (Index i = 0; i < m; ++i) a(i, j) = rng_uniform<Scalar>(rng);
  return a;
}

template <class Scalar>
struct PolicyErrors {
  Scalar backward_error;
  Scalar orthogonality_loss;
  Scalar first_column_error;
};

template <class Scalar>
PolicyErrors<Scalar> factor_and_evaluate(const Matrix<Scalar>& a, SignPolicy policy) {
  const QrFactorization<Scalar> f = qr_factorize(a, policy);
  const Matrix<Scalar> q = form_q(f);
  const ErrorReport<Scalar> report = evaluate(a, q, f.r);
  return {report.backward_error_2norm, report.orthogonality_loss, report.first_column_error};
}

// The delta sweep: for each p in [p_min, p_max] build the matrix from a fresh
// generator seeded with cfg.seed, so every p and both policies factor the
// same random columns, then record both policies' errors. Sequential and
// deterministic; records ordered by increasing p.
template <class Scalar>
std::vector<SweepRecord<Scalar>> run_sweep(const ExperimentConfig& cfg) {
  if (cfg.n < 2 || cfg.m < cfg.n) throw std::invalid_argument("run_sweep: need m >= n >= 2");
  if (cfg.p_min > cfg.p_max) throw std::invalid_argument("run_sweep: need p_min <= p_max");
  std::vector<SweepRecord<Scalar>> records;
  records.reserve(static_cast<std::size_t>(cfg.p_max - cfg.p_min + 1));
  for (int p = cfg.p_min; p <= cfg.p_max; ++p) {
    const Scalar delta = delta_for_exponent<Scalar>(p);
    RngState rng(cfg.seed);
    const Matrix<Scalar> a = build_sweep_matrix<Scalar>(delta, cfg.m, cfg.n, rng);
    const PolicyErrors<Scalar> stable = factor_and_evaluate(a, SignPolicy::stable);
    const PolicyErrors<Scalar> wrong = factor_and_evaluate(a, SignPolicy::wrong);
    records.push_back(SweepRecord<Scalar>{p, delta, stable.backward_error, wrong.backward_error,
                                          stable.orthogonality_loss, wrong.orthogonality_loss,
                                          wrong.first_column_error});
  }
  return records;
}

enum class LeftBranchStatus { confirmed, refuted, inapplicable };

struct LeftBranchReport {
  LeftBranchStatus status;
  bool v_is_delta_e2;        // first reflector's v == [0, delta, 0, ...] bitwise
  bool qr_first_col_is_e1;   // column 1 of Q*R == e1 bitwise
  bool error_equals_delta;   // first-column error of A - QR == delta bitwise

  bool confirmed() const { return status == LeftBranchStatus::confirmed; }
  bool applicable() const { return status != LeftBranchStatus::inapplicable; }
};

// Bit-exact check of the small-delta mechanism under the wrong sign: once
// fl(1 + delta^2) == 1 the computed column norm is exactly 1, the first
// reflector's v is exactly delta*e2, column 1 of Q*R is exactly e1, and the
// first-column error is exactly delta. Inapplicable when fl(1 + delta^2) != 1.
template <class Scalar>
LeftBranchReport verify_left_branch(Scalar delta, const ExperimentConfig& cfg) {
  const Scalar one(1);
  if (one + delta * delta != one)
    return {LeftBranchStatus::inapplicable, false, false, false};

  RngState rng(cfg.seed);
  const Matrix<Scalar> a = build_sweep_matrix<Scalar>(delta, cfg.m, cfg.n, rng);
  const QrFactorization<Scalar> f = qr_factorize(a, SignPolicy::wrong);
  const Matrix<Scalar> q = form_q(f);
  const ErrorReport<Scalar> report = evaluate(a, q, f.r);

  const Vector<Scalar>& v = f.reflectors.front().v;
  bool v_ok = true;
  for (Index i = 0; i < v.size(); ++i) {
    const Scalar want = (i == 1) ? delta : Scalar(0);
    v_ok = v_ok && bit_equal(v(i), want);
  }

  const Matrix<Scalar> qr = q * f.r;
  bool col_ok = true;
  for (Index i = 0; i < qr.rows(); ++i) {
    const Scalar want = (i == 0) ? Scalar(1) : Scalar(0);
    col_ok = col_ok && bit_equal(qr(i, 0), want);
  }

  const bool err_ok = bit_equal(report.first_column_error, delta);
  const bool all = v_ok && col_ok && err_ok;
  return {all ? LeftBranchStatus::confirmed : LeftBranchStatus::refuted, v_ok, col_ok, err_ok};
}

template <class Scalar>
struct ProbeSummary {
  long trials;
  Scalar max_err_stable;
  Scalar max_err_wrong;
  Scalar err_wrong_q50;
  Scalar err_wrong_q90;
  Scalar err_wrong_q99;
  Scalar conjecture_margin;  // max_err_wrong / sqrt(machine epsilon)
};

// Backward error of one already-scaled matrix under both policies.
template <class Scalar>
std::pair<Scalar, Scalar> probe_single(const Matrix<Scalar>& a) {
  const Scalar err_stable = factor_and_evaluate(a, SignPolicy::stable).backward_error;
  const Scalar err_wrong = factor_and_evaluate(a, SignPolicy::wrong).backward_error;
  return {err_stable, err_wrong};
}

// Random corpus probe: matrices with uniform [0,1) entries at sizes up to
// cfg.m x min(size, cfg.n), scaled to spectral norm 1. Every third trial gets
// the adversarial first column [1, delta, 0, ...]' with delta cycling through
// 10^-1..10^-16 so the cancellation regime is always represented. Reports the
// wrong-sign error distribution and its margin against sqrt(eps); asserts
// nothing about it.
template <class Scalar>
ProbeSummary<Scalar> probe_corpus(const ExperimentConfig& cfg, long trials) {
  if (trials < 1) throw std::invalid_argument("probe_corpus: need trials >= 1");
  if (cfg.m < 2 || cfg.n < 2) throw std::invalid_argument("probe_corpus: need m, n >= 2");
  RngState rng(cfg.seed);
  Scalar max_stable(0);
  Scalar max_wrong(0);
  std::vector<Scalar> wrong_errors;
  wrong_errors.reserve(static_cast<std::size_t>(trials));
  for (long t = 0; t < trials; ++t) {
    const Index m = 2 + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(cfg.m - 1));
    const Index n_cap = std::min(m, cfg.n);
    const Index n = 2 + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(n_cap - 1));
    Matrix<Scalar> a(m, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < m; ++i) a(i, j) = rng_uniform<Scalar>(rng);
    if (t % 3 == 2) {
      const int p = 1 + static_cast<int>((t / 3) % 16);
      a.col(0).setZero();
      a(0, 0) = Scalar(1);
      a(1, 0) = delta_for_exponent<Scalar>(p);
    }
    const Scalar sigma = spectral_norm(a);
    if (sigma > Scalar(0)) a /= sigma;
    const auto [err_stable, err_wrong] = probe_single(a);
    max_stable = std::max(max_stable, err_stable);
    max_wrong = std::max(max_wrong, err_wrong);
    wrong_errors.push_back(err_wrong);
  }
  std::sort(wrong_errors.begin(), wrong_errors.end());
  const auto quantile = [&](double q) {
    const auto rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(wrong_errors.size())));
    return wrong_errors[std::max<std::size_t>(rank, 1) - 1];
  };
  ProbeSummary<Scalar> summary;
  summary.trials = trials;
  summary.max_err_stable = max_stable;
  summary.max_err_wrong = max_wrong;
  summary.err_wrong_q50 = quantile(0.50);
  summary.err_wrong_q90 = quantile(0.90);
  summary.err_wrong_q99 = quantile(0.99);
  summary.conjecture_margin = max_wrong / std::sqrt(machine_epsilon<Scalar>);
  return summary;
}

}  // namespace signqr

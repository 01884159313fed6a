#pragma once

#include <Eigen/Core>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace signqr {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

// Unit roundoff scale of the working precision: 2^-52 (binary64), 2^-23 (binary32).
template <class Scalar>
inline constexpr Scalar machine_epsilon = std::numeric_limits<Scalar>::epsilon();

// Sign with sgn(0) = sgn(-0) = +1 (IEEE compares -0 equal to 0).
template <class Scalar>
inline Scalar sgn(Scalar x) {
  return x < Scalar(0) ? Scalar(-1) : Scalar(1);
}

// True iff a and b carry identical bit patterns; distinguishes +0 from -0
// and never equates NaNs with anything but their own payload.
inline bool bit_equal(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}
inline bool bit_equal(float a, float b) {
  return std::bit_cast<std::uint32_t>(a) == std::bit_cast<std::uint32_t>(b);
}

// Overflow-safe 2-norm: s = max|x_i|, result s * sqrt(sum (x_i/s)^2).
// Both passes run in fixed index order entirely in Scalar precision, so the
// result is reproducible bit for bit. The sum of squares carries a Neumaier
// compensation term (still Scalar precision, not extended): a plain recursive
// sum drifts past 1e-14 relative around a million entries, while the
// compensated sum stays at the rounding floor. When a single term dominates,
// fl(sum + comp) equals the plainly rounded sum, so rounded-norm cases such
// as fl(||[1, 1e-10, 0]||) = 1 come out identical to the textbook recursion.
template <class Derived>
typename Derived::Scalar euclidean_norm(const Eigen::MatrixBase<Derived>& x) {
  static_assert(Derived::IsVectorAtCompileTime, "euclidean_norm expects a vector expression");
  using Scalar = typename Derived::Scalar;
  const Index n = x.size();
  Scalar scale(0);
  for (Index i = 0; i < n; ++i) {
    const Scalar a = std::abs(x(i));
    if (a > scale) scale = a;
  }
  if (scale == Scalar(0)) return Scalar(0);
  Scalar sum(0);
  Scalar comp(0);
  for (Index i = 0; i < n; ++i) {
    const Scalar t = x(i) / scale;
    const Scalar term = t * t;
    const Scalar next = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - next) + term;
    else
      comp += (term - next) + sum;
    sum = next;
  }
  return scale * std::sqrt(sum + comp);
}

// splitmix64: a 64-bit counter generator. Identical seeds give identical
// streams on every platform; single-owner, sequential use.
class RngState {
 public:
  explicit RngState(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Next value uniform in [0, 1): 53 high bits of the stream scaled into a
// binary64, then rounded into the working precision.
template <class Scalar = double>
Scalar rng_uniform(RngState& state) {
  const double u = static_cast<double>(state.next_u64() >> 11) * 0x1.0p-53;
  return static_cast<Scalar>(u);
}

}  // namespace signqr

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "signqr/core.hpp"
#include "test_util.hpp"

using namespace signqr;
using test_util::ulps_apart;

TEST_CASE("sgn sign convention") {
  CHECK(sgn(3.5) == 1.0);
  CHECK(sgn(0.0) == 1.0);
  CHECK(sgn(-0.0) == 1.0);  // -0 compares equal to 0
  CHECK(sgn(-1e-300) == -1.0);
  CHECK(sgn(2.0f) == 1.0f);
  CHECK(sgn(-2.0f) == -1.0f);
}

TEST_CASE("euclidean_norm on exact cases") {
  Vector<double> x(2);
  x << 3.0, 4.0;
  CHECK(bit_equal(euclidean_norm(x), 5.0));

  // 1 + 1e-20 rounds to 1 in binary64, so the computed norm is precisely 1.
  Vector<double> y(3);
  y << 1.0, 1e-10, 0.0;
  CHECK(bit_equal(euclidean_norm(y), 1.0));

  Vector<double> zero = Vector<double>::Zero(4);
  CHECK(bit_equal(euclidean_norm(zero), 0.0));
}

TEST_CASE("euclidean_norm is overflow safe near the representable maximum") {
  Vector<double> x(2);
  x << 1e300, 1e300;
  const double got = euclidean_norm(x);
  CHECK(std::isfinite(got));
  // sqrt(2)*1e300 evaluated in extended precision
  CHECK(ulps_apart(got, 1.4142135623730952e300) <= 4);
}

TEST_CASE("euclidean_norm accepts column expressions") {
  Matrix<double> a(2, 2);
  a << 3.0, 0.0, 4.0, 7.0;
  CHECK(bit_equal(euclidean_norm(a.col(0)), 5.0));
}

TEST_CASE("euclidean_norm absolute homogeneity within 4 ulp") {
  RngState rng(101);
  const double factors[] = {0.5, 3.0, -7.25, 1e-120, 1e120};
  for (int len : {1, 2, 5, 33}) {
    Vector<double> x(len);
    for (Index i = 0; i < len; ++i) x(i) = rng_uniform(rng) - 0.5;
    const double base = euclidean_norm(x);
    for (double c : factors) {
      const Vector<double> scaled = c * x;
      CHECK(ulps_apart(euclidean_norm(scaled), std::abs(c) * base) <= 4);
    }
  }
}

TEST_CASE("euclidean_norm is bitwise repeatable") {
  RngState rng(7);
  Vector<double> x(100);
  for (Index i = 0; i < x.size(); ++i) x(i) = rng_uniform(rng);
  CHECK(bit_equal(euclidean_norm(x), euclidean_norm(x)));
}

TEST_CASE("euclidean_norm agrees with a compensated-summation oracle") {
  for (Index len : {Index(10), Index(1000), Index(100000), Index(1000000)}) {
    RngState rng(2000 + static_cast<std::uint64_t>(len));
    Vector<double> x(len);
    for (Index i = 0; i < len; ++i) x(i) = rng_uniform(rng);  // max |x_i| <= 1
    const double got = euclidean_norm(x);
    const double want = test_util::compensated_norm(x);
    CHECK(std::isfinite(got));
    CHECK(std::abs(got - want) <= 1e-14 * want);
  }
}

TEST_CASE("rng_uniform stays in [0,1) and is deterministic by seed") {
  RngState a(42);
  RngState b(42);
  for (int i = 0; i < 1000; ++i) {
    const double ua = rng_uniform(a);
    const double ub = rng_uniform(b);
    CHECK(bit_equal(ua, ub));
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
  }
}

TEST_CASE("rng stream is pinned") {
  // First draws of seed 42, computed independently from the splitmix64
  // definition; a change here is a break in the documented stream contract.
  RngState rng(42);
  CHECK(bit_equal(rng_uniform(rng), 0.7415648787718233));
  CHECK(bit_equal(rng_uniform(rng), 0.1599103928769201));
  CHECK(bit_equal(rng_uniform(rng), 0.27860113025513866));
}

TEST_CASE("rng sample mean over 1e5 draws") {
  RngState rng(42);
  double total = 0.0;
  for (int i = 0; i < 100000; ++i) total += rng_uniform(rng);
  const double mean = total / 100000.0;
  CHECK(mean >= 0.45);
  CHECK(mean <= 0.55);
}

TEST_CASE("binary32 draws are the binary64 draws rounded once") {
  RngState a(9);
  RngState b(9);
  for (int i = 0; i < 100; ++i) {
    const float f = rng_uniform<float>(a);
    const double d = rng_uniform<double>(b);
    CHECK(bit_equal(f, static_cast<float>(d)));
  }
}

TEST_CASE("machine epsilon constants") {
  CHECK(machine_epsilon<double> == 0x1.0p-52);
  CHECK(machine_epsilon<float> == 0x1.0p-23f);
}

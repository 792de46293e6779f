#include <doctest.h>

#include <cmath>
#include <limits>

#include "nsfom/core.hpp"

using namespace nsfom;

TEST_SUITE_BEGIN("core");

TEST_CASE("normalized_step unit direction examples") {
  Vector x(2), m(2);
  x << 0, 0;
  m << 3, 4;
  Vector out = normalized_step(x, m, 1.0);
  CHECK(out[0] == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(-0.8).epsilon(1e-15));

  x << 1, 1;
  m << 0, 2;
  out = normalized_step(x, m, 0.5);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == doctest::Approx(0.5));
}

TEST_CASE("normalized_step distance equals eta within 4 ulps") {
  RngStream rng(42, 0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_below(7));
    Vector x(n), m(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.gaussian();
      m[i] = rng.gaussian();
    }
    if (m.norm() < 1e-12) continue;
    const double eta = 0.25 + 2.0 * rng.uniform01();
    const Vector out = normalized_step(x, m, eta);
    const double dist = (out - x).norm();
    CHECK(std::abs(dist - eta) <= 4.0 * eps * eta * std::sqrt(double(n)));
  }
}

TEST_CASE("normalized_step degenerate and precondition errors") {
  Vector x(2), m(2);
  x << 1, 2;
  m << 0, 0;
  CHECK_THROWS_AS(normalized_step(x, m, 1.0), DegenerateDirection);
  m << 1e-305, 0;
  CHECK_THROWS_AS(normalized_step(x, m, 1.0), DegenerateDirection);
  m << 1, 0;
  CHECK_THROWS_AS(normalized_step(x, m, 0.0), PreconditionViolated);
  Vector m3(3);
  m3.setOnes();
  CHECK_THROWS_AS(normalized_step(x, m3, 1.0), PreconditionViolated);
}

TEST_CASE("unnormalized_step arithmetic") {
  Vector x(2), m(2);
  x << 1, 0;
  m << 1, 0;
  CHECK(unnormalized_step(x, m, 1.0).isApprox(Vector::Zero(2)));
  x << 0, 0;
  m << 0, 0;
  CHECK(unnormalized_step(x, m, 1.0).isZero());
  x << 2, 2;
  m << 1, -1;
  const Vector out = unnormalized_step(x, m, 0.5);
  CHECK(out[0] == doctest::Approx(1.5));
  CHECK(out[1] == doctest::Approx(2.5));
}

TEST_CASE("potential_value examples") {
  Vector m(2), g(2);
  m << 1, 2;
  g << 1, 2;
  CHECK(potential_value(1.0, m, g, 5.0, 1.5) == doctest::Approx(1.0));

  m << 2, 0;
  g << 0, 0;
  CHECK(potential_value(0.0, m, g, 1.0, 2.0) == doctest::Approx(4.0));

  m << 1, 1;
  g << 0, 0;
  // 3 + 2 * 2^{3/4}
  CHECK(potential_value(3.0, m, g, 2.0, 1.5) ==
        doctest::Approx(6.3635856610148582).epsilon(1e-14));
}

TEST_CASE("potential_value monotone in p_k and in estimation error") {
  RngStream rng(7, 1);
  Vector g = Vector::Zero(3);
  for (int trial = 0; trial < 100; ++trial) {
    Vector m(3);
    for (int i = 0; i < 3; ++i) m[i] = rng.gaussian();
    const double alpha = 1.0 + 1e-9 + rng.uniform01();
    const double p1 = rng.uniform01(), p2 = p1 + rng.uniform01();
    CHECK(potential_value(0.0, m, g, p1, alpha) <=
          potential_value(0.0, m, g, p2, alpha));
    CHECK(potential_value(0.0, m, g, p1, alpha) <=
          potential_value(0.0, (1.5 * m).eval(), g, p1, alpha));
  }
}

TEST_CASE("alpha_power zero guard") {
  CHECK(alpha_power(0.0, 1.5) == 0.0);
  CHECK(alpha_power(0.0, -0.5) == 0.0);
  CHECK(alpha_power(2.0, 0.75) == doctest::Approx(1.6817928305074291));
}

TEST_CASE("rng replay is bit-identical and streams differ") {
  RngStream a(123, 5), b(123, 5), c(123, 6);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const auto va = a.next_u64();
    all_equal = all_equal && va == b.next_u64();
    any_diff = any_diff || va != c.next_u64();
  }
  CHECK(all_equal);
  CHECK(any_diff);

  // Copies fork the state: both continue identically.
  RngStream d(9, 9);
  d.next_u64();
  RngStream e = d;
  CHECK(d.next_u64() == e.next_u64());
}

TEST_CASE("distinct streams are uncorrelated") {
  RngStream a(2030, 1), b(2030, 2);
  const int n = 100000;
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform01(), y = b.uniform01();
    sa += x;
    sb += y;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) *
                                      (sbb / n - (sb / n) * (sb / n)));
  CHECK(std::abs(corr) < 0.02);
}

TEST_CASE("rng uniform01 strictly inside (0,1) and gaussian moments") {
  RngStream rng(2024, 3);
  double sum = 0, sum2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    const double z = rng.gaussian();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("rng uniform_below is in range and roughly uniform") {
  RngStream rng(1, 2);
  int counts[7] = {0};
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.uniform_below(7);
    REQUIRE(v < 7);
    counts[v]++;
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  CHECK_THROWS_AS(rng.uniform_below(0), PreconditionViolated);
}

TEST_SUITE_END();

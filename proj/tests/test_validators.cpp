#include <doctest.h>

#include <cmath>

#include "nsfom/validators.hpp"

using namespace nsfom;

namespace {

Vector random_vec(RngStream& rng, int n, double scale = 1.0) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * rng.gaussian();
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("validators");

TEST_CASE("power expansion edge cases") {
  Vector u(3), v(3);
  u << 1, 2, -1;
  v << 0, 0, 0;
  auto r = check_power_expansion(u, v, 1.5);
  CHECK(r.holds);
  CHECK(r.slack == doctest::Approx(0.0).epsilon(1e-12));  // v = 0 is equality

  // alpha = 2 reduces to the polarization identity plus ||v||^2 of slack.
  v << 0.5, -0.5, 2;
  r = check_power_expansion(u, v, 2.0);
  CHECK(r.holds);
  CHECK(r.slack == doctest::Approx(v.squaredNorm()).epsilon(1e-12));

  // u = 0 uses the zero-limit middle term.
  r = check_power_expansion(Vector::Zero(3), v, 1.3);
  CHECK(r.holds);
}

TEST_CASE("power expansion randomized sweep") {
  RngStream rng(100, 0);
  for (double alpha : {1.1, 1.5, 1.9}) {
    for (int i = 0; i < 4000; ++i) {
      const Vector u = random_vec(rng, 5, i % 2 ? 0.1 : 3.0);
      const Vector v = random_vec(rng, 5, i % 3 ? 2.0 : 0.05);
      CHECK(check_power_expansion(u, v, alpha).holds);
    }
  }
}

TEST_CASE("power expansion with free parameter c") {
  Vector u(2), v(2);
  u << 0, 0;
  v << 3, 4;
  auto r = check_power_expansion_c(u, v, 1.5, 0.7);
  CHECK(r.holds);
  u << 1, 1;
  v << 0, 0;
  r = check_power_expansion_c(u, v, 1.5, 0.7);
  CHECK(r.holds);
  CHECK_THROWS_AS(check_power_expansion_c(u, v, 1.5, 0.0), PreconditionViolated);

  RngStream rng(101, 0);
  for (double c : {0.01, 1.0, 100.0}) {
    for (double alpha : {1.1, 1.5, 1.9}) {
      for (int i = 0; i < 1500; ++i) {
        const Vector uu = random_vec(rng, 5);
        const Vector vv = random_vec(rng, 5);
        CHECK(check_power_expansion_c(uu, vv, alpha, c).holds);
      }
    }
  }
}

TEST_CASE("series partial-sum bound examples") {
  auto r = check_series_bound(1, 1, 1.0);
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(1.0986122886681098).epsilon(1e-14));  // ln 3
  CHECK(r.holds);

  r = check_series_bound(1, 10000, 2.0);
  CHECK(r.rhs == doctest::Approx(2.0 - 1.0 / 10000.5).epsilon(1e-12));
  CHECK(r.holds);

  r = check_series_bound(2, 2, 0.5);
  CHECK(r.lhs == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(r.rhs == doctest::Approx(0.71278791738520123).epsilon(1e-14));
  CHECK(r.holds);

  for (long a : {1L, 2L, 5L, 17L}) {
    for (long span : {0L, 3L, 100L, 5000L}) {
      for (double beta : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
        CHECK(check_series_bound(a, a + span, beta).holds);
      }
    }
  }
  CHECK_THROWS_AS(check_series_bound(0, 5, 1.0), PreconditionViolated);
  CHECK_THROWS_AS(check_series_bound(3, 2, 1.0), PreconditionViolated);
}

TEST_CASE("rate complexity lemma") {
  const double beta = 0.25, u = 0.01;
  const double threshold = std::pow(std::log(1.0 / u) / u, 1.0 / beta);
  auto r = check_rate_lemma(beta, u, threshold);
  CHECK(r.holds);
  r = check_rate_lemma(0.5, 0.1, 10.0 * std::pow(std::log(10.0) / 0.1, 2.0));
  CHECK(r.holds);
  CHECK(r.slack > 0.0);
  CHECK_THROWS_AS(check_rate_lemma(0.5, 0.5, 1e9), PreconditionViolated);
  CHECK_THROWS_AS(check_rate_lemma(0.5, 0.1, 1.0), PreconditionViolated);

  for (double b : {0.1, 0.25, 0.5, 0.9}) {
    for (double uu : {0.01, 0.1, 0.3}) {
      const double v0 = std::pow(std::log(1.0 / uu) / uu, 1.0 / b);
      for (double mult : {1.0, 2.0, 10.0}) {
        CHECK(check_rate_lemma(b, uu, mult * v0).holds);
      }
    }
  }
}

TEST_CASE("weierstrass product inequalities") {
  auto [lo, hi] = check_weierstrass({0.3});
  CHECK(lo.holds);
  CHECK(lo.slack == doctest::Approx(0.0));  // single factor: equality below
  CHECK(hi.holds);
  CHECK(hi.rhs == doctest::Approx(1.0 / 1.3).epsilon(1e-14));

  std::tie(lo, hi) = check_weierstrass({0.1, 0.1});
  CHECK(lo.lhs == doctest::Approx(0.8));
  CHECK(lo.rhs == doctest::Approx(0.81));
  CHECK(hi.rhs == doctest::Approx(1.0 / 1.2).epsilon(1e-14));
  CHECK(lo.holds);
  CHECK(hi.holds);

  CHECK_THROWS_AS(check_weierstrass({}), PreconditionViolated);
  CHECK_THROWS_AS(check_weierstrass({0.5, 1.0}), PreconditionViolated);

  RngStream rng(55, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int len = 1 + static_cast<int>(rng.uniform_below(10));
    std::vector<double> a(len);
    for (auto& v : a) v = 1e-6 + (1.0 - 2e-6) * rng.uniform01();
    auto [l, h] = check_weierstrass(a);
    CHECK(l.holds);
    CHECK(h.holds);
  }
}

TEST_CASE("sinc product converges to +-1/2") {
  CHECK(std::abs(sinc_product(1, 100000) - 0.5) <= 1e-4);
  CHECK(std::abs(sinc_product(2, 100000) + 0.5) <= 5e-4);
  CHECK(std::abs(sinc_product(3, 1000000) - 0.5) <= 1e-4);
  CHECK_THROWS_AS(sinc_product(0, 1000), PreconditionViolated);
  CHECK_THROWS_AS(sinc_product(5, 100), PreconditionViolated);
}

TEST_CASE("sinc product error halves when the truncation doubles") {
  for (int t : {1, 2, 3}) {
    const double limit = (t % 2 == 1) ? 0.5 : -0.5;
    const double e1 = std::abs(sinc_product(t, 20000) - limit);
    const double e2 = std::abs(sinc_product(t, 40000) - limit);
    CHECK(e2 < e1);
    CHECK(e2 == doctest::Approx(e1 / 2.0).epsilon(0.05));
  }
}

TEST_CASE("report fields are consistent") {
  auto r = check_series_bound(1, 3, 1.0);
  CHECK(r.slack == doctest::Approx(r.rhs - r.lhs));
  CHECK(r.holds == (r.slack >= -r.tolerance));
}

TEST_SUITE_END();

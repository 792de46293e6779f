#include "nsfom/validators.hpp"

#include <cmath>

namespace nsfom {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw PreconditionViolated(msg);
}

InequalityReport report(double lhs, double rhs, double tol) {
  const double slack = rhs - lhs;
  return {lhs, rhs, slack, tol, slack >= -tol};
}

double rel_tol(double rhs) { return 1e-12 * (1.0 + std::abs(rhs)); }

}  // namespace

InequalityReport check_power_expansion(const Vector& u, const Vector& v,
                                       double alpha) {
  require(alpha > 1.0 && alpha <= 2.0, "check_power_expansion: alpha in (1, 2]");
  require(u.size() == v.size(), "check_power_expansion: dimension mismatch");
  const double un = u.norm();
  const double lhs = alpha_power((u + v).norm(), alpha);
  // alpha_power(0, a-2) = 0 encodes the u = 0 limit convention.
  const double middle = alpha * alpha_power(un, alpha - 2.0) * u.dot(v);
  const double rhs =
      alpha_power(un, alpha) + middle + 2.0 * alpha_power(v.norm(), alpha);
  return report(lhs, rhs, rel_tol(rhs));
}

InequalityReport check_power_expansion_c(const Vector& u, const Vector& v,
                                         double alpha, double c) {
  require(alpha > 1.0 && alpha <= 2.0, "check_power_expansion_c: alpha in (1, 2]");
  require(c > 0.0, "check_power_expansion_c: c must be positive");
  require(u.size() == v.size(), "check_power_expansion_c: dimension mismatch");
  const double lhs = alpha_power((u + v).norm(), alpha);
  const double coeff =
      2.0 + std::pow(alpha - 1.0, alpha - 1.0) * std::pow(c, 1.0 - alpha);
  const double rhs = (1.0 + c) * alpha_power(u.norm(), alpha) +
                     coeff * alpha_power(v.norm(), alpha);
  return report(lhs, rhs, rel_tol(rhs));
}

InequalityReport check_series_bound(long a, long b, double beta) {
  require(a >= 1, "check_series_bound: a must be >= 1");
  require(b >= a, "check_series_bound: b must be >= a");
  require(beta > 0.0, "check_series_bound: beta must be positive");
  double lhs = 0.0;
  for (long r = a; r <= b; ++r) lhs += std::pow(static_cast<double>(r), -beta);
  double rhs;
  if (beta == 1.0) {
    rhs = std::log(b + 0.5) - std::log(a - 0.5);
  } else {
    rhs = (std::pow(b + 0.5, 1.0 - beta) - std::pow(a - 0.5, 1.0 - beta)) /
          (1.0 - beta);
  }
  return report(lhs, rhs, rel_tol(rhs));
}

InequalityReport check_rate_lemma(double beta, double u, double v) {
  require(beta > 0.0 && beta < 1.0, "check_rate_lemma: beta must lie in (0, 1)");
  require(u > 0.0 && u < 1.0 / M_E, "check_rate_lemma: u must lie in (0, 1/e)");
  const double threshold = std::pow(std::log(1.0 / u) / u, 1.0 / beta);
  if (v < threshold)
    throw PreconditionViolated("check_rate_lemma: v below the admissible threshold");
  const double lhs = std::pow(v, -beta) * std::log(v);
  const double rhs = 2.0 * u / beta;
  return report(lhs, rhs, 0.0);
}

std::pair<InequalityReport, InequalityReport> check_weierstrass(
    const std::vector<double>& a) {
  require(!a.empty(), "check_weierstrass: list must be nonempty");
  double sum = 0.0, prod = 1.0;
  for (double v : a) {
    require(v > 0.0 && v < 1.0, "check_weierstrass: entries must lie in (0, 1)");
    sum += v;
    prod *= 1.0 - v;
  }
  const auto lower = report(1.0 - sum, prod, 1e-14 * (1.0 + std::abs(prod)));
  const double upper_rhs = 1.0 / (1.0 + sum);
  const auto upper = report(prod, upper_rhs, 1e-14 * (1.0 + std::abs(upper_rhs)));
  return {lower, upper};
}

double sinc_product(int t, long S) {
  require(t >= 1, "sinc_product: t must be a positive integer");
  require(S >= 10L * t * t, "sinc_product: S must be at least 10 t^2");
  const double t2 = static_cast<double>(t) * static_cast<double>(t);
  double prod = 1.0;
  for (long s = 1; s <= S; ++s) {
    if (s == t) continue;
    const double sd = static_cast<double>(s);
    prod *= 1.0 - t2 / (sd * sd);
  }
  return prod;
}

}  // namespace nsfom

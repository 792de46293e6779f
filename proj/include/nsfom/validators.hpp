#ifndef NSFOM_VALIDATORS_HPP
#define NSFOM_VALIDATORS_HPP

#include <utility>
#include <vector>

#include "nsfom/core.hpp"

namespace nsfom {

/// Outcome of one inequality check: holds iff slack = rhs - lhs clears the
/// stated tolerance.
struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool holds = false;
};

/// ||u+v||^a <= ||u||^a + a ||u||^{a-2} u'v + 2 ||v||^a, for a in (1, 2].
/// The middle term is taken as 0 when u = 0.
InequalityReport check_power_expansion(const Vector& u, const Vector& v,
                                       double alpha);

/// ||u+v||^a <= (1+c) ||u||^a + (2 + (a-1)^{a-1} c^{1-a}) ||v||^a, c > 0.
InequalityReport check_power_expansion_c(const Vector& u, const Vector& v,
                                         double alpha, double c);

/// sum_{r=a}^{b} r^-beta against the midpoint-antiderivative bound
/// (logarithmic form at beta = 1).
InequalityReport check_series_bound(long a, long b, double beta);

/// v^-beta ln v <= 2u/beta for v >= (ln(1/u)/u)^{1/beta}, with beta in (0,1)
/// and u in (0, 1/e). Checked at zero tolerance; throws below the threshold.
InequalityReport check_rate_lemma(double beta, double u, double v);

/// Weierstrass product inequalities for a_t in (0, 1):
/// 1 - sum a_t <= prod (1 - a_t) <= 1 / (1 + sum a_t). Returns {lower, upper}.
std::pair<InequalityReport, InequalityReport> check_weierstrass(
    const std::vector<double>& a);

/// Truncated product prod_{1<=s<=S, s!=t} (1 - t^2/s^2); converges to
/// (-1)^{t-1}/2 with error O(t^2/S). Requires S >= 10 t^2.
double sinc_product(int t, long S);

}  // namespace nsfom

#endif  // NSFOM_VALIDATORS_HPP

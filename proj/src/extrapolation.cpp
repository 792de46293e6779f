#include "nsfom/extrapolation.hpp"

#include <cmath>
#include <cstdlib>

#include "detail/double_double.hpp"

namespace nsfom {

using detail::dd;

double ExtrapolationWeights::theta_sum() const {
  double s = 0.0;
  for (double t : thetas) s += t;
  return s;
}

ExtrapolationWeights compute_weights(double gamma_k, int q) {
  if (!(gamma_k > 0.0 && gamma_k <= 0.5))
    throw PreconditionViolated("compute_weights: gamma_k must lie in (0, 1/2]");
  if (q < 1 || q > 8)
    throw PreconditionViolated("compute_weights: q must lie in [1, 8]");

  ExtrapolationWeights w;
  w.q = q;
  w.gamma = gamma_k;
  w.gammas.resize(q);
  w.thetas.resize(q);
  w.theta_tails.resize(q);
  for (int t = 1; t <= q; ++t)
    w.gammas[t - 1] = gamma_k / static_cast<double>(t * t);

  // Nodes are the inverses of the stored (rounded) gammas, so the returned
  // weights solve the system the residual check actually evaluates.
  std::vector<dd> x(q);
  for (int t = 0; t < q; ++t) x[t] = detail::div(detail::from(1.0), detail::from(w.gammas[t]));

  const dd one = detail::from(1.0);
  for (int t = 0; t < q; ++t) {
    dd num = one;
    dd den = x[t];
    for (int s = 0; s < q; ++s) {
      if (s == t) continue;
      num = detail::mul(num, detail::sub(one, x[s]));
      den = detail::mul(den, detail::sub(x[t], x[s]));
    }
    const dd theta = detail::div(num, den);
    w.thetas[t] = theta.hi;
    w.theta_tails[t] = theta.lo;
  }
  return w;
}

Vector extrapolate(const Vector& x_k, const Vector& x_km1, double gamma) {
  if (gamma <= 0.0)
    throw PreconditionViolated("extrapolate: gamma must be positive");
  if (x_k.size() != x_km1.size())
    throw PreconditionViolated("extrapolate: dimension mismatch");
  const double coeff = (1.0 - gamma) / gamma;
  return x_k + coeff * (x_k - x_km1);
}

double vandermonde_residual(const ExtrapolationWeights& w) {
  const int q = w.q;
  std::vector<dd> x(q), theta(q);
  for (int t = 0; t < q; ++t) {
    x[t] = detail::div(detail::from(1.0), detail::from(w.gammas[t]));
    theta[t] = {w.thetas[t],
                t < static_cast<int>(w.theta_tails.size()) ? w.theta_tails[t] : 0.0};
  }
  std::vector<dd> power(q, detail::from(1.0));
  double worst = 0.0;
  for (int r = 1; r <= q; ++r) {
    dd sum = detail::from(0.0);
    for (int t = 0; t < q; ++t) {
      power[t] = detail::mul(power[t], x[t]);
      sum = detail::add(sum, detail::mul(theta[t], power[t]));
    }
    const dd res = detail::sub(sum, detail::from(1.0));
    worst = std::max(worst, std::abs(res.hi + res.lo));
  }
  return worst;
}

}  // namespace nsfom

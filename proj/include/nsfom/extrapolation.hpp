#ifndef NSFOM_EXTRAPOLATION_HPP
#define NSFOM_EXTRAPOLATION_HPP

#include <vector>

#include "nsfom/core.hpp"

namespace nsfom {

/// Extrapolation scales gamma_t = gamma/t^2 and the signed momentum weights
/// theta_t solving the Vandermonde system sum_t theta_t / gamma_t^r = 1 for
/// r = 1..q. theta_tails carries double-double correction terms for each
/// theta; the row sums cancel through ~1/gamma^q, so verifying the system to
/// 1e-8 needs the weights at better than plain double accuracy.
struct ExtrapolationWeights {
  int q = 1;
  double gamma = 1.0;
  std::vector<double> gammas;
  std::vector<double> thetas;
  std::vector<double> theta_tails;

  double theta_sum() const;
};

/// Closed-form weight construction (Lagrange cardinal values at 1, nodes
/// 1/gamma_t). Requires gamma_k in (0, 1/2] and 1 <= q <= 8; the returned
/// weights satisfy
///   sum_t theta_t in (gamma/(1+pi^2/6), 2*gamma),
///   |theta_t| <= 4*gamma/t^2,
///   sum_t theta_t = 1 - prod_t (1 - gamma/t^2).
ExtrapolationWeights compute_weights(double gamma_k, int q);

/// z = x_k + ((1-gamma)/gamma) * (x_k - x_km1). gamma = 1 is a no-op.
Vector extrapolate(const Vector& x_k, const Vector& x_km1, double gamma);

/// max over r = 1..q of |sum_t theta_t / gamma_t^r - 1|, evaluated in
/// double-double from the stored weights and tails.
double vandermonde_residual(const ExtrapolationWeights& w);

}  // namespace nsfom

#endif  // NSFOM_EXTRAPOLATION_HPP

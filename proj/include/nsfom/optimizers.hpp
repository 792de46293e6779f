#ifndef NSFOM_OPTIMIZERS_HPP
#define NSFOM_OPTIMIZERS_HPP

#include <optional>
#include <vector>

#include "nsfom/core.hpp"
#include "nsfom/extrapolation.hpp"
#include "nsfom/schedules.hpp"

namespace nsfom {

/// Polyak momentum state. theta_prev is the weight carried from the previous
/// iteration (1 before the first step, so m^0 equals the first sample).
struct PMState {
  long k = 0;
  Vector x;
  Vector m;
  double theta_prev = 1.0;
};

/// Multi-extrapolated momentum state. weights_prev empty means the initial
/// sentinel (gamma_t, theta_t) = (1, 1/q). x_prev starts equal to x, so the
/// first extrapolated points all coincide with x^0.
struct MEMState {
  long k = 0;
  Vector x;
  Vector x_prev;
  Vector m;
  std::optional<ExtrapolationWeights> weights_prev;
};

/// Recursive momentum state; the paired evaluations at x and x_prev share one
/// noise realization.
struct RMState {
  long k = 0;
  Vector x;
  Vector x_prev;
  Vector m;
  double theta_prev = 1.0;
};

/// SharedSample evaluates the q extrapolated points under one realization
/// (the algorithm's main text); IndependentSamples draws q fresh ones (the
/// footnote variant).
enum class SampleMode { SharedSample, IndependentSamples };

PMState make_pm_state(const Vector& x0);
MEMState make_mem_state(const Vector& x0);
RMState make_rm_state(const Vector& x0);

/// m <- (1-theta_prev) m + theta_prev G(x; xi), then the (eta) step along
/// -m/||m|| (or -m when normalized = false). One oracle call. A momentum with
/// ||m|| < 1e-300 holds the iterate and still advances k and the carried
/// weight.
PMState pm_step(const PMState& state, const GradientOracle& oracle, double eta_k,
                double theta_k, RngStream& rng, bool normalized = true);

/// Builds the q extrapolated points from (x, x_prev) with the carried scales,
/// combines their sampled gradients with the carried weights, then steps and
/// stores weights_k for the next iteration. q oracle calls.
MEMState mem_step(const MEMState& state, const GradientOracle& oracle,
                  double eta_k, const ExtrapolationWeights& weights_k,
                  SampleMode mode, RngStream& rng, bool normalized = true);

/// m <- (1-theta_prev) m + G(x; xi) - (1-theta_prev) G(x_prev; xi), both
/// evaluations under the same realization. Two oracle calls (one while
/// theta_prev = 1).
RMState rm_step(const RMState& state, const GradientOracle& oracle, double eta_k,
                double theta_k, RngStream& rng, bool normalized = true);

/// Oracle calls consumed by one step at the given state.
long pm_step_cost();
long mem_step_cost(int q);
long rm_step_cost(double theta_prev);

/// Drives `iterations` steps with the per-k schedule from `spec`. Telemetry is
/// recorded at k = 0, every telemetry_every-th step, and the final step; the
/// rng is owned by the run.
std::vector<TrialRecord> run(Method method, bool normalized,
                             const GradientOracle& oracle,
                             const ScheduleSpec& spec, const Vector& x0,
                             long iterations, RngStream rng,
                             long telemetry_every = 1,
                             SampleMode mode = SampleMode::SharedSample);

}  // namespace nsfom

#endif  // NSFOM_OPTIMIZERS_HPP

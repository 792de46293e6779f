#include "nsfom/optimizers.hpp"

#include <cmath>

namespace nsfom {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw PreconditionViolated(msg);
}

// Applies the degenerate-direction policy: hold the iterate when the
// momentum has no usable direction, otherwise take the step.
Vector apply_direction(const Vector& x, const Vector& m, double eta,
                       bool normalized) {
  if (!normalized) return unnormalized_step(x, m, eta);
  if (m.stableNorm() < kDegenerateNorm) return x;
  return normalized_step(x, m, eta);
}

}  // namespace

PMState make_pm_state(const Vector& x0) {
  return {0, x0, Vector::Zero(x0.size()), 1.0};
}

MEMState make_mem_state(const Vector& x0) {
  return {0, x0, x0, Vector::Zero(x0.size()), std::nullopt};
}

RMState make_rm_state(const Vector& x0) {
  return {0, x0, x0, Vector::Zero(x0.size()), 1.0};
}

PMState pm_step(const PMState& state, const GradientOracle& oracle, double eta_k,
                double theta_k, RngStream& rng, bool normalized) {
  require(eta_k > 0.0, "pm_step: eta_k must be positive");
  require(theta_k > 0.0 && theta_k <= 1.0, "pm_step: theta_k must lie in (0, 1]");
  PMState next;
  const Vector g = oracle.sample_gradient(state.x, rng);
  next.m = (1.0 - state.theta_prev) * state.m + state.theta_prev * g;
  next.x = apply_direction(state.x, next.m, eta_k, normalized);
  next.k = state.k + 1;
  next.theta_prev = theta_k;
  return next;
}

MEMState mem_step(const MEMState& state, const GradientOracle& oracle,
                  double eta_k, const ExtrapolationWeights& weights_k,
                  SampleMode mode, RngStream& rng, bool normalized) {
  require(eta_k > 0.0, "mem_step: eta_k must be positive");
  const int q = weights_k.q;
  require(q >= 1, "mem_step: weights must have q >= 1");
  if (state.weights_prev)
    require(state.weights_prev->q == q, "mem_step: q changed between iterations");

  const auto gamma_prev = [&](int t) {
    return state.weights_prev ? state.weights_prev->gammas[t] : 1.0;
  };
  const auto theta_prev = [&](int t) {
    return state.weights_prev ? state.weights_prev->thetas[t]
                              : 1.0 / static_cast<double>(q);
  };

  Vector combo = Vector::Zero(state.x.size());
  double theta_total = 0.0;
  if (mode == SampleMode::SharedSample) {
    // All q points see one realization: every evaluation forks the stream
    // from the same state, and the first fork's end state is adopted.
    RngStream adopted = rng;
    for (int t = 0; t < q; ++t) {
      const Vector z = extrapolate(state.x, state.x_prev, gamma_prev(t));
      RngStream fork = rng;
      const Vector g = oracle.sample_gradient(z, fork);
      if (t == 0) adopted = fork;
      combo += theta_prev(t) * g;
      theta_total += theta_prev(t);
    }
    rng = adopted;
  } else {
    for (int t = 0; t < q; ++t) {
      const Vector z = extrapolate(state.x, state.x_prev, gamma_prev(t));
      combo += theta_prev(t) * oracle.sample_gradient(z, rng);
      theta_total += theta_prev(t);
    }
  }

  MEMState next;
  next.m = (1.0 - theta_total) * state.m + combo;
  next.x = apply_direction(state.x, next.m, eta_k, normalized);
  next.x_prev = state.x;
  next.k = state.k + 1;
  next.weights_prev = weights_k;
  return next;
}

RMState rm_step(const RMState& state, const GradientOracle& oracle, double eta_k,
                double theta_k, RngStream& rng, bool normalized) {
  require(eta_k > 0.0, "rm_step: eta_k must be positive");
  require(theta_k > 0.0 && theta_k <= 1.0, "rm_step: theta_k must lie in (0, 1]");
  const double carry = 1.0 - state.theta_prev;
  RMState next;
  if (carry == 0.0) {
    next.m = oracle.sample_gradient(state.x, rng);
  } else {
    // Both evaluations share one realization; the current point goes first
    // and its fork becomes the new stream state.
    RngStream fork_curr = rng;
    const Vector g_curr = oracle.sample_gradient(state.x, fork_curr);
    RngStream fork_prev = rng;
    const Vector g_prev = oracle.sample_gradient(state.x_prev, fork_prev);
    rng = fork_curr;
    next.m = carry * state.m + g_curr - carry * g_prev;
  }
  next.x = apply_direction(state.x, next.m, eta_k, normalized);
  next.x_prev = state.x;
  next.k = state.k + 1;
  next.theta_prev = theta_k;
  return next;
}

long pm_step_cost() { return 1; }
long mem_step_cost(int q) { return q; }
long rm_step_cost(double theta_prev) { return theta_prev == 1.0 ? 1 : 2; }

std::vector<TrialRecord> run(Method method, bool normalized,
                             const GradientOracle& oracle,
                             const ScheduleSpec& spec, const Vector& x0,
                             long iterations, RngStream rng,
                             long telemetry_every, SampleMode mode) {
  require(iterations >= 1, "run: iterations must be >= 1");
  require(telemetry_every >= 1, "run: telemetry_every must be >= 1");
  require(spec.method == method, "run: spec.method does not match method");
  validate(spec);

  std::vector<TrialRecord> records;
  records.reserve(static_cast<std::size_t>(iterations / telemetry_every + 2));
  long calls = 0;

  const auto record = [&](long k, const Vector& x, double mom_norm) {
    records.push_back({k, oracle.objective(x), oracle.exact_gradient(x).norm(),
                       mom_norm, calls});
  };
  const auto want = [&](long k) {
    return k % telemetry_every == 0 || k == iterations;
  };

  record(0, x0, 0.0);
  switch (method) {
    case Method::PM: {
      PMState st = make_pm_state(x0);
      for (long k = 0; k < iterations; ++k) {
        const StepPair s = pm_schedule(spec, k);
        st = pm_step(st, oracle, s.eta, s.theta, rng, normalized);
        calls += pm_step_cost();
        if (want(st.k)) record(st.k, st.x, st.m.norm());
      }
      break;
    }
    case Method::MEM: {
      const int q = spec.p - 1;
      MEMState st = make_mem_state(x0);
      for (long k = 0; k < iterations; ++k) {
        const MemPair s = mem_schedule(spec, k);
        const ExtrapolationWeights w = compute_weights(s.gamma, q);
        st = mem_step(st, oracle, s.eta, w, mode, rng, normalized);
        calls += mem_step_cost(q);
        if (want(st.k)) record(st.k, st.x, st.m.norm());
      }
      break;
    }
    case Method::RM: {
      RMState st = make_rm_state(x0);
      for (long k = 0; k < iterations; ++k) {
        const StepPair s = rm_schedule(spec, k);
        calls += rm_step_cost(st.theta_prev);
        st = rm_step(st, oracle, s.eta, s.theta, rng, normalized);
        if (want(st.k)) record(st.k, st.x, st.m.norm());
      }
      break;
    }
  }
  return records;
}

}  // namespace nsfom

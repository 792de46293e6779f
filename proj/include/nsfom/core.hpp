#ifndef NSFOM_CORE_HPP
#define NSFOM_CORE_HPP

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace nsfom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error taxonomy used across the library.
struct PreconditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateDirection : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Search directions with norm below this are treated as degenerate.
inline constexpr double kDegenerateNorm = 1e-300;

/// Counter-based 64-bit random stream (splitmix-style with a per-stream
/// increment). Distinct stream ids walk disjoint sequences; replay under the
/// same (seed, stream_id) is bit-identical. Cheap to copy, so a stream can be
/// forked to evaluate several points under one noise realization.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform draw strictly inside (0, 1).
  double uniform01();

  /// Standard normal via Box-Muller (two uniforms per draw).
  double gaussian();

  /// Unbiased integer in [0, n), n >= 1.
  std::uint64_t uniform_below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t state_ = 0;
  std::uint64_t increment_ = 0;
};

/// First-order oracle: exact objective/gradient plus a seeded stochastic
/// gradient. sample_gradient must be unbiased for exact_gradient and must
/// consume the same number of draws regardless of the query point, so that
/// forked streams stay in lockstep across points.
struct GradientOracle {
  int dimension = 0;
  std::function<double(const Vector&)> objective;
  std::function<Vector(const Vector&)> exact_gradient;
  std::function<Vector(const Vector&, RngStream&)> sample_gradient;
};

/// Per-iteration telemetry. grad_norm is the exact gradient norm at x^k even
/// though the optimizer only ever sees stochastic samples; mom_norm is the
/// norm of the momentum that produced x^k (0 at k = 0).
struct TrialRecord {
  long k = 0;
  double f_val = 0.0;
  double grad_norm = 0.0;
  double mom_norm = 0.0;
  long oracle_calls = 0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// r^alpha computed as exp(alpha * ln r), with r = 0 mapping to 0.
double alpha_power(double r, double alpha);

/// x - eta * m / ||m||. The result sits at distance exactly eta from x.
/// Throws DegenerateDirection when ||m|| < kDegenerateNorm; callers decide
/// the policy (the optimizers hold the iterate and advance the schedules).
Vector normalized_step(const Vector& x, const Vector& m, double eta);

/// x - eta * m (baseline update without normalization).
Vector unnormalized_step(const Vector& x, const Vector& m, double eta);

/// Potential diagnostic f(x) + p_k * ||m - grad||^alpha.
double potential_value(double f_val, const Vector& m, const Vector& grad,
                       double p_k, double alpha);

}  // namespace nsfom

#endif  // NSFOM_CORE_HPP

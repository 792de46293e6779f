#include "nsfom/core.hpp"

#include <cmath>

namespace nsfom {

namespace {

// splitmix64 finalizer (Vigna); also used to derive stream increments.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  state_ = mix64(seed ^ mix64(stream_id));
  // Odd increment per stream, SplittableRandom style: every stream walks its
  // own full-period orbit.
  increment_ = mix64(stream_id ^ 0x6a09e667f3bcc909ULL) | 1ULL;
}

std::uint64_t RngStream::next_u64() {
  state_ += increment_;
  return mix64(state_);
}

double RngStream::uniform01() {
  // 53 random bits centered away from 0 and 1: ((u >> 11) + 0.5) * 2^-53.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::gaussian() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  if (n == 0) throw PreconditionViolated("uniform_below: n must be positive");
  // Rejection sampling on the top range to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

double alpha_power(double r, double alpha) {
  if (r == 0.0) return 0.0;
  return std::exp(alpha * std::log(r));
}

Vector normalized_step(const Vector& x, const Vector& m, double eta) {
  if (eta <= 0.0) throw PreconditionViolated("normalized_step: eta must be positive");
  if (x.size() != m.size())
    throw PreconditionViolated("normalized_step: dimension mismatch");
  const double norm = m.stableNorm();
  if (norm < kDegenerateNorm)
    throw DegenerateDirection("normalized_step: ||m|| below 1e-300");
  return x - (eta / norm) * m;
}

Vector unnormalized_step(const Vector& x, const Vector& m, double eta) {
  if (eta <= 0.0) throw PreconditionViolated("unnormalized_step: eta must be positive");
  if (x.size() != m.size())
    throw PreconditionViolated("unnormalized_step: dimension mismatch");
  return x - eta * m;
}

double potential_value(double f_val, const Vector& m, const Vector& grad,
                       double p_k, double alpha) {
  if (m.size() != grad.size())
    throw PreconditionViolated("potential_value: dimension mismatch");
  return f_val + p_k * alpha_power((m - grad).norm(), alpha);
}

}  // namespace nsfom

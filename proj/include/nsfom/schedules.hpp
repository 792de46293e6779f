#ifndef NSFOM_SCHEDULES_HPP
#define NSFOM_SCHEDULES_HPP

#include <optional>

#include "nsfom/core.hpp"

namespace nsfom {

enum class Method { PM, MEM, RM };

/// Closed-form parameter schedule selector. alpha set means the tail exponent
/// is known and the alpha-dependent exponents are used; unset selects the
/// exponent-free variants. eta_scale multiplies the step size only, leaving
/// every rate exponent untouched.
struct ScheduleSpec {
  Method method = Method::PM;
  std::optional<double> alpha;  // known tail exponent in (1, 2]
  int p = 2;                    // smoothness order, MEM only
  double eta_scale = 1.0;
};

/// Throws PreconditionViolated if the spec is malformed (alpha outside (1,2],
/// p < 2 for MEM, nonpositive eta_scale).
void validate(const ScheduleSpec& spec);

struct StepPair {
  double eta = 0.0;
  double theta = 0.0;
};
struct MemPair {
  double eta = 0.0;
  double gamma = 0.0;
};

/// Polyak momentum: eta_k = s*(k+1)^-(2a-1)/(3a-2), theta_k = (k+1)^-a/(3a-2);
/// with alpha unknown eta_k = s*(k+1)^-3/4, theta_k = (k+1)^-1/2.
StepPair pm_schedule(const ScheduleSpec& spec, long k);

/// Multi-extrapolated momentum: eta_k = s*(k+4)^-(pa+a-1)/(p(2a-1)+a-1),
/// gamma_k = (k+4)^-pa/(p(2a-1)+a-1); with alpha unknown the exponents are
/// (2p+1)/(3p+1) and 2p/(3p+1). gamma_k < 1/2 for all k when p >= 2.
MemPair mem_schedule(const ScheduleSpec& spec, long k);

/// Recursive momentum: eta_k = s*theta_k with shared exponent a/(2a-1),
/// or 2/3 when alpha is unknown.
StepPair rm_schedule(const ScheduleSpec& spec, long k);

/// Potential weight p_k for the diagnostic sequence f(x^k)+p_k||m-grad||^a.
/// When alpha is unknown the caller supplies a working alpha (default 1.5);
/// the weight appears only in diagnostics, never in the updates.
double pk_schedule(const ScheduleSpec& spec, long k, double working_alpha = 1.5);

}  // namespace nsfom

#endif  // NSFOM_SCHEDULES_HPP

#include "nsfom/schedules.hpp"

#include <cmath>

namespace nsfom {

namespace {

double ipow_decay(long base, double exponent) {
  return std::pow(static_cast<double>(base), -exponent);
}

void require(bool ok, const char* msg) {
  if (!ok) throw PreconditionViolated(msg);
}

}  // namespace

void validate(const ScheduleSpec& spec) {
  if (spec.alpha) {
    require(*spec.alpha > 1.0 && *spec.alpha <= 2.0,
            "ScheduleSpec: alpha must lie in (1, 2]");
  }
  if (spec.method == Method::MEM) {
    require(spec.p >= 2, "ScheduleSpec: MEM requires p >= 2");
  }
  require(spec.eta_scale > 0.0, "ScheduleSpec: eta_scale must be positive");
}

StepPair pm_schedule(const ScheduleSpec& spec, long k) {
  require(spec.method == Method::PM, "pm_schedule: spec.method must be PM");
  require(k >= 0, "pm_schedule: k must be nonnegative");
  validate(spec);
  double ea = 0.75, eb = 0.5;
  if (spec.alpha) {
    const double a = *spec.alpha;
    ea = (2.0 * a - 1.0) / (3.0 * a - 2.0);
    eb = a / (3.0 * a - 2.0);
  }
  return {spec.eta_scale * ipow_decay(k + 1, ea), ipow_decay(k + 1, eb)};
}

MemPair mem_schedule(const ScheduleSpec& spec, long k) {
  require(spec.method == Method::MEM, "mem_schedule: spec.method must be MEM");
  require(k >= 0, "mem_schedule: k must be nonnegative");
  validate(spec);
  const double p = static_cast<double>(spec.p);
  double ea = (2.0 * p + 1.0) / (3.0 * p + 1.0);
  double eg = 2.0 * p / (3.0 * p + 1.0);
  if (spec.alpha) {
    const double a = *spec.alpha;
    const double den = p * (2.0 * a - 1.0) + a - 1.0;
    ea = (p * a + a - 1.0) / den;
    eg = p * a / den;
  }
  return {spec.eta_scale * ipow_decay(k + 4, ea), ipow_decay(k + 4, eg)};
}

StepPair rm_schedule(const ScheduleSpec& spec, long k) {
  require(spec.method == Method::RM, "rm_schedule: spec.method must be RM");
  require(k >= 0, "rm_schedule: k must be nonnegative");
  validate(spec);
  double e = 2.0 / 3.0;
  if (spec.alpha) {
    const double a = *spec.alpha;
    e = a / (2.0 * a - 1.0);
  }
  const double theta = ipow_decay(k + 1, e);
  return {spec.eta_scale * theta, theta};
}

double pk_schedule(const ScheduleSpec& spec, long k, double working_alpha) {
  require(k >= 0, "pk_schedule: k must be nonnegative");
  validate(spec);
  const double a = spec.alpha ? *spec.alpha : working_alpha;
  require(a > 1.0 && a <= 2.0, "pk_schedule: alpha must lie in (1, 2]");
  const bool known = spec.alpha.has_value();
  const double p = static_cast<double>(spec.p);
  double exponent = 0.0;
  long shift = 1;
  switch (spec.method) {
    case Method::PM:
      exponent = known ? (a * a - 3.0 * a + 2.0) / (3.0 * a - 2.0)
                       : (2.0 * a * a - 5.0 * a + 2.0) / (4.0 * a);
      break;
    case Method::MEM:
      exponent = known ? (p * (a - 1.0) * (a - 1.0) - a + 1.0) /
                             (p * (2.0 * a - 1.0) + a - 1.0)
                       : (2.0 * p * (a - 1.0) * (a - 1.0) - a) /
                             (3.0 * p * a + a);
      shift = 4;
      break;
    case Method::RM:
      exponent = known ? (a - 1.0) * (a - 1.0) / (2.0 * a - 1.0)
                       : 2.0 * (a - 1.0) * (a - 1.0) / (3.0 * a);
      break;
  }
  return std::pow(static_cast<double>(k + shift), exponent);
}

}  // namespace nsfom

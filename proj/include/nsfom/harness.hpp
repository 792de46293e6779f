#ifndef NSFOM_HARNESS_HPP
#define NSFOM_HARNESS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nsfom/core.hpp"
#include "nsfom/optimizers.hpp"
#include "nsfom/problems.hpp"
#include "nsfom/schedules.hpp"

namespace nsfom {

struct SyntheticDf {
  int n = 50;
  int m = 200;
};
struct CsvRr {
  std::string path;
  std::string target_column = "0";
};
struct Quadratic {
  int n = 10;
};
using ProblemDescriptor = std::variant<SyntheticDf, CsvRr, Quadratic>;

struct MethodConfig {
  Method method = Method::PM;
  bool normalized = true;
  ScheduleSpec schedule;
  SampleMode sample_mode = SampleMode::SharedSample;
  std::string label;  // defaults to nsfom-pm / sfom-em / ... when empty
};

/// One experiment: methods x replications on a shared problem. K is the
/// oracle-call horizon of the reported metrics; every run continues to
/// fstar_budget calls (default ceil(1.2 K)) and the minimum objective seen in
/// that window across all runs becomes the shared f*. Replication r of every
/// method draws its noise from RngStream(base_seed, r), so methods face
/// common random numbers.
struct ExperimentConfig {
  std::vector<MethodConfig> methods;
  ProblemDescriptor problem = SyntheticDf{};
  long K = 500;
  int replications = 1;
  std::uint64_t base_seed = 0;
  long fstar_budget = 0;  // 0 selects ceil(1.2 * K)
  std::string output_dir;  // empty: nothing written
  int workers = 1;
  bool qq_export = false;
};

/// Per-checkpoint aggregation over replications (medians and quartiles).
/// avg_grad_norm is the running average of exact gradient norms up to the
/// checkpoint iterate; sampled_grad_norm is the norm at a uniformly drawn
/// iterate of the prefix, one draw per replication and checkpoint.
struct CheckpointStat {
  long oracle_calls = 0;
  double rel_obj_gap_median = 0, rel_obj_gap_q25 = 0, rel_obj_gap_q75 = 0;
  double rel_grad_norm_median = 0, rel_grad_norm_q25 = 0, rel_grad_norm_q75 = 0;
  double avg_grad_norm_median = 0;
  double sampled_grad_norm_median = 0;
};

struct MetricSeries {
  std::string label;
  std::vector<CheckpointStat> points;
};

struct ExperimentResult {
  std::vector<MetricSeries> series;
  double fstar = 0.0;
  double f0 = 0.0;
  double grad_norm0 = 0.0;
  std::string manifest_json;
};

/// Runs the whole grid, computes shared-f* metrics, and (when output_dir is
/// set) writes per-method raw and summary CSVs plus a manifest. Outputs are
/// a pure function of (config, seed), byte for byte.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct SlopeFit {
  double slope = 0.0;
  double stderr_value = 0.0;
};

/// Ordinary least squares on (ln K, ln value). Needs >= 4 points with
/// positive coordinates.
SlopeFit fit_rate_slope(const std::vector<std::pair<double, double>>& points);

/// Writes (standard-normal quantile at rank (i-0.5)/n, sorted sample) pairs
/// as CSV. Needs >= 10 samples.
void export_qq_data(std::vector<double> samples, const std::string& out_path);

/// Collects first-epoch gradient-error and Lipschitz-estimate samples across
/// the configured methods and writes qq_gradient_errors.csv and
/// qq_lipschitz_estimates.csv under cfg.output_dir.
void export_experiment_qq(const ExperimentConfig& cfg);

/// Inverse standard normal CDF (Acklam's rational approximation plus one
/// Halley refinement).
double standard_normal_quantile(double p);

/// Canonical label for a method configuration, e.g. "nsfom-rm".
std::string method_label(const MethodConfig& mc);

}  // namespace nsfom

#endif  // NSFOM_HARNESS_HPP

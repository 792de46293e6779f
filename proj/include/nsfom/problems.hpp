#ifndef NSFOM_PROBLEMS_HPP
#define NSFOM_PROBLEMS_HPP

#include <string>
#include <vector>

#include "nsfom/core.hpp"

namespace nsfom {

/// Overflow-safe logistic function e^t / (1 + e^t).
double sigmoid(double t);

/// Sigmoid data fit: f(x) = sum_i (s(a_i'x) - b_i)^2, rows a_i in A.
struct DataFittingProblem {
  Matrix A;
  Vector b;
};

double df_objective(const DataFittingProblem& p, const Vector& x);
Vector df_gradient(const DataFittingProblem& p, const Vector& x);

/// A and the ground-truth solution have iid standard normal entries;
/// b_i = s(a_i' x*) + 1e-4 * e_i with e_i standard normal.
DataFittingProblem generate_synthetic(int n, int m, RngStream& rng);

/// Robust regression with loss phi(t) = t^2 / (1 + t^2) over rows of a
/// dataset rescaled to [0, 1].
struct RobustRegressionProblem {
  Matrix features;  // N_total x n, entries in [0, 1]
  Vector targets;   // N_total, entries in [0, 1]
  int batch_size = 100;
};

double rr_objective(const RobustRegressionProblem& p, const Vector& x);

/// Mini-batch gradient over the given rows, scaled by N_total / |batch| so
/// it is unbiased for the full gradient. Throws on an empty batch.
Vector rr_batch_gradient(const RobustRegressionProblem& p, const Vector& x,
                         const std::vector<Eigen::Index>& batch);

/// Loads a numeric CSV (optional header auto-detected from a non-numeric
/// first row) and min-max rescales every column to [0, 1]; constant columns
/// map to 0. target_column is a 0-based index or a header name.
RobustRegressionProblem load_csv_dataset(const std::string& path,
                                         const std::string& target_column);

struct DatasetManifest {
  std::string path;
  std::string target_column;
  long n_rows = 0;
  long n_cols = 0;
};

DatasetManifest dataset_manifest(const std::string& path,
                                 const std::string& target_column,
                                 const RobustRegressionProblem& p);

/// Serializes the manifest as JSON to out_path (written atomically).
void write_dataset_manifest(const DatasetManifest& m, const std::string& out_path);

/// Symmetric heavy-tailed law with density 3 / (4 (1 + |t|)^{5/2}) and tail
/// P(|xi| > t) = (1 + t)^{-3/2}. The alpha-th absolute moment is finite
/// exactly for alpha < 3/2.
struct HeavyTailNoise {
  static double quantile(double u);  // inverse CDF, u in (0, 1)
  static double cdf(double x);
  static double sample(RngStream& rng);
};

/// Inverse-CDF draw from HeavyTailNoise.
double sample_heavy_tail(RngStream& rng);

/// Oracles. Each factory copies the problem into the returned closure; the
/// subsampling oracle keeps per-instance epoch state, so give every run its
/// own instance.
GradientOracle noiseless_oracle(const DataFittingProblem& p);
GradientOracle additive_noise_oracle(const DataFittingProblem& p);
GradientOracle noiseless_oracle(const RobustRegressionProblem& p);
GradientOracle subsampling_oracle(const RobustRegressionProblem& p);

/// f(x) = ||x||^2 / 2, gradient x (L_1 = 1).
GradientOracle quadratic_oracle(int n);
GradientOracle additive_noise_quadratic_oracle(int n);

}  // namespace nsfom

#endif  // NSFOM_PROBLEMS_HPP

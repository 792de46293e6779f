#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "nsfom/problems.hpp"

using namespace nsfom;
namespace fs = std::filesystem;

namespace {

// Central finite differences, the independent gradient oracle.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                   double h = 1e-6) {
  Vector g(x.size());
  Vector e = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    e[i] = x[i] + h;
    const double fp = f(e);
    e[i] = x[i] - h;
    const double fm = f(e);
    e[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

std::string write_temp_csv(const std::string& name, const std::string& content) {
  const auto path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_SUITE_BEGIN("problems");

TEST_CASE("sigmoid values and identities") {
  CHECK(sigmoid(0.0) == doctest::Approx(0.5));
  CHECK(sigmoid(40.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigmoid(-40.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::isfinite(sigmoid(-745.0)));
  CHECK(std::isfinite(sigmoid(745.0)));
  RngStream rng(3, 3);
  for (int i = 0; i < 100; ++i) {
    const double t = 20.0 * (rng.uniform01() - 0.5);
    CHECK(sigmoid(-t) == doctest::Approx(1.0 - sigmoid(t)).epsilon(1e-12));
  }
}

TEST_CASE("data fitting objective and gradient hand values") {
  DataFittingProblem flat;
  flat.A = Matrix::Zero(1, 3);
  flat.b = Vector::Constant(1, 0.5);
  Vector x(3);
  x << 4, -2, 1;
  CHECK(df_objective(flat, x) == doctest::Approx(0.0));
  CHECK(df_gradient(flat, x).isZero());

  DataFittingProblem single;
  single.A = Matrix::Ones(1, 1);
  single.b = Vector::Zero(1);
  Vector x0 = Vector::Zero(1);
  CHECK(df_objective(single, x0) == doctest::Approx(0.25));
  CHECK(df_gradient(single, x0)[0] == doctest::Approx(0.25));
}

TEST_CASE("analytic gradients match central finite differences") {
  RngStream rng(17, 4);
  DataFittingProblem p = generate_synthetic(8, 24, rng);
  const auto f_df = [&](const Vector& v) { return df_objective(p, v); };
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(8);
    for (int i = 0; i < 8; ++i) x[i] = rng.gaussian() / std::sqrt(8.0);
    const Vector ga = df_gradient(p, x);
    const Vector gn = fd_gradient(f_df, x);
    CHECK((ga - gn).norm() <= 1e-5 * std::max(1e-8, ga.norm()));
  }

  RobustRegressionProblem rr;
  rr.features = Matrix::Zero(30, 5);
  rr.targets = Vector::Zero(30);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 5; ++j) rr.features(i, j) = rng.uniform01();
    rr.targets[i] = rng.uniform01();
  }
  std::vector<Eigen::Index> all(30);
  for (int i = 0; i < 30; ++i) all[i] = i;
  const auto f_rr = [&](const Vector& v) { return rr_objective(rr, v); };
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(5);
    for (int i = 0; i < 5; ++i) x[i] = rng.gaussian();
    const Vector ga = rr_batch_gradient(rr, x, all);
    const Vector gn = fd_gradient(f_rr, x);
    CHECK((ga - gn).norm() <= 1e-5 * std::max(1e-8, ga.norm()));
  }
}

TEST_CASE("robust loss values") {
  RobustRegressionProblem rr;
  rr.features = Matrix::Ones(1, 1);
  rr.targets = Vector::Zero(1);
  Vector x(1);
  x << 0;
  CHECK(rr_objective(rr, x) == doctest::Approx(0.0));  // phi(0) = 0
  x << 1;
  CHECK(rr_objective(rr, x) == doctest::Approx(0.5));  // phi(1) = 1/2
  // phi'(1) = 2*1/(1+1)^2 = 0.5
  CHECK(rr_batch_gradient(rr, x, {0})[0] == doctest::Approx(0.5));
  CHECK(rr_batch_gradient(rr, Vector::Zero(1), {0})[0] == doctest::Approx(0.0));
  CHECK_THROWS_AS(rr_batch_gradient(rr, x, {}), PreconditionViolated);
}

TEST_CASE("batch gradient is an unbiased estimator of the full gradient") {
  RngStream rng(29, 0);
  RobustRegressionProblem rr;
  const int rows = 40, dim = 4;
  rr.features = Matrix::Zero(rows, dim);
  rr.targets = Vector::Zero(rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < dim; ++j) rr.features(i, j) = rng.uniform01();
    rr.targets[i] = rng.uniform01();
  }
  Vector x(dim);
  for (int j = 0; j < dim; ++j) x[j] = rng.gaussian();

  std::vector<Eigen::Index> all(rows);
  for (int i = 0; i < rows; ++i) all[i] = i;
  const Vector full = rr_batch_gradient(rr, x, all);

  const int draws = 4000, batch = 8;
  Vector mean = Vector::Zero(dim), m2 = Vector::Zero(dim);
  for (int d = 0; d < draws; ++d) {
    std::vector<Eigen::Index> idx(batch);
    for (int j = 0; j < batch; ++j)
      idx[j] = static_cast<Eigen::Index>(rng.uniform_below(rows));
    const Vector g = rr_batch_gradient(rr, x, idx);
    mean += g;
    m2 += g.cwiseProduct(g);
  }
  mean /= draws;
  m2 /= draws;
  for (int j = 0; j < dim; ++j) {
    const double se = std::sqrt((m2[j] - mean[j] * mean[j]) / draws);
    CHECK(std::abs(mean[j] - full[j]) <= 5.0 * se + 1e-12);
  }
}

TEST_CASE("synthetic generation is reproducible and well scaled") {
  RngStream a(99, 0), b(99, 0);
  const auto p1 = generate_synthetic(50, 200, a);
  const auto p2 = generate_synthetic(50, 200, b);
  CHECK(p1.A == p2.A);
  CHECK(p1.b == p2.b);

  const double mean = p1.A.mean();
  const double var = (p1.A.array() - mean).square().mean();
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(50.0 * 200.0));
  CHECK(std::abs(var - 1.0) <= 0.1);
  for (int i = 0; i < p1.b.size(); ++i) CHECK(std::isfinite(p1.b[i]));
}

TEST_CASE("synthetic residual at the planted solution is tiny") {
  // Regenerate with the same draw order to recover x*.
  RngStream rng(1234, 0);
  const int n = 30, m = 120;
  Matrix A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rng.gaussian();
  Vector xstar(n);
  for (int j = 0; j < n; ++j) xstar[j] = rng.gaussian();

  RngStream replay(1234, 0);
  const auto p = generate_synthetic(n, m, replay);
  CHECK(p.A == A);
  CHECK(df_objective(p, xstar) <= m * std::pow(4e-4, 2));
}

TEST_CASE("heavy tail quantile and cdf") {
  CHECK(HeavyTailNoise::quantile(0.5) == doctest::Approx(0.0));
  CHECK(HeavyTailNoise::quantile(0.875) ==
        doctest::Approx(1.5198420997897463).epsilon(1e-14));
  CHECK(HeavyTailNoise::quantile(0.125) ==
        doctest::Approx(-1.5198420997897463).epsilon(1e-14));
  CHECK(HeavyTailNoise::cdf(0.0) == doctest::Approx(0.5));
  // Two-sided tail at 3: (1+3)^{-3/2} = 1/8.
  CHECK(1.0 - HeavyTailNoise::cdf(3.0) + HeavyTailNoise::cdf(-3.0) ==
        doctest::Approx(0.125).epsilon(1e-14));
  CHECK_THROWS_AS(HeavyTailNoise::quantile(0.0), PreconditionViolated);
  CHECK_THROWS_AS(HeavyTailNoise::quantile(1.0), PreconditionViolated);

  RngStream rng(5, 5);
  for (int i = 0; i < 200; ++i) {
    const double u = rng.uniform01();
    CHECK(HeavyTailNoise::cdf(HeavyTailNoise::quantile(u)) ==
          doctest::Approx(u).epsilon(1e-12));
  }
}

TEST_CASE("heavy tail empirical behavior at reduced scale") {
  RngStream rng(777, 0);
  const int n = 100000;
  std::vector<double> xs(n);
  int exceed3 = 0;
  for (int i = 0; i < n; ++i) {
    xs[i] = sample_heavy_tail(rng);
    if (std::abs(xs[i]) > 3.0) ++exceed3;
  }
  const double phat = static_cast<double>(exceed3) / n;
  const double se = std::sqrt(0.125 * 0.875 / n);
  CHECK(std::abs(phat - 0.125) <= 4.0 * se);

  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double F = HeavyTailNoise::cdf(xs[i]);
    ks = std::max(ks, std::abs(F - static_cast<double>(i + 1) / n));
    ks = std::max(ks, std::abs(F - static_cast<double>(i) / n));
  }
  CHECK(ks <= 0.01);
}

TEST_CASE("additive noise oracle adds one draw times the all-ones vector") {
  RngStream gen(41, 0);
  const auto p = generate_synthetic(6, 12, gen);
  const auto oracle = additive_noise_oracle(p);
  Vector x(6);
  for (int i = 0; i < 6; ++i) x[i] = 0.1 * i;

  RngStream rng(8, 8);
  RngStream fork = rng;
  const Vector s = oracle.sample_gradient(x, rng);
  const double xi = HeavyTailNoise::sample(fork);
  const Vector expected = df_gradient(p, x) + xi * Vector::Ones(6);
  CHECK(s == expected);
  CHECK(oracle.objective(x) == doctest::Approx(df_objective(p, x)));
}

TEST_CASE("additive noise oracle is empirically unbiased") {
  RngStream gen(43, 0);
  const auto p = generate_synthetic(4, 10, gen);
  const auto oracle = additive_noise_oracle(p);
  const Vector x = Vector::Zero(4);
  const Vector exact = df_gradient(p, x);

  RngStream rng(1000, 0);
  const int n = 100000;
  Vector mean = Vector::Zero(4), m2 = Vector::Zero(4);
  for (int i = 0; i < n; ++i) {
    const Vector g = oracle.sample_gradient(x, rng);
    mean += g;
    m2 += g.cwiseProduct(g);
  }
  mean /= n;
  m2 /= n;
  for (int j = 0; j < 4; ++j) {
    const double se = std::sqrt(std::max(0.0, m2[j] - mean[j] * mean[j]) / n);
    CHECK(std::abs(mean[j] - exact[j]) <= 5.0 * se);
  }
}

TEST_CASE("alpha moment diagnostic: 1.4 stable, 1.6 grows") {
  RngStream gen(47, 1);
  const auto p = generate_synthetic(4, 10, gen);
  const auto oracle = additive_noise_oracle(p);
  const Vector x = Vector::Zero(4);
  const Vector exact = df_gradient(p, x);

  RngStream rng(2000, 0);
  auto moment_batch = [&](int count, double power) {
    double acc = 0.0;
    for (int i = 0; i < count; ++i) {
      const Vector g = oracle.sample_gradient(x, rng);
      acc += std::pow((g - exact).norm(), power);
    }
    return acc / count;
  };

  // The 1.4 moment is finite: every 1e5-draw batch stays inside a fixed band
  // around the analytic value E||xi e||^1.4 = 4^0.7 * 1.5 * B(2.4, 0.1).
  // (The raw batch moments still swing a lot; the tail index of |xi|^1.4 is
  // only 15/14, so no tight concentration is available at this scale.)
  const double analytic = 35.1899406439764;
  for (int b = 0; b < 10; ++b) {
    const double moment = moment_batch(100000, 1.4);
    CHECK(moment > analytic / 5.0);
    CHECK(moment < analytic * 5.0);
  }

  // The 1.6 moment keeps growing with the sample size.
  RngStream rng2(2000, 1);
  double small_acc = 0, big_acc = 0;
  for (int i = 0; i < 1000; ++i)
    small_acc += std::pow((oracle.sample_gradient(x, rng2) - exact).norm(), 1.6);
  RngStream rng3(2000, 1);
  for (int i = 0; i < 100000; ++i)
    big_acc += std::pow((oracle.sample_gradient(x, rng3) - exact).norm(), 1.6);
  CHECK(big_acc / 100000 > small_acc / 1000);
}

TEST_CASE("csv loader rescales and detects headers") {
  const auto path = write_temp_csv("nsfom_basic.csv",
                                   "a,b,y\n"
                                   "2,5,0\n"
                                   "4,5,1\n"
                                   "6,5,2\n");
  const auto p = load_csv_dataset(path, "y");
  REQUIRE(p.features.rows() == 3);
  REQUIRE(p.features.cols() == 2);
  // Column a: (2,4,6) -> (0, 0.5, 1); column b constant -> 0.
  CHECK(p.features(0, 0) == doctest::Approx(0.0));
  CHECK(p.features(1, 0) == doctest::Approx(0.5));
  CHECK(p.features(2, 0) == doctest::Approx(1.0));
  CHECK(p.features.col(1).isZero());
  CHECK(p.targets[0] == doctest::Approx(0.0));
  CHECK(p.targets[2] == doctest::Approx(1.0));
  CHECK(p.batch_size == 3);

  // Target by index, no header.
  const auto path2 = write_temp_csv("nsfom_noheader.csv", "1,10\n2,20\n3,40\n");
  const auto p2 = load_csv_dataset(path2, "1");
  CHECK(p2.features.cols() == 1);
  CHECK(p2.targets[1] == doctest::Approx(1.0 / 3.0));
  fs::remove(path);
  fs::remove(path2);
}

TEST_CASE("csv loader degenerate and error cases") {
  const auto one_row = write_temp_csv("nsfom_one.csv", "5,7\n");
  const auto p = load_csv_dataset(one_row, "1");
  CHECK(p.features.rows() == 1);
  CHECK(p.features(0, 0) == doctest::Approx(0.0));
  CHECK(p.targets[0] == doctest::Approx(0.0));
  fs::remove(one_row);

  CHECK_THROWS_AS(load_csv_dataset("/nonexistent/nsfom.csv", "0"), IoError);

  const auto bad = write_temp_csv("nsfom_bad.csv", "1,2\n3,oops\n");
  try {
    load_csv_dataset(bad, "0");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
  fs::remove(bad);

  const auto ragged = write_temp_csv("nsfom_ragged.csv", "1,2\n3\n");
  CHECK_THROWS_AS(load_csv_dataset(ragged, "0"), ParseError);
  fs::remove(ragged);

  const auto ok = write_temp_csv("nsfom_target.csv", "1,2\n3,4\n");
  CHECK_THROWS_AS(load_csv_dataset(ok, "7"), PreconditionViolated);
  CHECK_THROWS_AS(load_csv_dataset(ok, "name"), PreconditionViolated);
  fs::remove(ok);
}

TEST_CASE("csv rescaling is invariant under affine column maps") {
  const auto p1_path = write_temp_csv("nsfom_aff1.csv", "1,0\n2,1\n4,0\n");
  const auto p2_path = write_temp_csv("nsfom_aff2.csv", "30,0\n50,1\n90,0\n");
  const auto p1 = load_csv_dataset(p1_path, "1");
  const auto p2 = load_csv_dataset(p2_path, "1");  // col0 scaled by 20, shifted by 10
  CHECK(p1.features == p2.features);
  fs::remove(p1_path);
  fs::remove(p2_path);
}

TEST_CASE("dataset manifest carries shape and round-trips through json") {
  const auto path = write_temp_csv("nsfom_manifest.csv", "1,2,3\n4,5,6\n");
  const auto p = load_csv_dataset(path, "2");
  const auto m = dataset_manifest(path, "2", p);
  CHECK(m.n_rows == 2);
  CHECK(m.n_cols == 3);

  const auto out = (fs::temp_directory_path() / "nsfom_manifest.json").string();
  write_dataset_manifest(m, out);
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["path"] == path);
  CHECK(j["target_column"] == "2");
  CHECK(j["n_rows"] == 2);
  CHECK(j["n_cols"] == 3);
  fs::remove(path);
  fs::remove(out);
}

TEST_CASE("subsampling oracle: shared realizations and epoch coverage") {
  RobustRegressionProblem rr;
  const int rows = 10;
  rr.features = Matrix::Zero(rows, 1);
  rr.targets = Vector::Zero(rows);
  for (int i = 0; i < rows; ++i) rr.features(i, 0) = (i + 1) / 10.0;
  rr.batch_size = 4;

  const auto oracle = subsampling_oracle(rr);
  Vector x(1);
  x << 1.0;

  // Forked calls under one realization reuse the batch: identical samples at
  // the same point, and a replay from the same stream state matches too.
  RngStream rng(3, 3);
  RngStream f1 = rng, f2 = rng, f3 = rng;
  const Vector g1 = oracle.sample_gradient(x, f1);
  const Vector g2 = oracle.sample_gradient(Vector::Constant(1, 2.0), f2);
  const Vector g3 = oracle.sample_gradient(x, f3);
  CHECK(g1 == g3);
  CHECK(g1 != g2);  // same batch, different evaluation point

  // One epoch = batches of sizes 4, 4, 2 covering each row exactly once, so
  // the |B|/rows-weighted sum of scaled batch gradients rebuilds the full
  // gradient.
  const auto fresh = subsampling_oracle(rr);
  RngStream seq(9, 9);
  Vector reconstructed = Vector::Zero(1);
  const int batch_sizes[3] = {4, 4, 2};
  for (int b = 0; b < 3; ++b) {
    const Vector g = fresh.sample_gradient(x, seq);
    reconstructed += (static_cast<double>(batch_sizes[b]) / rows) * g;
  }
  std::vector<Eigen::Index> all(rows);
  for (int i = 0; i < rows; ++i) all[i] = i;
  const Vector full = rr_batch_gradient(rr, x, all);
  CHECK(reconstructed.isApprox(full, 1e-12));
}

TEST_CASE("quadratic oracles") {
  const auto o = quadratic_oracle(3);
  Vector x(3);
  x << 1, 2, 2;
  CHECK(o.objective(x) == doctest::Approx(4.5));
  CHECK(o.exact_gradient(x) == x);

  const auto noisy = additive_noise_quadratic_oracle(3);
  RngStream rng(4, 4);
  RngStream fork = rng;
  const Vector s = noisy.sample_gradient(x, rng);
  const double xi = HeavyTailNoise::sample(fork);
  CHECK(s == (x + xi * Vector::Ones(3)).eval());
}

TEST_SUITE_END();

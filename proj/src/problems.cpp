#include "nsfom/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace nsfom {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double df_objective(const DataFittingProblem& p, const Vector& x) {
  if (x.size() != p.A.cols())
    throw PreconditionViolated("df_objective: dimension mismatch");
  const Vector z = p.A * x;
  double f = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double r = sigmoid(z[i]) - p.b[i];
    f += r * r;
  }
  return f;
}

Vector df_gradient(const DataFittingProblem& p, const Vector& x) {
  if (x.size() != p.A.cols())
    throw PreconditionViolated("df_gradient: dimension mismatch");
  const Vector z = p.A * x;
  Vector w(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double s = sigmoid(z[i]);
    w[i] = 2.0 * (s - p.b[i]) * s * (1.0 - s);
  }
  return p.A.transpose() * w;
}

DataFittingProblem generate_synthetic(int n, int m, RngStream& rng) {
  if (n < 1 || m < 1)
    throw PreconditionViolated("generate_synthetic: n, m must be positive");
  DataFittingProblem p;
  p.A.resize(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) p.A(i, j) = rng.gaussian();
  Vector xstar(n);
  for (int j = 0; j < n; ++j) xstar[j] = rng.gaussian();
  p.b.resize(m);
  const Vector z = p.A * xstar;
  for (int i = 0; i < m; ++i) p.b[i] = sigmoid(z[i]) + 1e-4 * rng.gaussian();
  return p;
}

namespace {

double robust_loss(double t) { return t * t / (1.0 + t * t); }

double robust_loss_deriv(double t) {
  const double d = 1.0 + t * t;
  return 2.0 * t / (d * d);
}

}  // namespace

double rr_objective(const RobustRegressionProblem& p, const Vector& x) {
  if (x.size() != p.features.cols())
    throw PreconditionViolated("rr_objective: dimension mismatch");
  const Vector r = p.features * x - p.targets;
  double f = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) f += robust_loss(r[i]);
  return f;
}

Vector rr_batch_gradient(const RobustRegressionProblem& p, const Vector& x,
                         const std::vector<Eigen::Index>& batch) {
  if (x.size() != p.features.cols())
    throw PreconditionViolated("rr_batch_gradient: dimension mismatch");
  if (batch.empty())
    throw PreconditionViolated("rr_batch_gradient: batch must be nonempty");
  Vector g = Vector::Zero(x.size());
  for (Eigen::Index i : batch) {
    if (i < 0 || i >= p.features.rows())
      throw PreconditionViolated("rr_batch_gradient: batch index out of range");
    const double r = p.features.row(i).dot(x) - p.targets[i];
    g += robust_loss_deriv(r) * p.features.row(i).transpose();
  }
  const double scale = static_cast<double>(p.features.rows()) /
                       static_cast<double>(batch.size());
  return scale * g;
}

namespace {

bool parse_double(std::string_view cell, double& out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !cell.empty();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.emplace_back(trim(std::string_view(line).substr(start)));
      break;
    }
    cells.emplace_back(trim(std::string_view(line).substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

}  // namespace

RobustRegressionProblem load_csv_dataset(const std::string& path,
                                         const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw IoError("load_csv_dataset: cannot open '" + path + "'");

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_row(line));
  }
  if (rows.empty()) throw ParseError("load_csv_dataset: '" + path + "' has no rows");

  // Header detection: a first row with any non-numeric cell is a header.
  std::vector<std::string> header;
  double probe;
  bool first_numeric = true;
  for (const auto& cell : rows.front())
    if (!parse_double(cell, probe)) first_numeric = false;
  std::size_t data_start = 0;
  if (!first_numeric) {
    header = rows.front();
    data_start = 1;
    if (rows.size() == 1)
      throw ParseError("load_csv_dataset: header-only file '" + path + "'");
  }

  const std::size_t n_cols = rows[data_start].size();
  const std::size_t n_rows = rows.size() - data_start;
  Matrix table(n_rows, n_cols);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const auto& cells = rows[data_start + r];
    if (cells.size() != n_cols) {
      std::ostringstream msg;
      msg << "load_csv_dataset: row " << (data_start + r + 1) << " has "
          << cells.size() << " cells, expected " << n_cols;
      throw ParseError(msg.str());
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      double v;
      if (!parse_double(cells[c], v)) {
        std::ostringstream msg;
        msg << "load_csv_dataset: non-numeric cell at row "
            << (data_start + r + 1) << ", column " << (c + 1) << " ('"
            << cells[c] << "')";
        throw ParseError(msg.str());
      }
      table(r, c) = v;
    }
  }

  // Resolve the target column: 0-based index, or a header name.
  long target = -1;
  {
    long idx;
    auto sv = trim(target_column);
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), idx);
    if (ec == std::errc() && ptr == sv.data() + sv.size()) {
      target = idx;
    } else {
      for (std::size_t c = 0; c < header.size(); ++c)
        if (trim(header[c]) == sv) target = static_cast<long>(c);
      if (target < 0)
        throw PreconditionViolated("load_csv_dataset: target column '" +
                                   target_column + "' not found in header");
    }
  }
  if (target < 0 || target >= static_cast<long>(n_cols))
    throw PreconditionViolated("load_csv_dataset: target column index out of range");

  // Per-column min-max rescaling to [0, 1]; constant columns map to 0.
  for (std::size_t c = 0; c < n_cols; ++c) {
    const double lo = table.col(c).minCoeff();
    const double hi = table.col(c).maxCoeff();
    if (hi > lo)
      table.col(c) = (table.col(c).array() - lo) / (hi - lo);
    else
      table.col(c).setZero();
  }

  RobustRegressionProblem p;
  p.targets = table.col(target);
  p.features.resize(n_rows, n_cols - 1);
  Eigen::Index out = 0;
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (static_cast<long>(c) == target) continue;
    p.features.col(out++) = table.col(c);
  }
  p.batch_size = static_cast<int>(std::min<std::size_t>(100, n_rows));
  return p;
}

DatasetManifest dataset_manifest(const std::string& path,
                                 const std::string& target_column,
                                 const RobustRegressionProblem& p) {
  DatasetManifest m;
  m.path = path;
  m.target_column = target_column;
  m.n_rows = static_cast<long>(p.features.rows());
  m.n_cols = static_cast<long>(p.features.cols()) + 1;
  return m;
}

void write_dataset_manifest(const DatasetManifest& m, const std::string& out_path) {
  nlohmann::ordered_json j;
  j["path"] = m.path;
  j["target_column"] = m.target_column;
  j["n_rows"] = m.n_rows;
  j["n_cols"] = m.n_cols;
  const std::string tmp = out_path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("write_dataset_manifest: cannot write '" + tmp + "'");
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, out_path);
}

double HeavyTailNoise::quantile(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw PreconditionViolated("HeavyTailNoise::quantile: u must lie in (0, 1)");
  const double w = 2.0 * std::min(u, 1.0 - u);
  const double magnitude = std::pow(w, -2.0 / 3.0) - 1.0;
  return u >= 0.5 ? magnitude : -magnitude;
}

double HeavyTailNoise::cdf(double x) {
  if (x >= 0.0) return 1.0 - 0.5 * std::pow(1.0 + x, -1.5);
  return 0.5 * std::pow(1.0 - x, -1.5);
}

double HeavyTailNoise::sample(RngStream& rng) { return quantile(rng.uniform01()); }

double sample_heavy_tail(RngStream& rng) { return HeavyTailNoise::sample(rng); }

GradientOracle noiseless_oracle(const DataFittingProblem& p) {
  auto shared = std::make_shared<const DataFittingProblem>(p);
  GradientOracle o;
  o.dimension = static_cast<int>(shared->A.cols());
  o.objective = [shared](const Vector& x) { return df_objective(*shared, x); };
  o.exact_gradient = [shared](const Vector& x) { return df_gradient(*shared, x); };
  o.sample_gradient = [shared](const Vector& x, RngStream&) {
    return df_gradient(*shared, x);
  };
  return o;
}

GradientOracle additive_noise_oracle(const DataFittingProblem& p) {
  auto o = noiseless_oracle(p);
  const int n = o.dimension;
  auto exact = o.exact_gradient;
  o.sample_gradient = [exact, n](const Vector& x, RngStream& rng) -> Vector {
    return exact(x) + HeavyTailNoise::sample(rng) * Vector::Ones(n);
  };
  return o;
}

GradientOracle noiseless_oracle(const RobustRegressionProblem& p) {
  auto shared = std::make_shared<const RobustRegressionProblem>(p);
  const Eigen::Index rows = shared->features.rows();
  std::vector<Eigen::Index> all(rows);
  for (Eigen::Index i = 0; i < rows; ++i) all[i] = i;
  GradientOracle o;
  o.dimension = static_cast<int>(shared->features.cols());
  o.objective = [shared](const Vector& x) { return rr_objective(*shared, x); };
  o.exact_gradient = [shared, all](const Vector& x) {
    return rr_batch_gradient(*shared, x, all);
  };
  o.sample_gradient = [shared, all](const Vector& x, RngStream&) {
    return rr_batch_gradient(*shared, x, all);
  };
  return o;
}

GradientOracle subsampling_oracle(const RobustRegressionProblem& p) {
  auto shared = std::make_shared<const RobustRegressionProblem>(p);
  const Eigen::Index rows = shared->features.rows();
  const Eigen::Index batch = std::min<Eigen::Index>(shared->batch_size, rows);
  if (batch < 1)
    throw PreconditionViolated("subsampling_oracle: empty problem");

  // Epoch plan: uniform without replacement, reshuffled from the caller's
  // stream when a pass completes. Each call first draws a realization tag;
  // callers that evaluate several points under one noise realization fork
  // the stream, repeat the tag, and get the cached batch back. One oracle
  // instance per run.
  struct Epoch {
    std::vector<Eigen::Index> order;
    std::size_t cursor = 0;
    std::uint64_t last_tag = 0;
    bool has_batch = false;
    std::vector<Eigen::Index> last_batch;
  };
  auto epoch = std::make_shared<Epoch>();
  epoch->order.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) epoch->order[i] = i;
  epoch->cursor = epoch->order.size();  // force a shuffle on first use

  GradientOracle o;
  o.dimension = static_cast<int>(shared->features.cols());
  o.objective = [shared](const Vector& x) { return rr_objective(*shared, x); };
  std::vector<Eigen::Index> all = epoch->order;
  o.exact_gradient = [shared, all](const Vector& x) {
    return rr_batch_gradient(*shared, x, all);
  };
  o.sample_gradient = [shared, epoch, batch](const Vector& x, RngStream& rng) {
    const std::uint64_t tag = rng.next_u64();
    if (!epoch->has_batch || tag != epoch->last_tag) {
      if (epoch->cursor >= epoch->order.size()) {
        // Fisher-Yates reshuffle driven by the run's stream.
        auto& ord = epoch->order;
        for (std::size_t i = ord.size(); i > 1; --i) {
          const std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
          std::swap(ord[i - 1], ord[j]);
        }
        epoch->cursor = 0;
      }
      const std::size_t take = std::min<std::size_t>(
          static_cast<std::size_t>(batch), epoch->order.size() - epoch->cursor);
      epoch->last_batch.assign(epoch->order.begin() + epoch->cursor,
                               epoch->order.begin() + epoch->cursor + take);
      epoch->cursor += take;
      epoch->last_tag = tag;
      epoch->has_batch = true;
    }
    return rr_batch_gradient(*shared, x, epoch->last_batch);
  };
  return o;
}

GradientOracle quadratic_oracle(int n) {
  if (n < 1) throw PreconditionViolated("quadratic_oracle: n must be positive");
  GradientOracle o;
  o.dimension = n;
  o.objective = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  o.exact_gradient = [](const Vector& x) -> Vector { return x; };
  o.sample_gradient = [](const Vector& x, RngStream&) -> Vector { return x; };
  return o;
}

GradientOracle additive_noise_quadratic_oracle(int n) {
  auto o = quadratic_oracle(n);
  o.sample_gradient = [n](const Vector& x, RngStream& rng) -> Vector {
    return x + HeavyTailNoise::sample(rng) * Vector::Ones(n);
  };
  return o;
}

}  // namespace nsfom

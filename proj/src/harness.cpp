#include "nsfom/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "detail/sha1.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace nsfom {

namespace {

constexpr std::uint64_t kDataStreamId = 1ULL << 40;
constexpr std::uint64_t kQqStreamBase = (1ULL << 40) + 1000;
constexpr std::uint64_t kIotaStreamBase = 1ULL << 41;

void require(bool ok, const std::string& msg) {
  if (!ok) throw PreconditionViolated(msg);
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// R-7 quantile on a sorted vector.
double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) throw PreconditionViolated("quantile of empty vector");
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write '" + tmp + "'");
    out << content;
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Instance {
  std::function<GradientOracle()> make_noisy;
  GradientOracle reference;
  Vector x0;
  long epoch_iterations = 100;
  std::optional<DatasetManifest> dataset;
  std::string hash_payload;  // raw dataset bytes for csv problems
};

Instance instantiate(const ProblemDescriptor& desc, std::uint64_t base_seed) {
  Instance inst;
  if (const auto* sd = std::get_if<SyntheticDf>(&desc)) {
    RngStream rng(base_seed, kDataStreamId);
    auto problem = generate_synthetic(sd->n, sd->m, rng);
    inst.reference = noiseless_oracle(problem);
    auto noisy = additive_noise_oracle(problem);
    inst.make_noisy = [noisy]() { return noisy; };
    inst.x0 = Vector::Zero(sd->n);
    inst.epoch_iterations = 100;
  } else if (const auto* cr = std::get_if<CsvRr>(&desc)) {
    auto problem = load_csv_dataset(cr->path, cr->target_column);
    inst.reference = noiseless_oracle(problem);
    inst.make_noisy = [problem]() { return subsampling_oracle(problem); };
    inst.x0 = Vector::Zero(problem.features.cols());
    const long rows = problem.features.rows();
    const long batch = std::max(1, problem.batch_size);
    inst.epoch_iterations = (rows + batch - 1) / batch;
    inst.dataset = dataset_manifest(cr->path, cr->target_column, problem);
    inst.hash_payload = read_file(cr->path);
  } else {
    const auto& qd = std::get<Quadratic>(desc);
    require(qd.n >= 1, "quadratic problem needs n >= 1");
    inst.reference = quadratic_oracle(qd.n);
    auto noisy = additive_noise_quadratic_oracle(qd.n);
    inst.make_noisy = [noisy]() { return noisy; };
    // Start away from the minimizer at distance 10.
    inst.x0 = Vector::Ones(qd.n) * (10.0 / std::sqrt(static_cast<double>(qd.n)));
    inst.epoch_iterations = 100;
  }
  return inst;
}

std::vector<long> checkpoint_grid(long K) {
  std::vector<long> grid;
  grid.push_back(0);
  for (long c = 1; c <= std::min<long>(64, K); ++c) grid.push_back(c);
  long c = 64;
  while (c < K) {
    c = std::max(c + 1, static_cast<long>(c * 1.2));
    if (c >= K) c = K;
    grid.push_back(c);
  }
  return grid;
}

long iterations_for(const MethodConfig& mc, long budget) {
  long calls = 0;
  long n = 0;
  while (calls < budget) {
    switch (mc.method) {
      case Method::PM:
        calls += pm_step_cost();
        break;
      case Method::MEM:
        calls += mem_step_cost(mc.schedule.p - 1);
        break;
      case Method::RM: {
        const double theta_prev =
            n == 0 ? 1.0 : rm_schedule(mc.schedule, n - 1).theta;
        calls += rm_step_cost(theta_prev);
        break;
      }
    }
    ++n;
  }
  return std::max<long>(n, 1);
}

struct RunData {
  std::vector<TrialRecord> records;  // one per iterate
  std::vector<double> avg_grad;      // running average of exact grad norms
  double min_f = std::numeric_limits<double>::infinity();
};

RunData execute_run(const MethodConfig& mc, const std::string& label,
                    const Instance& inst, std::uint64_t base_seed,
                    int replication, long budget) {
  GradientOracle noisy = inst.make_noisy();
  RngStream rng(base_seed, static_cast<std::uint64_t>(replication));
  const long iters = iterations_for(mc, budget);
  RunData data;
  data.records = run(mc.method, mc.normalized, noisy, mc.schedule, inst.x0,
                     iters, rng, 1, mc.sample_mode);
  data.avg_grad.resize(data.records.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < data.records.size(); ++j) {
    const auto& rec = data.records[j];
    if (!std::isfinite(rec.f_val) || !std::isfinite(rec.grad_norm) ||
        !std::isfinite(rec.mom_norm)) {
      std::ostringstream msg;
      msg << "NaN in telemetry: method=" << label << " replication=" << replication
          << " k=" << rec.k;
      throw NumericalFailure(msg.str());
    }
    acc += rec.grad_norm;
    data.avg_grad[j] = acc / static_cast<double>(j + 1);
    if (rec.oracle_calls <= budget) data.min_f = std::min(data.min_f, rec.f_val);
  }
  return data;
}

std::string problem_type(const ProblemDescriptor& d) {
  if (std::holds_alternative<SyntheticDf>(d)) return "synthetic-df";
  if (std::holds_alternative<CsvRr>(d)) return "csv-rr";
  return "quadratic";
}

ordered_json problem_json(const ProblemDescriptor& d) {
  ordered_json j;
  j["type"] = problem_type(d);
  if (const auto* sd = std::get_if<SyntheticDf>(&d)) {
    j["n"] = sd->n;
    j["m"] = sd->m;
  } else if (const auto* cr = std::get_if<CsvRr>(&d)) {
    j["path"] = cr->path;
    j["target_column"] = cr->target_column;
  } else {
    j["n"] = std::get<Quadratic>(d).n;
  }
  return j;
}

ordered_json method_json(const MethodConfig& mc, const std::string& label) {
  ordered_json j;
  j["label"] = label;
  j["method"] = mc.method == Method::PM ? "pm" : mc.method == Method::MEM ? "em" : "rm";
  j["normalized"] = mc.normalized;
  if (mc.schedule.alpha)
    j["alpha"] = *mc.schedule.alpha;
  else
    j["alpha"] = nullptr;
  j["p"] = mc.schedule.p;
  j["eta_scale"] = mc.schedule.eta_scale;
  j["sample_mode"] =
      mc.sample_mode == SampleMode::SharedSample ? "shared" : "independent";
  return j;
}

std::vector<std::string> resolve_labels(const std::vector<MethodConfig>& methods) {
  std::vector<std::string> labels;
  labels.reserve(methods.size());
  for (const auto& mc : methods) {
    std::string base = mc.label.empty() ? method_label(mc) : mc.label;
    std::string candidate = base;
    int suffix = 2;
    while (std::find(labels.begin(), labels.end(), candidate) != labels.end())
      candidate = base + "-" + std::to_string(suffix++);
    labels.push_back(candidate);
  }
  return labels;
}

// Index of the last record with oracle_calls <= budget.
std::size_t record_at_calls(const std::vector<TrialRecord>& recs, long calls) {
  std::size_t lo = 0;
  for (std::size_t j = 0; j < recs.size(); ++j) {
    if (recs[j].oracle_calls <= calls) lo = j;
    else break;
  }
  return lo;
}

std::vector<Vector> trajectory(const MethodConfig& mc, const GradientOracle& oracle,
                               const Vector& x0, long steps, RngStream rng) {
  std::vector<Vector> xs{x0};
  xs.reserve(static_cast<std::size_t>(steps) + 1);
  switch (mc.method) {
    case Method::PM: {
      PMState st = make_pm_state(x0);
      for (long k = 0; k < steps; ++k) {
        const StepPair s = pm_schedule(mc.schedule, k);
        st = pm_step(st, oracle, s.eta, s.theta, rng, mc.normalized);
        xs.push_back(st.x);
      }
      break;
    }
    case Method::MEM: {
      const int q = mc.schedule.p - 1;
      MEMState st = make_mem_state(x0);
      for (long k = 0; k < steps; ++k) {
        const MemPair s = mem_schedule(mc.schedule, k);
        st = mem_step(st, oracle, s.eta, compute_weights(s.gamma, q),
                      mc.sample_mode, rng, mc.normalized);
        xs.push_back(st.x);
      }
      break;
    }
    case Method::RM: {
      RMState st = make_rm_state(x0);
      for (long k = 0; k < steps; ++k) {
        const StepPair s = rm_schedule(mc.schedule, k);
        st = rm_step(st, oracle, s.eta, s.theta, rng, mc.normalized);
        xs.push_back(st.x);
      }
      break;
    }
  }
  return xs;
}

}  // namespace

std::string method_label(const MethodConfig& mc) {
  std::string label = mc.normalized ? "nsfom-" : "sfom-";
  switch (mc.method) {
    case Method::PM: label += "pm"; break;
    case Method::MEM: label += "em"; break;
    case Method::RM: label += "rm"; break;
  }
  return label;
}

double standard_normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "standard_normal_quantile: p must lie in (0, 1)");
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the exact CDF.
  const double err = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = err * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

SlopeFit fit_rate_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4)
    throw PreconditionViolated("fit_rate_slope: need at least 4 points");
  const auto n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& [k, v] : points) {
    if (!(k > 0.0) || !(v > 0.0))
      throw PreconditionViolated("fit_rate_slope: points must be positive");
    sx += std::log(k);
    sy += std::log(v);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [k, v] : points) {
    const double dx = std::log(k) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (sxx <= 0.0)
    throw PreconditionViolated("fit_rate_slope: K values must not be identical");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0;
  for (const auto& [k, v] : points) {
    const double r = std::log(v) - (intercept + slope * std::log(k));
    ssr += r * r;
  }
  const double se =
      points.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  return {slope, se};
}

void export_qq_data(std::vector<double> samples, const std::string& out_path) {
  if (samples.size() < 10)
    throw PreconditionViolated("export_qq_data: need at least 10 samples");
  std::sort(samples.begin(), samples.end());
  std::ostringstream out;
  out << "normal_quantile,sample\n";
  const auto n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double rank = (static_cast<double>(i) + 0.5) / n;
    out << fmt(standard_normal_quantile(rank)) << ',' << fmt(samples[i]) << '\n';
  }
  write_atomic(out_path, out.str());
}

void export_experiment_qq(const ExperimentConfig& cfg) {
  require(!cfg.output_dir.empty(), "export_experiment_qq: output_dir required");
  require(!cfg.methods.empty(), "export_experiment_qq: no methods configured");
  const Instance inst = instantiate(cfg.problem, cfg.base_seed);
  fs::create_directories(cfg.output_dir);

  std::vector<double> errors, lipschitz;
  for (const auto& mc : cfg.methods) {
    validate(mc.schedule);
    GradientOracle noisy = inst.make_noisy();
    const auto xs = trajectory(mc, noisy, inst.x0, inst.epoch_iterations,
                               RngStream(cfg.base_seed, 0));
    for (std::size_t k = 1; k < xs.size(); ++k) {
      RngStream probe(cfg.base_seed, kQqStreamBase + k);
      RngStream fork_curr = probe;
      const Vector g_curr = noisy.sample_gradient(xs[k], fork_curr);
      RngStream fork_prev = probe;
      const Vector g_prev = noisy.sample_gradient(xs[k - 1], fork_prev);
      errors.push_back((g_curr - inst.reference.exact_gradient(xs[k])).norm());
      const double dx = (xs[k] - xs[k - 1]).norm();
      if (dx > 0.0) lipschitz.push_back((g_curr - g_prev).norm() / dx);
    }
  }
  export_qq_data(errors, (fs::path(cfg.output_dir) / "qq_gradient_errors.csv").string());
  export_qq_data(lipschitz,
                 (fs::path(cfg.output_dir) / "qq_lipschitz_estimates.csv").string());
  if (inst.dataset)
    write_dataset_manifest(*inst.dataset,
                           (fs::path(cfg.output_dir) / "dataset_manifest.json").string());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  require(!cfg.methods.empty(), "run_experiment: no methods configured");
  require(cfg.K >= 1, "run_experiment: K must be >= 1");
  require(cfg.replications >= 1, "run_experiment: replications must be >= 1");
  for (const auto& mc : cfg.methods) validate(mc.schedule);

  const std::vector<std::string> labels = resolve_labels(cfg.methods);
  const long budget = cfg.fstar_budget > 0
                          ? cfg.fstar_budget
                          : static_cast<long>(std::ceil(1.2 * static_cast<double>(cfg.K)));
  require(budget >= cfg.K, "run_experiment: fstar_budget must cover K");

  const Instance inst = instantiate(cfg.problem, cfg.base_seed);
  const std::vector<long> grid = checkpoint_grid(cfg.K);

  // One task per (method, replication); workers pull tasks, results land in
  // pre-allocated slots, and every write happens after the join.
  const std::size_t n_methods = cfg.methods.size();
  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<std::vector<RunData>> results(n_methods, std::vector<RunData>(reps));
  {
    std::atomic<std::size_t> next{0};
    const std::size_t total = n_methods * reps;
    const int n_workers =
        std::max(1, std::min<int>(cfg.workers, static_cast<int>(total)));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n_workers));
    auto work = [&](int tid) {
      try {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= total) break;
          const std::size_t mi = i / reps;
          const std::size_t r = i % reps;
          results[mi][r] = execute_run(cfg.methods[mi], labels[mi], inst,
                                       cfg.base_seed, static_cast<int>(r), budget);
        }
      } catch (...) {
        failures[static_cast<std::size_t>(tid)] = std::current_exception();
      }
    };
    if (n_workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(n_workers));
      for (int t = 0; t < n_workers; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    for (const auto& e : failures)
      if (e) std::rethrow_exception(e);
  }

  double fstar = std::numeric_limits<double>::infinity();
  for (const auto& per_method : results)
    for (const auto& rd : per_method) fstar = std::min(fstar, rd.min_f);

  const double f0 = inst.reference.objective(inst.x0);
  const double grad0 = inst.reference.exact_gradient(inst.x0).norm();
  const double gap0 = f0 - fstar;
  if (!(gap0 > 0.0))
    throw NumericalFailure("run_experiment: f(x0) does not exceed f*");
  if (!(grad0 > 0.0))
    throw NumericalFailure("run_experiment: x0 is already stationary");

  ExperimentResult out;
  out.fstar = fstar;
  out.f0 = f0;
  out.grad_norm0 = grad0;

  std::vector<std::string> raw_csv(n_methods), summary_csv(n_methods);
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    MetricSeries series;
    series.label = labels[mi];

    // Per replication and checkpoint: pick the last record within the call
    // budget of the checkpoint.
    std::vector<std::vector<std::size_t>> pick(reps);
    std::vector<RngStream> iota(reps, RngStream());
    for (std::size_t r = 0; r < reps; ++r) {
      pick[r].reserve(grid.size());
      for (long c : grid) pick[r].push_back(record_at_calls(results[mi][r].records, c));
      iota[r] = RngStream(cfg.base_seed,
                          kIotaStreamBase ^ fnv1a64(labels[mi]) ^
                              (static_cast<std::uint64_t>(r) * 0x9e3779b97f4a7c15ULL));
    }

    std::ostringstream raw;
    raw << "method,replication,oracle_calls,k,f,rel_obj_gap,grad_norm,"
           "rel_grad_norm,mom_norm\n";
    std::vector<std::vector<double>> gap_cols(grid.size()), grad_cols(grid.size()),
        avg_cols(grid.size()), samp_cols(grid.size());
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& rd = results[mi][r];
      for (std::size_t ci = 0; ci < grid.size(); ++ci) {
        const auto& rec = rd.records[pick[r][ci]];
        const double rel_gap = std::max(0.0, (rec.f_val - fstar) / gap0);
        const double rel_grad = rec.grad_norm / grad0;
        const long iota_k =
            static_cast<long>(iota[r].uniform_below(static_cast<std::uint64_t>(rec.k) + 1));
        const double sampled = rd.records[static_cast<std::size_t>(iota_k)].grad_norm;
        gap_cols[ci].push_back(rel_gap);
        grad_cols[ci].push_back(rel_grad);
        avg_cols[ci].push_back(rd.avg_grad[pick[r][ci]]);
        samp_cols[ci].push_back(sampled);
        raw << labels[mi] << ',' << r << ',' << rec.oracle_calls << ',' << rec.k
            << ',' << fmt(rec.f_val) << ',' << fmt(rel_gap) << ','
            << fmt(rec.grad_norm) << ',' << fmt(rel_grad) << ','
            << fmt(rec.mom_norm) << '\n';
      }
    }

    std::ostringstream summary;
    summary << "oracle_calls,rel_obj_gap_median,rel_obj_gap_q25,rel_obj_gap_q75,"
               "rel_grad_norm_median,rel_grad_norm_q25,rel_grad_norm_q75,"
               "avg_grad_norm_median,sampled_grad_norm_median\n";
    for (std::size_t ci = 0; ci < grid.size(); ++ci) {
      auto med = [](std::vector<double> v, double q) {
        std::sort(v.begin(), v.end());
        return quantile_sorted(v, q);
      };
      CheckpointStat st;
      st.oracle_calls = grid[ci];
      st.rel_obj_gap_median = med(gap_cols[ci], 0.5);
      st.rel_obj_gap_q25 = med(gap_cols[ci], 0.25);
      st.rel_obj_gap_q75 = med(gap_cols[ci], 0.75);
      st.rel_grad_norm_median = med(grad_cols[ci], 0.5);
      st.rel_grad_norm_q25 = med(grad_cols[ci], 0.25);
      st.rel_grad_norm_q75 = med(grad_cols[ci], 0.75);
      st.avg_grad_norm_median = med(avg_cols[ci], 0.5);
      st.sampled_grad_norm_median = med(samp_cols[ci], 0.5);
      series.points.push_back(st);
      summary << st.oracle_calls << ',' << fmt(st.rel_obj_gap_median) << ','
              << fmt(st.rel_obj_gap_q25) << ',' << fmt(st.rel_obj_gap_q75) << ','
              << fmt(st.rel_grad_norm_median) << ',' << fmt(st.rel_grad_norm_q25)
              << ',' << fmt(st.rel_grad_norm_q75) << ','
              << fmt(st.avg_grad_norm_median) << ','
              << fmt(st.sampled_grad_norm_median) << '\n';
    }
    raw_csv[mi] = raw.str();
    summary_csv[mi] = summary.str();
    out.series.push_back(std::move(series));
  }

  // Manifest: config echo, shared f*, and a git-style hash of the inputs.
  ordered_json inputs;
  inputs["problem"] = problem_json(cfg.problem);
  inputs["methods"] = ordered_json::array();
  for (std::size_t mi = 0; mi < n_methods; ++mi)
    inputs["methods"].push_back(method_json(cfg.methods[mi], labels[mi]));
  inputs["K"] = cfg.K;
  inputs["replications"] = cfg.replications;
  inputs["base_seed"] = cfg.base_seed;
  inputs["fstar_budget"] = budget;
  const std::string hash =
      detail::sha1_blob_hex(inputs.dump() + inst.hash_payload);

  ordered_json manifest = inputs;
  manifest["workers"] = cfg.workers;
  manifest["f0"] = f0;
  manifest["grad_norm0"] = grad0;
  manifest["fstar"] = fstar;
  manifest["content_hash"] = hash;
  if (inst.dataset) {
    ordered_json dj;
    dj["path"] = inst.dataset->path;
    dj["target_column"] = inst.dataset->target_column;
    dj["n_rows"] = inst.dataset->n_rows;
    dj["n_cols"] = inst.dataset->n_cols;
    manifest["dataset"] = dj;
  }
  out.manifest_json = manifest.dump(2) + "\n";

  if (!cfg.output_dir.empty()) {
    fs::create_directories(cfg.output_dir);
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      const fs::path base = fs::path(cfg.output_dir) / labels[mi];
      write_atomic(base.string() + ".csv", raw_csv[mi]);
      write_atomic(base.string() + "_summary.csv", summary_csv[mi]);
    }
    write_atomic((fs::path(cfg.output_dir) / "manifest.json").string(),
                 out.manifest_json);
    if (inst.dataset)
      write_dataset_manifest(
          *inst.dataset,
          (fs::path(cfg.output_dir) / "dataset_manifest.json").string());
    if (cfg.qq_export) export_experiment_qq(cfg);
  }
  return out;
}

}  // namespace nsfom

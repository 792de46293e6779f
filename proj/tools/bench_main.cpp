// Benchmark CLI for the normalized stochastic first-order methods.
//
//   bench --problem synthetic-df --n 50 --m 200 --methods nsfom-rm,sfom-rm
//         --k 500 --reps 20 --seed 7 --out runs/
//   bench fit-rate runs/nsfom-rm.csv
//   bench qq --problem csv-rr --csv data.csv --target-col quality --out runs/

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsfom/harness.hpp"

namespace {

using namespace nsfom;

struct CliOptions {
  std::string problem = "synthetic-df";
  int n = 50;
  int m = 200;
  std::string csv;
  std::string target_col = "0";
  std::string methods = "nsfom-pm,nsfom-em,nsfom-rm,sfom-pm,sfom-em,sfom-rm";
  double alpha = 0.0;  // 0 means unset
  bool alpha_unknown = false;
  int p = 2;
  long k = 500;
  int reps = 20;
  std::uint64_t seed = 0;
  double eta_scale = 1.0;
  std::string sample_mode = "shared";
  std::string out;
  int workers = 1;
  long fstar_budget = 0;
};

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

MethodConfig parse_method(const std::string& name, const CliOptions& opt) {
  static const std::map<std::string, std::pair<Method, bool>> table = {
      {"nsfom-pm", {Method::PM, true}},  {"nsfom-em", {Method::MEM, true}},
      {"nsfom-rm", {Method::RM, true}},  {"sfom-pm", {Method::PM, false}},
      {"sfom-em", {Method::MEM, false}}, {"sfom-rm", {Method::RM, false}},
  };
  const auto it = table.find(name);
  if (it == table.end())
    throw CLI::ValidationError("--methods", "unknown method '" + name + "'");
  MethodConfig mc;
  mc.method = it->second.first;
  mc.normalized = it->second.second;
  mc.schedule.method = mc.method;
  mc.schedule.p = opt.p;
  mc.schedule.eta_scale = opt.eta_scale;
  if (!opt.alpha_unknown && opt.alpha != 0.0) mc.schedule.alpha = opt.alpha;
  mc.sample_mode = opt.sample_mode == "independent" ? SampleMode::IndependentSamples
                                                    : SampleMode::SharedSample;
  return mc;
}

ExperimentConfig build_config(const CliOptions& opt) {
  ExperimentConfig cfg;
  if (opt.problem == "synthetic-df") {
    cfg.problem = SyntheticDf{opt.n, opt.m};
  } else if (opt.problem == "csv-rr") {
    if (opt.csv.empty())
      throw CLI::ValidationError("--csv", "csv-rr needs a dataset file");
    cfg.problem = CsvRr{opt.csv, opt.target_col};
  } else {
    cfg.problem = Quadratic{opt.n};
  }
  for (const auto& name : split_csv_list(opt.methods))
    cfg.methods.push_back(parse_method(name, opt));
  if (cfg.methods.empty())
    throw CLI::ValidationError("--methods", "need at least one method");
  cfg.K = opt.k;
  cfg.replications = opt.reps;
  cfg.base_seed = opt.seed;
  cfg.fstar_budget = opt.fstar_budget;
  cfg.output_dir = opt.out;
  cfg.workers = opt.workers;
  return cfg;
}

int run_fit_rate(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw IoError("fit-rate: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("fit-rate: empty file");
  const auto header = split_csv_list(line);
  long calls_col = -1, value_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "oracle_calls") calls_col = static_cast<long>(i);
    if (header[i] == column) value_col = static_cast<long>(i);
  }
  if (calls_col < 0 || value_col < 0)
    throw ParseError("fit-rate: file lacks 'oracle_calls' or '" + column + "'");

  std::map<long, std::pair<double, long>> acc;  // calls -> (sum, count)
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    const auto cells = split_csv_list(line);
    if (cells.empty()) continue;
    if (static_cast<long>(cells.size()) <= std::max(calls_col, value_col))
      throw ParseError("fit-rate: short row " + std::to_string(row));
    const long calls = std::stol(cells[static_cast<std::size_t>(calls_col)]);
    const double value = std::stod(cells[static_cast<std::size_t>(value_col)]);
    auto& slot = acc[calls];
    slot.first += value;
    slot.second += 1;
  }
  std::vector<std::pair<double, double>> points;
  for (const auto& [calls, sum_count] : acc) {
    if (calls <= 0) continue;  // the k = 0 checkpoint has no log abscissa
    points.emplace_back(static_cast<double>(calls),
                        sum_count.first / static_cast<double>(sum_count.second));
  }
  const SlopeFit fit = fit_rate_slope(points);
  std::printf("slope = %.6g +/- %.6g (%zu checkpoints, column %s)\n", fit.slope,
              fit.stderr_value, points.size(), column.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark runner for normalized stochastic first-order methods"};
  app.fallthrough();

  CliOptions opt;
  app.add_option("--problem", opt.problem, "Problem family")
      ->check(CLI::IsMember({"synthetic-df", "csv-rr", "quadratic"}));
  app.add_option("--n", opt.n, "Problem dimension");
  app.add_option("--m", opt.m, "Synthetic data-fitting row count");
  app.add_option("--csv", opt.csv, "Dataset file for csv-rr");
  app.add_option("--target-col", opt.target_col,
                 "Target column (0-based index or header name)");
  app.add_option("--methods", opt.methods,
                 "Comma list from nsfom-pm,nsfom-em,nsfom-rm,sfom-pm,sfom-em,sfom-rm");
  app.add_option("--alpha", opt.alpha, "Known tail exponent in (1, 2]");
  app.add_flag("--alpha-unknown", opt.alpha_unknown,
               "Use the exponent-free schedules");
  app.add_option("--p", opt.p, "Smoothness order for the extrapolated method");
  app.add_option("--k", opt.k, "Oracle-call horizon of the reported metrics");
  app.add_option("--reps", opt.reps, "Replications per method");
  app.add_option("--seed", opt.seed, "Base seed");
  app.add_option("--eta-scale", opt.eta_scale, "Step-size multiplier");
  app.add_option("--sample-mode", opt.sample_mode, "Extrapolated-point sampling")
      ->check(CLI::IsMember({"shared", "independent"}));
  app.add_option("--out", opt.out, "Output directory");
  app.add_option("--workers", opt.workers, "Parallel replication workers");
  app.add_option("--fstar-budget", opt.fstar_budget,
                 "Oracle-call budget of the f* search (default 1.2k)");

  auto* fit = app.add_subcommand("fit-rate", "Fit a log-log rate slope from a run CSV");
  std::string fit_path;
  std::string fit_column = "rel_grad_norm";
  fit->add_option("csv", fit_path, "Per-method CSV produced by a run")->required();
  fit->add_option("--column", fit_column, "Value column to fit");

  auto* qq = app.add_subcommand(
      "qq", "Export first-epoch QQ data (gradient errors, Lipschitz estimates)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }

  try {
    if (opt.alpha != 0.0 && !(opt.alpha > 1.0 && opt.alpha <= 2.0)) {
      std::cerr << "--alpha must lie in (1, 2]\n";
      return 2;
    }
    if (opt.alpha_unknown && opt.alpha != 0.0) {
      std::cerr << "--alpha and --alpha-unknown are mutually exclusive\n";
      return 2;
    }
    if (opt.p < 2) {
      std::cerr << "--p must be at least 2\n";
      return 2;
    }
    if (fit->parsed()) return run_fit_rate(fit_path, fit_column);
    if (qq->parsed()) {
      if (opt.out.empty()) {
        std::cerr << "qq needs --out\n";
        return 2;
      }
      ExperimentConfig cfg = build_config(opt);
      export_experiment_qq(cfg);
      std::printf("wrote QQ data under %s\n", opt.out.c_str());
      return 0;
    }
    ExperimentConfig cfg = build_config(opt);
    const ExperimentResult res = run_experiment(cfg);
    std::printf("f* = %.12g over %zu methods x %d replications\n", res.fstar,
                res.series.size(), cfg.replications);
    for (const auto& s : res.series) {
      const auto& last = s.points.back();
      std::printf("%-10s final rel_obj_gap (median) = %.6g  rel_grad_norm (median) = %.6g\n",
                  s.label.c_str(), last.rel_obj_gap_median,
                  last.rel_grad_norm_median);
    }
    if (!cfg.output_dir.empty())
      std::printf("outputs written to %s\n", cfg.output_dir.c_str());
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

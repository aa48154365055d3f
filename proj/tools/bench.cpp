// Benchmark command-line front end.
//
//   bench run --config cfg.json --out results/
//   bench scenario --kind sphere --seed 7 --dump data.json
//   bench frontier --metrics results/metrics.csv --out frontier.svg
//
// Exit codes: 0 success, 1 configuration error, 2 when more than 20% of the
// benchmark seeds failed to train.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pattn/errors.hpp"
#include "pattn/experiments.hpp"
#include "pattn/svg.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw pattn::ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  pattn::ExperimentConfig cfg = pattn::ExperimentConfig::from_json_string(slurp(config_path));
  cfg.out_dir = out_dir;
  cfg.validate();
  const std::vector<pattn::MetricsRow> rows = pattn::run_benchmark(cfg);
  pattn::emit_outputs(rows, cfg);
  const double failed = pattn::failed_seed_fraction(rows);
  std::cout << "wrote " << out_dir << "/metrics.csv (" << rows.size() << " rows, "
            << failed * 100.0 << "% seeds failed)\n";
  return failed > 0.2 ? 2 : 0;
}

int cmd_scenario(const std::string& kind, std::uint64_t seed, const std::string& dump_path) {
  const pattn::Scenario scenario = pattn::scenario_from_name(kind);
  const pattn::ExperimentConfig defaults = pattn::ExperimentConfig::defaults_for(scenario);
  const pattn::ScenarioBundle bundle = pattn::generate_scenario(
      scenario, seed, defaults.train_size, defaults.test_size, defaults.noise_std);
  std::ofstream f(dump_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + dump_path);
  f << pattn::dataset_to_json_string(bundle, scenario, seed) << '\n';
  std::cout << "wrote " << dump_path << '\n';
  return 0;
}

struct CsvStats {
  std::vector<std::string> models;  // first-appearance order
  std::vector<double> mse_sum, d_k_sum;
  std::vector<std::size_t> count;
};

int cmd_frontier(const std::string& metrics_path, const std::string& out_path) {
  std::ifstream f(metrics_path, std::ios::binary);
  if (!f) throw pattn::ConfigError("cannot read " + metrics_path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("scenario,model,seed,mse,d_k", 0) != 0)
    throw pattn::ConfigError(metrics_path + ": not a metrics CSV (bad header)");

  CsvStats stats;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 6)
      throw pattn::ConfigError(metrics_path + ": line " + std::to_string(lineno) +
                               " has fewer than 6 fields");
    const std::string& model = fields[1];
    const double mse = std::strtod(fields[3].c_str(), nullptr);
    const double d_k = std::strtod(fields[4].c_str(), nullptr);
    if (!std::isfinite(mse) || !std::isfinite(d_k)) continue;  // failed seed
    std::size_t idx = 0;
    for (; idx < stats.models.size(); ++idx)
      if (stats.models[idx] == model) break;
    if (idx == stats.models.size()) {
      stats.models.push_back(model);
      stats.mse_sum.push_back(0.0);
      stats.d_k_sum.push_back(0.0);
      stats.count.push_back(0);
    }
    stats.mse_sum[idx] += mse;
    stats.d_k_sum[idx] += d_k;
    stats.count[idx] += 1;
  }
  if (stats.models.empty())
    throw pattn::ConfigError(metrics_path + ": no usable data rows");

  std::vector<pattn::svg::Series> series(stats.models.size());
  for (std::size_t i = 0; i < stats.models.size(); ++i) {
    series[i].name = stats.models[i];
    const double mse = stats.mse_sum[i] / static_cast<double>(stats.count[i]);
    const double d_k = stats.d_k_sum[i] / static_cast<double>(stats.count[i]);
    for (int k = 0; k <= 10; ++k) {
      const double lambda = 0.1 * k;
      series[i].x.push_back(lambda);
      series[i].y.push_back(pattn::combined_score(mse, d_k, lambda));
    }
  }
  pattn::svg::write_line_chart(out_path, "Score vs constraint/error trade-off", "lambda",
                               "lambda*mse + (1-lambda)*d_K", series);
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-respecting regression benchmark"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  CLI::App* run = app.add_subcommand("run", "Run a benchmark from a JSON config");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory");

  std::string kind;
  std::uint64_t seed = 0;
  std::string dump_path;
  CLI::App* scenario = app.add_subcommand("scenario", "Generate and dump one scenario dataset");
  scenario->add_option("--kind", kind, "sphere|square|disk|rose|variety")->required();
  scenario->add_option("--seed", seed, "scenario seed");
  scenario->add_option("--dump", dump_path, "output JSON path")->required();

  std::string metrics_path, frontier_out = "frontier.svg";
  CLI::App* frontier = app.add_subcommand("frontier", "Plot combined scores from a metrics CSV");
  frontier->add_option("--metrics", metrics_path, "metrics.csv from a previous run")->required();
  frontier->add_option("--out", frontier_out, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (scenario->parsed()) return cmd_scenario(kind, seed, dump_path);
    if (frontier->parsed()) return cmd_frontier(metrics_path, frontier_out);
  } catch (const pattn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

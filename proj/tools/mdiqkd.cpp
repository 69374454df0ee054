/**
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>

#include "mdiqkd/config.hpp"

namespace {

using namespace mdiqkd;

RunConfig build_config(const std::string& config_path,
                       const std::vector<std::string>& overrides,
                       const std::string& out_path) {
  RunConfig cfg;
  if (!config_path.empty()) cfg.load_file(config_path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!out_path.empty()) cfg.out = out_path;
  cfg.validate();
  return cfg;
}

int with_output(const RunConfig& cfg,
                const std::function<void(std::ostream&)>& emit) {
  if (cfg.out.empty()) {
    emit(std::cout);
    return 0;
  }
  std::ofstream os(cfg.out);
  if (!os) {
    std::cerr << "error: cannot open output file: " << cfg.out << "\n";
    return 1;
  }
  emit(os);
  return 0;
}

struct PointData {
  YieldTable yields;
  SourceSet sources;
};

PointData point_data(const RunConfig& cfg) {
  const SourceSet sources = cfg.source_set();
  const RelayModel relay(cfg.detector_params(),
                         cfg.resolve_cutoff(sources.max_intensity()));
  return {relay.yields(ChannelParams{cfg.loss_db}), sources};
}

int run_gains(const RunConfig& cfg) {
  const PointData d = point_data(cfg);
  const GainTable gains =
      compute_gain_table(d.yields, d.sources, cfg.tail_epsilon);
  return with_output(cfg, [&](std::ostream& os) { write_gain_csv(os, gains); });
}

int run_bounds(const RunConfig& cfg) {
  const PointData d = point_data(cfg);
  const GainTable gains =
      compute_gain_table(d.yields, d.sources, cfg.tail_epsilon);
  const auto dists = build_source_distributions(d.sources, d.yields.cutoff(),
                                                cfg.tail_epsilon);
  const BoundEstimates bounds = estimate_bounds(gains, dists);
  return with_output(cfg,
                     [&](std::ostream& os) { write_bounds_csv(os, bounds); });
}

int run_rate(const RunConfig& cfg) {
  const PointData d = point_data(cfg);
  const RateReport report = evaluate_point(d.yields, d.sources,
                                           cfg.protocol_params(),
                                           cfg.tail_epsilon);
  return with_output(cfg, [&](std::ostream& os) {
    write_rate_csv(os, {report});
  });
}

int run_sweep(const RunConfig& cfg, int parallel) {
  const SourceSet sources = cfg.source_set();
  const RelayModel relay(cfg.detector_params(),
                         cfg.resolve_cutoff(sources.max_intensity()));
  const auto rows = sweep(relay, sources, cfg.protocol_params(),
                          cfg.sweep_config(), parallel, cfg.tail_epsilon);
  return with_output(cfg,
                     [&](std::ostream& os) { write_sweep_csv(os, rows); });
}

int run_optimize(const RunConfig& cfg, int parallel) {
  const SourceSet sources = cfg.source_set();
  const double max_mu = std::max(sources.max_intensity(), cfg.search_hi);
  const RelayModel relay(cfg.detector_params(), cfg.resolve_cutoff(max_mu));
  const auto rows =
      optimize_sweep(relay, sources, cfg.protocol_params(), cfg.sweep_config(),
                     cfg.protocols(), parallel, cfg.tail_epsilon);
  return with_output(cfg,
                     [&](std::ostream& os) { write_optimize_csv(os, rows); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoy-state MDI-QKD gain, bound, and key-rate calculator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  int parallel = 1;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--set", overrides, "override a config key (key=value)");
  app.add_option("--out", out_path, "output CSV path (default stdout)");
  app.add_option("--parallel", parallel, "worker threads for sweeps");

  auto* gains = app.add_subcommand("gains", "dump the simulated gain table");
  auto* bounds =
      app.add_subcommand("bounds", "single-photon-pair bound estimates");
  auto* rate = app.add_subcommand("rate", "key rates at one loss point");
  auto* sweep_cmd =
      app.add_subcommand("sweep", "key rates across the loss range");
  auto* optimize =
      app.add_subcommand("optimize", "optimal intensities across the range");

  CLI11_PARSE(app, argc, argv);

  try {
    const mdiqkd::RunConfig cfg =
        build_config(config_path, overrides, out_path);
    if (gains->parsed()) return run_gains(cfg);
    if (bounds->parsed()) return run_bounds(cfg);
    if (rate->parsed()) return run_rate(cfg);
    if (sweep_cmd->parsed()) return run_sweep(cfg, parallel);
    if (optimize->parsed()) return run_optimize(cfg, parallel);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

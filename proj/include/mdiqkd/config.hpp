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

#ifndef MDIQKD_CONFIG_HPP
#define MDIQKD_CONFIG_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mdiqkd/optimize.hpp"

namespace mdiqkd {

/**
 * Batch-run configuration assembled from key=value pairs (config file
 * first, then command-line overrides). Unknown keys are rejected.
 */
struct RunConfig {
  // Table-style defaults
  double e_0 = 0.5;  ///< accepted for completeness; must stay 0.5
  double e_d = 0.015;
  double p_d = 3e-6;
  double f = 1.16;

  // Z-basis intensities; nu_* (Bob) defaults to mu_* (Alice), X basis
  // defaults to the Z values.
  double mu1 = 0.1;
  double mu2 = 0.15;
  std::optional<double> nu1, nu2;
  std::optional<double> x_mu1, x_mu2, x_nu1, x_nu2;

  double loss_db = 20.0;  ///< single-point subcommands

  double loss_start = 0.0;
  double loss_stop = 40.0;
  double loss_step = 1.0;
  std::string protocol = "all";  ///< optimize: one protocol name or "all"
  bool free_decoy = false;
  double search_lo = 0.01;
  double search_hi = 1.5;

  int cutoff = 0;  ///< 0 = automatic from the largest intensity
  double tail_epsilon = 1e-12;
  std::string out;  ///< output path; empty = stdout

  void set(const std::string& key, const std::string& value);
  void load_file(const std::string& path);
  void validate() const;

  SourceSet source_set() const;
  DetectorParams detector_params() const;
  ProtocolParams protocol_params() const;
  SweepConfig sweep_config() const;
  std::vector<Protocol> protocols() const;
  int resolve_cutoff(double max_intensity) const;
};

/// Format a value with 12 significant digits for CSV emission.
std::string csv_number(double v);

void write_gain_csv(std::ostream& os, const GainTable& gains);
void write_bounds_csv(std::ostream& os, const BoundEstimates& bounds);
void write_rate_csv(std::ostream& os, const std::vector<RateReport>& rows);
void write_sweep_csv(std::ostream& os, const std::vector<RateReport>& rows);
void write_optimize_csv(std::ostream& os,
                        const std::vector<OptimumPoint>& rows);

}  // namespace mdiqkd

#endif  // MDIQKD_CONFIG_HPP

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

#ifndef MDIQKD_OPTIMIZE_HPP
#define MDIQKD_OPTIMIZE_HPP

#include <string>
#include <vector>

#include "mdiqkd/keyrate.hpp"

namespace mdiqkd {

enum class Protocol { Standard, ZAnchored, XAnchored, Infinite };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

/// Raw (unclamped) rate of the selected protocol.
double protocol_rate(const RateReport& report, Protocol p);

struct SweepConfig {
  double loss_start = 0.0;
  double loss_stop = 40.0;
  double loss_step = 1.0;
  bool free_decoy = false;     ///< also optimize the decoy intensity
  double search_lo = 0.01;     ///< intensity search interval
  double search_hi = 1.5;

  void validate() const;
  std::vector<double> loss_points() const;
};

/// Printed when no intensity produced a positive rate.
inline constexpr double kSentinelIntensity = -1.0;

struct OptimumPoint {
  double loss_db = 0.0;
  Protocol protocol = Protocol::ZAnchored;
  double decoy_intensity = kSentinelIntensity;
  double signal_intensity = kSentinelIntensity;
  double rate = 0.0;  ///< clamped to [0, inf)
};

/**
 * Maximize one protocol's key rate over the signal intensity (and the
 * decoy intensity too when free_decoy is set), symmetric parties. Coarse
 * log-spaced grid scan followed by golden-section refinement per
 * coordinate, two rounds. The relay model must cover search_hi.
 */
OptimumPoint optimize_point(const RelayModel& relay, const SourceSet& base,
                            const ProtocolParams& protocol_params,
                            double loss_db, Protocol protocol,
                            const SweepConfig& config,
                            double tail_epsilon = kDefaultTailEpsilon);

/// Fixed-intensity rate reports over the loss range, ordered by loss.
std::vector<RateReport> sweep(const RelayModel& relay, const SourceSet& sources,
                              const ProtocolParams& protocol_params,
                              const SweepConfig& config, int parallel = 1,
                              double tail_epsilon = kDefaultTailEpsilon);

/// Intensity optimization along the loss range for each listed protocol.
std::vector<OptimumPoint> optimize_sweep(
    const RelayModel& relay, const SourceSet& base,
    const ProtocolParams& protocol_params, const SweepConfig& config,
    const std::vector<Protocol>& protocols, int parallel = 1,
    double tail_epsilon = kDefaultTailEpsilon);

}  // namespace mdiqkd

#endif  // MDIQKD_OPTIMIZE_HPP

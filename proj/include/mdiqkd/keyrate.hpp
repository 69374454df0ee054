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

#ifndef MDIQKD_KEYRATE_HPP
#define MDIQKD_KEYRATE_HPP

#include "mdiqkd/decoy.hpp"
#include "mdiqkd/optics.hpp"

namespace mdiqkd {

struct ProtocolParams {
  double error_correction_inefficiency = 1.16;

  void validate() const {
    if (error_correction_inefficiency < 1.0) {
      throw std::invalid_argument(
          "ProtocolParams: error correction inefficiency below 1");
    }
  }
};

/// Shannon binary entropy in bits, H(0) = H(1) = 0 by continuity.
double binary_entropy(double e);

/// Pieces shared by every key-rate formula at one evaluation point.
struct RateTerms {
  double a1_signal = 0.0;  ///< Alice signal single-photon coefficient
  double b1_signal = 0.0;  ///< Bob signal single-photon coefficient
  double gain_yy_z = 0.0;  ///< S_yy in the Z basis
  double error_yy_z = 0.0; ///< E_yy in the Z basis
  double f = 1.16;
};

/// Separate decoy analysis in each basis: Z yield bound with the
/// X-anchored error bound.
double key_rate_standard(const BoundEstimates& bounds, const RateTerms& terms);

/// Z-anchored variant: the Z yield bound also feeds the error-bound
/// denominator, so the X basis only needs its decoy source.
double key_rate_z_anchored(const BoundEstimates& bounds,
                           const RateTerms& terms);

/// X-anchored variant: the X yield bound is used for both terms; the Z
/// basis only needs its signal source.
double key_rate_x_anchored(const BoundEstimates& bounds,
                           const RateTerms& terms);

/// Infinite-decoy baseline using the true single-photon-pair yield and
/// error rate from the simulator.
double key_rate_infinite(const YieldTable& yields, const RateTerms& terms);

/// Everything computed at one channel-loss point.
struct RateReport {
  double loss_db = 0.0;
  double r_standard = 0.0;
  double r_z = 0.0;
  double r_x = 0.0;
  double r_infinite = 0.0;
  BoundEstimates bounds;
  double y11_z = 0.0;
  double y11_x = 0.0;
  double e11_true_x = 0.0;
  double gain_yy_z = 0.0;
  double error_yy_z = 0.0;
};

/// Full pipeline at one point: gains from the yield table, decoy bounds,
/// all four rates. Rates are kept raw (possibly negative).
RateReport evaluate_point(const YieldTable& yields, const SourceSet& sources,
                          const ProtocolParams& protocol,
                          double tail_epsilon = kDefaultTailEpsilon);

}  // namespace mdiqkd

#endif  // MDIQKD_KEYRATE_HPP

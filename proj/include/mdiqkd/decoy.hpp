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

#ifndef MDIQKD_DECOY_HPP
#define MDIQKD_DECOY_HPP

#include <iosfwd>
#include <string>

#include "mdiqkd/optics.hpp"
#include "mdiqkd/source.hpp"

namespace mdiqkd {

/// Vacuum-subtracted gain combinations entering the single-photon-pair
/// bounds, for one basis.
struct TildeQuantities {
  double S_xx = 0.0;
  double S_xy = 0.0;
  double S_yx = 0.0;
  double S_yy = 0.0;
  double T_xx = 0.0;
};

TildeQuantities tilde_quantities(const GainTable& gains, Basis basis,
                                 const SourceDistributions& dists);

/// Lower bound on the single-photon-pair yield from three-intensity data.
/// `value` is clamped to [0, inf); `raw` keeps the pre-clamp number for
/// diagnostics.
struct S11Bound {
  double value = 0.0;
  double raw = 0.0;
};

S11Bound s11_lower_bound(const TildeQuantities& tq,
                         const SourceDistributions& dists);

/// Upper bound on the single-photon-pair error rate, capped at 1. The
/// anchoring basis is chosen through which s11 lower bound is passed in.
double e11_upper_bound(double t_tilde_xx, double a1, double b1,
                       double s11_lower);

struct BoundEstimates {
  double s11_lower_z = 0.0;
  double s11_lower_x = 0.0;
  double s11_raw_z = 0.0;
  double s11_raw_x = 0.0;
  double e11_upper_x = 1.0;         ///< X-anchored denominator
  double e11_upper_x_via_z = 1.0;   ///< Z-anchored denominator
  Basis basis_used = Basis::Z;
};

/// Full bound pipeline for a simulated or ingested gain table. Requires
/// three-intensity data in the Z basis; X-basis signal data is needed only
/// for the X-anchored quantities (s11_lower_x stays 0 without it).
BoundEstimates estimate_bounds(const GainTable& gains,
                               const std::array<SourceDistributions, 2>& dists);

/// Parse measured gains from CSV with columns basis,alpha,beta,S,T
/// (basis in {Z,X}, alpha/beta in {o,x,y}). Missing entries stay NaN and
/// trip an incomplete-data error when consumed.
GainTable read_gain_table_csv(std::istream& in);
GainTable read_gain_table_csv_file(const std::string& path);

}  // namespace mdiqkd

#endif  // MDIQKD_DECOY_HPP

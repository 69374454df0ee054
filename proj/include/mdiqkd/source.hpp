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

#ifndef MDIQKD_SOURCE_HPP
#define MDIQKD_SOURCE_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>

namespace mdiqkd {

/// Default truncation threshold for photon-number distributions.
inline constexpr double kDefaultTailEpsilon = 1e-12;

/**
 * Truncated photon-number distribution of one source.
 *
 * probs[k] is the probability of emitting exactly k photons. Truncation
 * may only remove mass, so the vector sums to 1 minus the removed tail.
 */
struct PhotonNumberDistribution {
  Eigen::VectorXd probs;
  std::optional<double> intensity;

  int cutoff() const { return static_cast<int>(probs.size()) - 1; }

  /// probs[k], treating indices past the cutoff as zero.
  double at(int k) const {
    return (k >= 0 && k < probs.size()) ? probs[k] : 0.0;
  }

  /// Copy padded with zeros up to the requested cutoff.
  PhotonNumberDistribution padded(int new_cutoff) const;
};

/// Poisson photon-number statistics of a phase-randomized coherent pulse,
/// truncated at the smallest cutoff whose tail mass is below tail_epsilon.
PhotonNumberDistribution poisson_distribution(
    double mu, double tail_epsilon = kDefaultTailEpsilon);

/// Wrap an explicit probability vector (validated, not renormalized).
PhotonNumberDistribution explicit_distribution(Eigen::VectorXd probs);

/// Zero-photon point mass.
PhotonNumberDistribution vacuum_distribution();

struct DecoyConditionResult {
  bool satisfied = true;
  int first_violating_k = -1;
};

/**
 * Check the decoy-state ordering a'_k/a_k >= a'_2/a_2 >= a'_1/a_1 for all
 * k >= 2, where the unprimed coefficients come from the weaker (decoy)
 * source and the primed ones from the stronger (signal) source. Ratios
 * with zero denominator count as +inf and satisfy the inequality.
 */
DecoyConditionResult check_decoy_condition(
    const PhotonNumberDistribution& decoy,
    const PhotonNumberDistribution& signal);

/// Decoy and optional signal mean photon numbers for one party in one basis.
/// The vacuum source is implicit (intensity exactly zero).
struct BasisIntensities {
  double decoy = 0.1;
  std::optional<double> signal = 0.15;
};

/// The three sources per party per basis.
struct SourceSet {
  BasisIntensities alice_z, bob_z, alice_x, bob_x;

  /// Same intensities for both parties and both bases.
  static SourceSet symmetric(double decoy, double signal);

  /// Throws std::invalid_argument on a mis-ordered or non-positive set.
  void validate() const;

  double max_intensity() const;
};

}  // namespace mdiqkd

#endif  // MDIQKD_SOURCE_HPP

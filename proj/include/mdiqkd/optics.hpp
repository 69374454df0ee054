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

#ifndef MDIQKD_OPTICS_HPP
#define MDIQKD_OPTICS_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "mdiqkd/source.hpp"

namespace mdiqkd {

enum class Basis { Z = 0, X = 1 };

/// Source index in gain tables: vacuum, decoy, signal.
enum SourceIndex { kVacuum = 0, kDecoy = 1, kSignal = 2 };

/// Background error rate of a dark-count-only click (model symmetry
/// constant, kept for analytic cross-checks).
inline constexpr double kBackgroundError = 0.5;

/**
 * Two-arm channel with detector efficiency folded into the loss budget.
 * The relay sits midway, so each arm carries the square root of the
 * total transmittance.
 */
struct ChannelParams {
  double total_loss_db = 20.0;

  double total_transmittance() const {
    return std::pow(10.0, -total_loss_db / 10.0);
  }
  double arm_transmittance() const {
    return std::sqrt(total_transmittance());
  }

  void validate() const {
    if (total_loss_db < 0.0) {
      throw std::invalid_argument("ChannelParams: negative loss");
    }
  }
};

struct DetectorParams {
  double dark_count = 3e-6;     ///< click probability per detector per window
  double misalignment = 0.015;  ///< sin^2 of Bob's polarization rotation

  void validate() const {
    if (dark_count < 0.0 || dark_count > 1e-2) {
      throw std::invalid_argument("DetectorParams: dark_count outside [0, 1e-2]");
    }
    if (misalignment < 0.0 || misalignment > 0.5) {
      throw std::invalid_argument(
          "DetectorParams: misalignment outside [0, 0.5]");
    }
  }
};

/// Polarization angle (radians) a party prepares for the given basis/bit.
/// Z: H (0) or V (pi/2); X: +45 or -45 degrees.
double preparation_angle(Basis basis, int bit);

/// Binomial loss kernel L(n, k) = C(n, k) xi^k (1-xi)^(n-k), 0 <= k <= n <= cutoff.
Eigen::MatrixXd loss_matrix(int cutoff, double xi);

/// Push a photon-number distribution through a transmittance-xi channel.
PhotonNumberDistribution apply_loss(const PhotonNumberDistribution& dist,
                                    double xi);

/// One output occupation of the four relay modes (1H, 1V, 2H, 2V) with its
/// probability.
struct ModeOccupation {
  std::array<int, 4> photons;
  double probability;
};

/**
 * Exact photon-number statistics behind the relay's balanced beam splitter
 * for k photons at angle pol_a meeting l photons at angle pol_b.
 * Probabilities over all occupations sum to 1.
 */
std::vector<ModeOccupation> beam_splitter_occupations(int k, double pol_a,
                                                      int l, double pol_b);

struct BsmOutcome {
  double psi_minus = 0.0;
  double psi_plus = 0.0;
  double success() const { return psi_minus + psi_plus; }
  double fail() const { return 1.0 - psi_minus - psi_plus; }
};

/**
 * Relay announcement statistics for a (k, l) photon pair at the given
 * polarization angles. Threshold detectors click when their mode is
 * occupied or via an independent dark count. psi_minus is the {1H,2V} or
 * {1V,2H} coincidence, psi_plus the {1H,1V} or {2H,2V} one; any other
 * click pattern is a failure.
 */
BsmOutcome bsm_outcome_distribution(int k, double pol_a, int l, double pol_b,
                                    const DetectorParams& det);

/// Success and wrong-bit probabilities per (n, m) photon-pair input,
/// averaged over the basis preparations, loss included.
struct YieldTable {
  std::array<Eigen::MatrixXd, 2> success;
  std::array<Eigen::MatrixXd, 2> wrong;
  double loss_db = 0.0;

  int cutoff() const { return static_cast<int>(success[0].rows()) - 1; }
  const Eigen::MatrixXd& Y(Basis b) const {
    return success[static_cast<int>(b)];
  }
  const Eigen::MatrixXd& T(Basis b) const {
    return wrong[static_cast<int>(b)];
  }
};

/**
 * Loss-independent relay statistics, computed once per detector
 * configuration and cutoff, then folded with the binomial loss kernel to
 * produce yield tables along a sweep. Immutable after construction.
 */
class RelayModel {
 public:
  RelayModel(const DetectorParams& det, int cutoff);

  int cutoff() const { return cutoff_; }
  const DetectorParams& detector() const { return det_; }

  /// Pre-loss success probability per (k, l) relay input.
  const Eigen::MatrixXd& relay_success(Basis b) const {
    return success_[static_cast<int>(b)];
  }
  /// Pre-loss wrong-bit probability per (k, l) relay input.
  const Eigen::MatrixXd& relay_wrong(Basis b) const {
    return wrong_[static_cast<int>(b)];
  }

  YieldTable yields(const ChannelParams& channel) const;

 private:
  DetectorParams det_;
  int cutoff_;
  std::array<Eigen::MatrixXd, 2> success_;
  std::array<Eigen::MatrixXd, 2> wrong_;
};

/// Convenience single-entry evaluation (builds a throwaway relay model).
std::pair<double, double> yields_for_pair(int n, int m, Basis basis,
                                          const ChannelParams& channel,
                                          const DetectorParams& det);

/// Observed gains S and wrong-bit rates T per source pair and basis.
/// Row index is Alice's source, column Bob's, in {vacuum, decoy, signal}.
struct GainTable {
  std::array<Eigen::Matrix3d, 2> S;
  std::array<Eigen::Matrix3d, 2> T;
  std::array<bool, 2> signal_present{true, true};

  const Eigen::Matrix3d& gains(Basis b) const { return S[static_cast<int>(b)]; }
  const Eigen::Matrix3d& wrong(Basis b) const { return T[static_cast<int>(b)]; }
  /// Error rate T/S; entries with zero gain are 0.
  Eigen::Matrix3d errors(Basis b) const;
};

/// Distributions actually used for one gain-table evaluation (padded to a
/// common cutoff), needed again by the decoy bound algebra.
struct SourceDistributions {
  PhotonNumberDistribution alice_decoy, alice_signal;
  PhotonNumberDistribution bob_decoy, bob_signal;
};

/// Build the per-basis source distributions at the yield-table cutoff.
/// X-basis entries without a signal intensity reuse the decoy distribution
/// as a placeholder and are flagged absent in the gain table.
std::array<SourceDistributions, 2> build_source_distributions(
    const SourceSet& sources, int cutoff,
    double tail_epsilon = kDefaultTailEpsilon);

GainTable compute_gain_table(const YieldTable& yields,
                             const SourceSet& sources,
                             double tail_epsilon = kDefaultTailEpsilon);

/// Cutoff large enough that every source's truncated tail is below
/// tail_epsilon.
int cutoff_for(double max_intensity,
               double tail_epsilon = kDefaultTailEpsilon);

}  // namespace mdiqkd

#endif  // MDIQKD_OPTICS_HPP

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

#include "mdiqkd/optics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mdiqkd {

double preparation_angle(Basis basis, int bit) {
  if (bit != 0 && bit != 1) {
    throw std::invalid_argument("preparation_angle: bit must be 0 or 1");
  }
  constexpr double pi = std::numbers::pi;
  if (basis == Basis::Z) {
    return bit == 0 ? 0.0 : pi / 2.0;
  }
  return bit == 0 ? pi / 4.0 : -pi / 4.0;
}

Eigen::MatrixXd loss_matrix(int cutoff, double xi) {
  if (xi < 0.0 || xi > 1.0) {
    throw std::invalid_argument("loss_matrix: transmittance outside [0, 1]");
  }
  const int n = cutoff + 1;
  // Pascal triangle in doubles; exact up to the photon numbers in play.
  Eigen::MatrixXd choose = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    choose(i, 0) = 1.0;
    for (int j = 1; j <= i; ++j) {
      choose(i, j) = choose(i - 1, j - 1) + (j <= i - 1 ? choose(i - 1, j) : 0.0);
    }
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int row = 0; row < n; ++row) {
    for (int k = 0; k <= row; ++k) {
      L(row, k) = choose(row, k) * std::pow(xi, k) * std::pow(1.0 - xi, row - k);
    }
  }
  return L;
}

PhotonNumberDistribution apply_loss(const PhotonNumberDistribution& dist,
                                    double xi) {
  const Eigen::MatrixXd L = loss_matrix(dist.cutoff(), xi);
  PhotonNumberDistribution out;
  out.probs = L.transpose() * dist.probs;
  return out;
}

namespace {

// Amplitudes over four-mode occupations with fixed total photon number t,
// stored dense over (n1, n2, n3) with n4 = t - n1 - n2 - n3 implied.
struct ModeAmplitudes {
  int side;  // buffer dimension, (k + l + 1)
  std::vector<double> amp;

  explicit ModeAmplitudes(int total_photons)
      : side(total_photons + 1),
        amp(static_cast<size_t>(side) * side * side, 0.0) {}

  double& operator()(int n1, int n2, int n3) {
    return amp[(static_cast<size_t>(n1) * side + n2) * side + n3];
  }
  double operator()(int n1, int n2, int n3) const {
    return amp[(static_cast<size_t>(n1) * side + n2) * side + n3];
  }
};

// Apply one creation operator (a linear combination over the four output
// modes) to a state with total photon number t.
void apply_creation(const ModeAmplitudes& cur, ModeAmplitudes& next, int t,
                    const std::array<double, 4>& coeff) {
  std::fill(next.amp.begin(), next.amp.end(), 0.0);
  for (int n1 = 0; n1 <= t; ++n1) {
    for (int n2 = 0; n1 + n2 <= t; ++n2) {
      for (int n3 = 0; n1 + n2 + n3 <= t; ++n3) {
        const double a = cur(n1, n2, n3);
        if (a == 0.0) continue;
        const int n4 = t - n1 - n2 - n3;
        next(n1 + 1, n2, n3) += coeff[0] * std::sqrt(n1 + 1.0) * a;
        next(n1, n2 + 1, n3) += coeff[1] * std::sqrt(n2 + 1.0) * a;
        next(n1, n2, n3 + 1) += coeff[2] * std::sqrt(n3 + 1.0) * a;
        next(n1, n2, n3) += coeff[3] * std::sqrt(n4 + 1.0) * a;
      }
    }
  }
}

}  // namespace

std::vector<ModeOccupation> beam_splitter_occupations(int k, double pol_a,
                                                      int l, double pol_b) {
  if (k < 0 || l < 0) {
    throw std::invalid_argument("beam_splitter_occupations: negative count");
  }
  const int total = k + l;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  // Output modes ordered (1H, 1V, 2H, 2V). Alice's spatial mode maps to
  // (1 + 2)/sqrt(2), Bob's to (1 - 2)/sqrt(2).
  const std::array<double, 4> alice{std::cos(pol_a) * inv_sqrt2,
                                    std::sin(pol_a) * inv_sqrt2,
                                    std::cos(pol_a) * inv_sqrt2,
                                    std::sin(pol_a) * inv_sqrt2};
  const std::array<double, 4> bob{std::cos(pol_b) * inv_sqrt2,
                                  std::sin(pol_b) * inv_sqrt2,
                                  -std::cos(pol_b) * inv_sqrt2,
                                  -std::sin(pol_b) * inv_sqrt2};

  ModeAmplitudes cur(total), next(total);
  cur(0, 0, 0) = 1.0;
  int t = 0;
  for (int i = 0; i < k; ++i, ++t) {
    apply_creation(cur, next, t, alice);
    std::swap(cur, next);
  }
  for (int i = 0; i < l; ++i, ++t) {
    apply_creation(cur, next, t, bob);
    std::swap(cur, next);
  }

  // Fock-state normalization of the k- and l-photon inputs.
  double log_norm = 0.0;
  for (int i = 2; i <= k; ++i) log_norm += std::log(static_cast<double>(i));
  for (int i = 2; i <= l; ++i) log_norm += std::log(static_cast<double>(i));
  const double norm = std::exp(-0.5 * log_norm);

  std::vector<ModeOccupation> out;
  for (int n1 = 0; n1 <= total; ++n1) {
    for (int n2 = 0; n1 + n2 <= total; ++n2) {
      for (int n3 = 0; n1 + n2 + n3 <= total; ++n3) {
        const double a = cur(n1, n2, n3) * norm;
        if (a == 0.0) continue;
        const int n4 = total - n1 - n2 - n3;
        out.push_back({{n1, n2, n3, n4}, a * a});
      }
    }
  }
  return out;
}

namespace {

// Probability that exactly the detectors {i, j} click given the mode
// occupation; occupied detectors click deterministically, empty ones via
// independent dark counts.
double exact_pair_click(const std::array<int, 4>& occ, int i, int j,
                        double p_d) {
  double p = 1.0;
  for (int d = 0; d < 4; ++d) {
    const bool occupied = occ[d] > 0;
    const bool in_pair = (d == i || d == j);
    if (in_pair) {
      p *= occupied ? 1.0 : p_d;
    } else {
      if (occupied) return 0.0;
      p *= 1.0 - p_d;
    }
  }
  return p;
}

}  // namespace

BsmOutcome bsm_outcome_distribution(int k, double pol_a, int l, double pol_b,
                                    const DetectorParams& det) {
  det.validate();
  // Relative frame rotation theta with sin^2(theta) = e_d, split evenly
  // between the parties so the model stays symmetric under party exchange.
  const double rotation = std::asin(std::sqrt(det.misalignment));
  const auto occs = beam_splitter_occupations(k, pol_a - 0.5 * rotation, l,
                                              pol_b + 0.5 * rotation);
  const double p_d = det.dark_count;
  BsmOutcome out;
  for (const auto& o : occs) {
    // psi_minus: {1H, 2V} or {1V, 2H}; psi_plus: {1H, 1V} or {2H, 2V}.
    out.psi_minus += o.probability * (exact_pair_click(o.photons, 0, 3, p_d) +
                                      exact_pair_click(o.photons, 1, 2, p_d));
    out.psi_plus += o.probability * (exact_pair_click(o.photons, 0, 1, p_d) +
                                     exact_pair_click(o.photons, 2, 3, p_d));
  }
  return out;
}

RelayModel::RelayModel(const DetectorParams& det, int cutoff)
    : det_(det), cutoff_(cutoff) {
  det_.validate();
  if (cutoff < 0) {
    throw std::invalid_argument("RelayModel: negative cutoff");
  }
  const int n = cutoff + 1;
  for (int b = 0; b < 2; ++b) {
    success_[b] = Eigen::MatrixXd::Zero(n, n);
    wrong_[b] = Eigen::MatrixXd::Zero(n, n);
  }
  for (int b = 0; b < 2; ++b) {
    const Basis basis = static_cast<Basis>(b);
    for (int bit_a = 0; bit_a < 2; ++bit_a) {
      for (int bit_b = 0; bit_b < 2; ++bit_b) {
        const double pol_a = preparation_angle(basis, bit_a);
        const double pol_b = preparation_angle(basis, bit_b);
        const bool bits_equal = bit_a == bit_b;
        for (int k = 0; k <= cutoff; ++k) {
          for (int l = 0; l <= cutoff; ++l) {
            const BsmOutcome o =
                bsm_outcome_distribution(k, pol_a, l, pol_b, det_);
            success_[b](k, l) += 0.25 * o.success();
            double err;
            if (basis == Basis::Z) {
              // Both Bell announcements imply anti-correlated Z bits.
              err = bits_equal ? o.success() : 0.0;
            } else {
              // psi_plus expects equal X bits, psi_minus unequal.
              err = bits_equal ? o.psi_minus : o.psi_plus;
            }
            wrong_[b](k, l) += 0.25 * err;
          }
        }
      }
    }
  }
}

YieldTable RelayModel::yields(const ChannelParams& channel) const {
  channel.validate();
  const Eigen::MatrixXd L = loss_matrix(cutoff_, channel.arm_transmittance());
  YieldTable yt;
  yt.loss_db = channel.total_loss_db;
  for (int b = 0; b < 2; ++b) {
    yt.success[b] = L * success_[b] * L.transpose();
    yt.wrong[b] = L * wrong_[b] * L.transpose();
  }
  return yt;
}

std::pair<double, double> yields_for_pair(int n, int m, Basis basis,
                                          const ChannelParams& channel,
                                          const DetectorParams& det) {
  const RelayModel relay(det, std::max(n, m));
  const YieldTable yt = relay.yields(channel);
  return {yt.Y(basis)(n, m), yt.T(basis)(n, m)};
}

Eigen::Matrix3d GainTable::errors(Basis b) const {
  const auto& s = gains(b);
  const auto& t = wrong(b);
  Eigen::Matrix3d e;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      e(i, j) = s(i, j) > 0.0 ? t(i, j) / s(i, j) : 0.0;
    }
  }
  return e;
}

namespace {

Eigen::VectorXd fitted_probs(const PhotonNumberDistribution& d, int length) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(length);
  const int n = std::min<int>(length, static_cast<int>(d.probs.size()));
  v.head(n) = d.probs.head(n);
  return v;
}

PhotonNumberDistribution fitted(const PhotonNumberDistribution& d,
                                int cutoff) {
  PhotonNumberDistribution out;
  out.intensity = d.intensity;
  out.probs = fitted_probs(d, cutoff + 1);
  return out;
}

}  // namespace

std::array<SourceDistributions, 2> build_source_distributions(
    const SourceSet& sources, int cutoff, double tail_epsilon) {
  sources.validate();
  auto make = [&](const BasisIntensities& b) {
    SourceDistributions d;
    d.alice_decoy = fitted(poisson_distribution(b.decoy, tail_epsilon), cutoff);
    d.alice_signal = b.signal
                         ? fitted(poisson_distribution(*b.signal, tail_epsilon),
                                  cutoff)
                         : d.alice_decoy;
    return d;
  };
  std::array<SourceDistributions, 2> out;
  for (int b = 0; b < 2; ++b) {
    const auto& alice = b == 0 ? sources.alice_z : sources.alice_x;
    const auto& bob = b == 0 ? sources.bob_z : sources.bob_x;
    out[b] = make(alice);
    auto bobd = make(bob);
    out[b].bob_decoy = bobd.alice_decoy;
    out[b].bob_signal = bobd.alice_signal;
  }
  return out;
}

GainTable compute_gain_table(const YieldTable& yields,
                             const SourceSet& sources, double tail_epsilon) {
  const int cutoff = yields.cutoff();
  const auto dists = build_source_distributions(sources, cutoff, tail_epsilon);
  const Eigen::VectorXd vac = fitted_probs(vacuum_distribution(), cutoff + 1);

  GainTable gt;
  gt.signal_present = {true, sources.alice_x.signal.has_value() &&
                                 sources.bob_x.signal.has_value()};
  for (int b = 0; b < 2; ++b) {
    const std::array<Eigen::VectorXd, 3> alice{
        vac, dists[b].alice_decoy.probs, dists[b].alice_signal.probs};
    const std::array<Eigen::VectorXd, 3> bob{vac, dists[b].bob_decoy.probs,
                                             dists[b].bob_signal.probs};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        gt.S[b](i, j) = alice[i].dot(yields.success[b] * bob[j]);
        gt.T[b](i, j) = alice[i].dot(yields.wrong[b] * bob[j]);
      }
    }
    if (b == 1 && !gt.signal_present[1]) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      for (int i = 0; i < 3; ++i) {
        gt.S[1](2, i) = gt.S[1](i, 2) = nan;
        gt.T[1](2, i) = gt.T[1](i, 2) = nan;
      }
    }
  }
  return gt;
}

int cutoff_for(double max_intensity, double tail_epsilon) {
  return std::max(2, poisson_distribution(max_intensity, tail_epsilon).cutoff());
}

}  // namespace mdiqkd

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

#include "mdiqkd/source.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace mdiqkd {

PhotonNumberDistribution PhotonNumberDistribution::padded(
    int new_cutoff) const {
  if (new_cutoff < cutoff()) {
    throw std::invalid_argument("padded: new cutoff below current cutoff");
  }
  PhotonNumberDistribution out;
  out.intensity = intensity;
  out.probs = Eigen::VectorXd::Zero(new_cutoff + 1);
  out.probs.head(probs.size()) = probs;
  return out;
}

PhotonNumberDistribution poisson_distribution(double mu, double tail_epsilon) {
  if (mu < 0.0) {
    throw std::invalid_argument("poisson_distribution: negative intensity");
  }
  if (!(tail_epsilon > 0.0) || tail_epsilon >= 1e-6) {
    throw std::invalid_argument(
        "poisson_distribution: tail_epsilon outside (0, 1e-6)");
  }
  std::vector<double> terms;
  double p = std::exp(-mu);
  double cumulative = p;
  terms.push_back(p);
  // smallest cutoff with tail mass below tail_epsilon
  constexpr int kMaxCutoff = 512;
  int k = 0;
  while (1.0 - cumulative >= tail_epsilon && k < kMaxCutoff) {
    ++k;
    p *= mu / k;
    cumulative += p;
    terms.push_back(p);
  }
  PhotonNumberDistribution out;
  out.intensity = mu;
  out.probs = Eigen::Map<Eigen::VectorXd>(terms.data(),
                                          static_cast<long>(terms.size()));
  return out;
}

PhotonNumberDistribution explicit_distribution(Eigen::VectorXd probs) {
  if (probs.size() == 0) {
    throw std::invalid_argument("explicit_distribution: empty vector");
  }
  for (long k = 0; k < probs.size(); ++k) {
    if (probs[k] < 0.0 || probs[k] > 1.0) {
      throw std::invalid_argument(
          "explicit_distribution: entry outside [0, 1]");
    }
  }
  if (probs.sum() > 1.0 + 1e-12) {
    throw std::invalid_argument("explicit_distribution: mass exceeds 1");
  }
  PhotonNumberDistribution out;
  out.probs = std::move(probs);
  return out;
}

PhotonNumberDistribution vacuum_distribution() {
  PhotonNumberDistribution out;
  out.intensity = 0.0;
  out.probs = Eigen::VectorXd::Ones(1);
  return out;
}

DecoyConditionResult check_decoy_condition(
    const PhotonNumberDistribution& decoy,
    const PhotonNumberDistribution& signal) {
  if (decoy.at(1) <= 0.0) {
    throw std::invalid_argument(
        "check_decoy_condition: degenerate decoy source (no single-photon "
        "component)");
  }
  const double inf = std::numeric_limits<double>::infinity();
  auto ratio = [&](int k) {
    double d = decoy.at(k);
    return d > 0.0 ? signal.at(k) / d : inf;
  };
  const double r1 = ratio(1);
  const double r2 = ratio(2);
  const int joint_cutoff = std::max(decoy.cutoff(), signal.cutoff());
  DecoyConditionResult res;
  if (r2 < r1) {
    res.satisfied = false;
    res.first_violating_k = 2;
    return res;
  }
  for (int k = 3; k <= joint_cutoff; ++k) {
    if (ratio(k) < r2) {
      res.satisfied = false;
      res.first_violating_k = k;
      return res;
    }
  }
  return res;
}

SourceSet SourceSet::symmetric(double decoy, double signal) {
  BasisIntensities b{decoy, signal};
  return SourceSet{b, b, b, b};
}

namespace {

void validate_basis(const BasisIntensities& b, const char* where,
                    bool signal_required) {
  if (!(b.decoy > 0.0)) {
    throw std::invalid_argument(std::string("SourceSet: non-positive decoy "
                                            "intensity in ") +
                                where);
  }
  if (signal_required && !b.signal) {
    throw std::invalid_argument(
        std::string("SourceSet: missing signal intensity in ") + where);
  }
  if (b.signal && !(b.decoy < *b.signal)) {
    throw std::invalid_argument(
        std::string("SourceSet: decoy intensity must be below signal in ") +
        where);
  }
}

}  // namespace

void SourceSet::validate() const {
  validate_basis(alice_z, "alice_z", true);
  validate_basis(bob_z, "bob_z", true);
  validate_basis(alice_x, "alice_x", false);
  validate_basis(bob_x, "bob_x", false);
}

double SourceSet::max_intensity() const {
  double m = 0.0;
  for (const BasisIntensities* b : {&alice_z, &bob_z, &alice_x, &bob_x}) {
    m = std::max(m, b->decoy);
    if (b->signal) m = std::max(m, *b->signal);
  }
  return m;
}

}  // namespace mdiqkd

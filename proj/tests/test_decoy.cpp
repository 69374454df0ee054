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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mdiqkd/config.hpp"
#include "mdiqkd/decoy.hpp"

using namespace mdiqkd;

namespace {

const DetectorParams kTableDet{3e-6, 0.015};

struct Fixture {
  SourceSet sources = SourceSet::symmetric(0.1, 0.15);
  RelayModel relay{kTableDet, cutoff_for(0.15)};
  YieldTable yields;
  GainTable gains;
  std::array<SourceDistributions, 2> dists;

  explicit Fixture(double loss_db)
      : yields(relay.yields(ChannelParams{loss_db})),
        gains(compute_gain_table(yields, sources)),
        dists(build_source_distributions(sources, yields.cutoff())) {}
};

SourceDistributions uniform_dists(const PhotonNumberDistribution& d) {
  return {d, d, d, d};
}

}  // namespace

TEST_CASE("tilde quantities telescope to zero for pure-vacuum weights") {
  GainTable gt;
  for (int b = 0; b < 2; ++b) {
    gt.S[b].setConstant(0.3);
    gt.T[b].setConstant(0.1);
  }
  const auto tq =
      tilde_quantities(gt, Basis::Z, uniform_dists(vacuum_distribution()));
  CHECK(tq.S_xx == doctest::Approx(0.0));
  CHECK(tq.S_xy == doctest::Approx(0.0));
  CHECK(tq.S_yx == doctest::Approx(0.0));
  CHECK(tq.S_yy == doctest::Approx(0.0));
  CHECK(tq.T_xx == doctest::Approx(0.0));
}

TEST_CASE("zero vacuum weight keeps the raw gains") {
  GainTable gt;
  for (int b = 0; b < 2; ++b) {
    gt.S[b].setConstant(0.0);
    gt.T[b].setConstant(0.0);
  }
  gt.S[0](kDecoy, kDecoy) = 0.42;
  gt.T[0](kDecoy, kDecoy) = 0.05;
  Eigen::VectorXd p(2);
  p << 0.0, 1.0;  // no zero-photon component
  const auto tq =
      tilde_quantities(gt, Basis::Z, uniform_dists(explicit_distribution(p)));
  CHECK(tq.S_xx == doctest::Approx(0.42));
  CHECK(tq.T_xx == doctest::Approx(0.05));
}

TEST_CASE("tilde quantities match a direct recomputation from the table") {
  const Fixture fx(20.0);
  for (Basis basis : {Basis::Z, Basis::X}) {
    const int b = static_cast<int>(basis);
    const auto& S = fx.gains.gains(basis);
    const auto& d = fx.dists[b];
    const double a0 = d.alice_decoy.at(0);
    const double a0p = d.alice_signal.at(0);
    const double b0 = d.bob_decoy.at(0);
    const double b0p = d.bob_signal.at(0);
    const auto tq = tilde_quantities(fx.gains, basis, d);
    CHECK(tq.S_xx == doctest::Approx(S(1, 1) - a0 * S(0, 1) - b0 * S(1, 0) +
                                     a0 * b0 * S(0, 0))
                         .epsilon(1e-14));
    CHECK(tq.S_xy == doctest::Approx(S(1, 2) - a0 * S(0, 2) - b0p * S(1, 0) +
                                     a0 * b0p * S(0, 0))
                         .epsilon(1e-14));
    CHECK(tq.S_yx == doctest::Approx(S(2, 1) - a0p * S(0, 1) - b0 * S(2, 0) +
                                     a0p * b0 * S(0, 0))
                         .epsilon(1e-14));
    CHECK(tq.S_yy == doctest::Approx(S(2, 2) - a0p * S(0, 2) - b0p * S(2, 0) +
                                     a0p * b0p * S(0, 0))
                         .epsilon(1e-14));
  }
}

TEST_CASE("missing table entry is an incomplete-data error") {
  const Fixture fx(20.0);
  GainTable gt = fx.gains;
  gt.S[0](1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(tilde_quantities(gt, Basis::Z, fx.dists[0]),
                  std::runtime_error);
}

TEST_CASE("zero tilde quantities give a zero bound") {
  const auto dists = build_source_distributions(SourceSet::symmetric(0.1, 0.15),
                                                cutoff_for(0.15));
  const auto bound = s11_lower_bound(TildeQuantities{}, dists[0]);
  CHECK(bound.value == 0.0);
  CHECK(bound.raw == 0.0);
}

TEST_CASE("identical decoy and signal distributions are degenerate") {
  const auto d = poisson_distribution(0.1);
  const SourceDistributions dd{d, d, d, d};
  CHECK_THROWS_AS(s11_lower_bound(TildeQuantities{}, dd),
                  std::invalid_argument);
}

TEST_CASE("mis-ordered intensities violate the decoy condition") {
  const auto lo = poisson_distribution(0.1);
  const auto hi = poisson_distribution(0.15);
  const SourceDistributions swapped{hi, lo, hi, lo};
  CHECK_THROWS_AS(s11_lower_bound(TildeQuantities{}, swapped),
                  std::invalid_argument);
}

TEST_CASE("bound soundness against the simulator truth") {
  for (double loss : {0.0, 10.0, 20.0, 30.0, 40.0}) {
    const Fixture fx(loss);
    const auto bounds = estimate_bounds(fx.gains, fx.dists);
    const double y11_z = fx.yields.Y(Basis::Z)(1, 1);
    const double y11_x = fx.yields.Y(Basis::X)(1, 1);
    CHECK(bounds.s11_lower_z <= y11_z + 1e-12);
    CHECK(bounds.s11_lower_x <= y11_x + 1e-12);
    const double e11_true = fx.yields.T(Basis::X)(1, 1) / y11_x;
    CHECK(bounds.e11_upper_x >= e11_true - 1e-12);
    CHECK(bounds.e11_upper_x_via_z >= e11_true - 1e-12);
    // clamping never activates on clean simulated data
    CHECK(bounds.s11_raw_z >= -1e-12);
    CHECK(bounds.s11_raw_x >= -1e-12);
  }
}

TEST_CASE("Z-basis bound dominates the X-basis one on linear channels") {
  for (double loss : {0.0, 10.0, 20.0, 30.0, 40.0}) {
    const Fixture fx(loss);
    const auto bounds = estimate_bounds(fx.gains, fx.dists);
    CHECK(bounds.s11_lower_z >= bounds.s11_lower_x);
    CHECK(bounds.e11_upper_x_via_z <= bounds.e11_upper_x);
    CHECK(bounds.basis_used == Basis::Z);
  }
}

TEST_CASE("error bound basics") {
  CHECK(e11_upper_bound(0.0, 0.1, 0.1, 0.5) == 0.0);
  CHECK(e11_upper_bound(1.0, 0.5, 0.5, 0.5) == 1.0);  // capped
  CHECK_THROWS_AS(e11_upper_bound(0.1, 0.1, 0.1, 0.0), std::domain_error);
  CHECK_THROWS_AS(e11_upper_bound(0.1, 0.0, 0.1, 0.5), std::invalid_argument);

  // equal anchors give equal bounds
  CHECK(e11_upper_bound(0.2, 0.1, 0.1, 0.3) ==
        e11_upper_bound(0.2, 0.1, 0.1, 0.3));
}

TEST_CASE("a larger yield anchor tightens the error bound") {
  const Fixture fx(20.0);
  const auto bounds = estimate_bounds(fx.gains, fx.dists);
  REQUIRE(bounds.s11_lower_z > bounds.s11_lower_x);
  CHECK(bounds.e11_upper_x_via_z < bounds.e11_upper_x);
}

TEST_CASE("regression: 20 dB bound estimates") {
  const Fixture fx(20.0);
  const auto bounds = estimate_bounds(fx.gains, fx.dists);
  CHECK(bounds.s11_lower_z ==
        doctest::Approx(0.00487639605454).epsilon(1e-11));
  CHECK(bounds.s11_lower_x ==
        doctest::Approx(0.00477151885321).epsilon(1e-11));
  CHECK(bounds.e11_upper_x ==
        doctest::Approx(0.0644531193978).epsilon(1e-11));
  CHECK(bounds.e11_upper_x_via_z ==
        doctest::Approx(0.0630669188711).epsilon(1e-11));
}

TEST_CASE("gain CSV round trip reproduces the bounds") {
  const Fixture fx(20.0);
  std::stringstream csv;
  write_gain_csv(csv, fx.gains);
  const GainTable parsed = read_gain_table_csv(csv);
  CHECK(parsed.signal_present[0]);
  CHECK(parsed.signal_present[1]);
  const auto direct = estimate_bounds(fx.gains, fx.dists);
  const auto via_csv = estimate_bounds(parsed, fx.dists);
  CHECK(via_csv.s11_lower_z ==
        doctest::Approx(direct.s11_lower_z).epsilon(1e-9));
  CHECK(via_csv.e11_upper_x ==
        doctest::Approx(direct.e11_upper_x).epsilon(1e-9));
}

TEST_CASE("gain CSV parsing rejects malformed input") {
  std::stringstream bad1("Z,q,x,0.1,0.01\n");
  CHECK_THROWS_AS(read_gain_table_csv(bad1), std::runtime_error);
  std::stringstream bad2("Z,o\n");
  CHECK_THROWS_AS(read_gain_table_csv(bad2), std::runtime_error);
  std::stringstream bad3("W,o,x,0.1,0.01\n");
  CHECK_THROWS_AS(read_gain_table_csv(bad3), std::runtime_error);
}

TEST_CASE("partially filled CSV flags missing signal data") {
  std::stringstream csv(
      "basis,alpha,beta,S,T\n"
      "Z,o,o,1e-10,5e-11\n"
      "X,x,x,1e-4,2.5e-5\n");
  const GainTable gt = read_gain_table_csv(csv);
  CHECK_FALSE(gt.signal_present[0]);
  CHECK_FALSE(gt.signal_present[1]);
  CHECK(gt.gains(Basis::X)(kDecoy, kDecoy) == doctest::Approx(1e-4));
}

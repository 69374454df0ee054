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

// End-to-end verification suite: one pass/fail line per criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bsm_oracle.hpp"
#include "mdiqkd/config.hpp"

using namespace mdiqkd;

namespace {

const DetectorParams kTableDet{3e-6, 0.015};
const ProtocolParams kTableProtocol{1.16};
const SourceSet kBase = SourceSet::symmetric(0.1, 0.15);
const std::vector<double> kLossGrid{0.0, 10.0, 20.0, 30.0, 40.0};

int failures = 0;

void report(int number, const char* name, bool pass,
            const std::string& detail = "") {
  std::printf("%s: criterion %d (%s)%s\n", pass ? "PASS" : "FAIL", number,
              name, detail.empty() ? "" : ("  [" + detail + "]").c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// 1. Decoy bounds never cross the simulator's true single-photon-pair
//    yield/error, across the loss grid; under 60 s total.
void criterion_bound_soundness() {
  const auto t0 = std::chrono::steady_clock::now();
  const RelayModel relay(kTableDet, cutoff_for(0.15));
  bool pass = true;
  for (double loss : kLossGrid) {
    const YieldTable yt = relay.yields(ChannelParams{loss});
    const auto gains = compute_gain_table(yt, kBase);
    const auto dists = build_source_distributions(kBase, yt.cutoff());
    const auto bounds = estimate_bounds(gains, dists);
    const double e11_true = yt.T(Basis::X)(1, 1) / yt.Y(Basis::X)(1, 1);
    pass = pass && bounds.s11_lower_z <= yt.Y(Basis::Z)(1, 1) + 1e-12 &&
           bounds.s11_lower_x <= yt.Y(Basis::X)(1, 1) + 1e-12 &&
           bounds.e11_upper_x >= e11_true - 1e-12 &&
           bounds.e11_upper_x_via_z >= e11_true - 1e-12;
  }
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 60.0;
  char detail[64];
  std::snprintf(detail, sizeof(detail), "%.2f s", elapsed);
  report(1, "bound soundness", pass, detail);
}

// 2. Single-photon-pair yields agree between bases for every
//    misalignment setting.
void criterion_basis_equality() {
  bool pass = true;
  double worst = 0.0;
  for (double e_d : {0.0, 0.015, 0.05}) {
    const RelayModel relay(DetectorParams{3e-6, e_d}, 2);
    for (double loss : kLossGrid) {
      const YieldTable yt = relay.yields(ChannelParams{loss});
      const double diff =
          std::abs(yt.Y(Basis::Z)(1, 1) - yt.Y(Basis::X)(1, 1));
      worst = std::max(worst, diff);
      pass = pass && diff < 1e-10;
    }
  }
  char detail[64];
  std::snprintf(detail, sizeof(detail), "max |Y11_Z - Y11_X| = %.3g", worst);
  report(2, "basis equality of the (1,1) yield", pass, detail);
}

// 3. The Z-basis bound dominates the X-basis one everywhere on the grid,
//    and the anchored rate follows suit.
void criterion_bound_dominance() {
  const RelayModel relay(kTableDet, cutoff_for(0.15));
  bool pass = true;
  for (double loss : kLossGrid) {
    const YieldTable yt = relay.yields(ChannelParams{loss});
    const auto r = evaluate_point(yt, kBase, kTableProtocol);
    pass = pass && r.bounds.s11_lower_z >= r.bounds.s11_lower_x &&
           r.bounds.e11_upper_x_via_z <= r.bounds.e11_upper_x &&
           r.r_z >= r.r_standard;
    const double privacy = r.r_standard +
                           kTableProtocol.error_correction_inefficiency *
                               r.gain_yy_z * binary_entropy(r.error_yy_z);
    if (privacy > 0.0 && r.bounds.s11_lower_z > r.bounds.s11_lower_x) {
      pass = pass && r.r_z > r.r_standard;
    }
  }
  report(3, "Z-over-X bound dominance", pass);
}

// 4. The infinite-decoy baseline dominates, and relative rates stay in
//    [0, 1] where it is positive.
void criterion_baseline_dominance() {
  const RelayModel relay(kTableDet, cutoff_for(0.15));
  SweepConfig cfg;  // 0..40 dB at 1 dB
  const auto rows = sweep(relay, kBase, kTableProtocol, cfg);
  bool pass = !rows.empty();
  for (const auto& r : rows) {
    pass = pass &&
           r.r_infinite >= std::max({r.r_standard, r.r_z, r.r_x}) - 1e-12;
    if (r.r_infinite > 0.0) {
      for (double raw : {r.r_standard, r.r_z, r.r_x}) {
        const double rel = std::max(0.0, raw) / r.r_infinite;
        pass = pass && rel >= 0.0 && rel <= 1.0;
      }
    }
  }
  report(4, "infinite-decoy baseline dominance", pass);
}

// 5. Production cutoff vs doubled-cutoff gains, and the relay expansion
//    against the independent exhaustive oracle.
void criterion_oracle_equivalence() {
  const int cutoff = cutoff_for(0.15);
  const ChannelParams channel{20.0};
  const auto gt1 = compute_gain_table(
      RelayModel(kTableDet, cutoff).yields(channel), kBase);
  const auto gt2 = compute_gain_table(
      RelayModel(kTableDet, 2 * cutoff).yields(channel), kBase);
  double worst_gain = 0.0;
  for (int b = 0; b < 2; ++b) {
    worst_gain = std::max(worst_gain,
                          (gt1.S[b] - gt2.S[b]).cwiseAbs().maxCoeff());
    worst_gain = std::max(worst_gain,
                          (gt1.T[b] - gt2.T[b]).cwiseAbs().maxCoeff());
  }

  double worst_bsm = 0.0;
  for (int k = 0; k <= 4; ++k) {
    for (int l = 0; k + l <= 4; ++l) {
      for (Basis basis : {Basis::Z, Basis::X}) {
        for (int ba = 0; ba < 2; ++ba) {
          for (int bb = 0; bb < 2; ++bb) {
            const double pa = preparation_angle(basis, ba);
            const double pb = preparation_angle(basis, bb);
            const auto got = bsm_outcome_distribution(k, pa, l, pb, kTableDet);
            const auto want = testing::oracle_bsm(k, pa, l, pb, kTableDet);
            worst_bsm = std::max(
                {worst_bsm, std::abs(got.psi_minus - want.psi_minus),
                 std::abs(got.psi_plus - want.psi_plus)});
          }
        }
      }
    }
  }
  const bool pass = worst_gain < 1e-10 && worst_bsm < 1e-12;
  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "gain drift %.3g, relay-oracle gap %.3g", worst_gain,
                worst_bsm);
  report(5, "oracle equivalence", pass, detail);
}

// 6. Closed-form vacuum spot checks.
void criterion_closed_form() {
  const RelayModel relay(kTableDet, cutoff_for(0.15));
  const YieldTable yt = relay.yields(ChannelParams{20.0});
  const auto gains = compute_gain_table(yt, kBase);
  const double pd = kTableDet.dark_count;
  const double expected = 4.0 * pd * pd * (1.0 - pd) * (1.0 - pd);
  bool pass = true;
  for (Basis basis : {Basis::Z, Basis::X}) {
    const double y00 = yt.Y(basis)(0, 0);
    pass = pass && std::abs(y00 - expected) <= 1e-15 * expected;
    pass = pass && gains.gains(basis)(kVacuum, kVacuum) == y00;
  }
  report(6, "closed-form vacuum yield", pass);
}

// 7. Optimizer vs an exhaustive 1e-3 fine grid, and optimization never
//    losing to the fixed configuration; full optimized sweep under 5 min.
void criterion_optimizer() {
  const auto t0 = std::chrono::steady_clock::now();
  const RelayModel relay(kTableDet, cutoff_for(1.5));
  const SweepConfig cfg;
  const std::vector<Protocol> protocols{Protocol::Standard,
                                        Protocol::ZAnchored,
                                        Protocol::XAnchored,
                                        Protocol::Infinite};
  bool pass = true;

  for (double loss : {10.0, 20.0, 30.0}) {
    const YieldTable yt = relay.yields(ChannelParams{loss});
    for (Protocol p : protocols) {
      double best_mu = 0.0;
      double best_rate = -1e300;
      for (double mu = cfg.search_lo; mu <= cfg.search_hi + 1e-12;
           mu += 1e-3) {
        if (mu <= kBase.alice_z.decoy * (1.0 + 1e-6)) continue;
        SourceSet s = SourceSet::symmetric(kBase.alice_z.decoy, mu);
        if (p == Protocol::XAnchored) {
          s.alice_x = kBase.alice_x;
          s.bob_x = kBase.bob_x;
        }
        const double r =
            protocol_rate(evaluate_point(yt, s, kTableProtocol), p);
        if (r > best_rate) {
          best_rate = r;
          best_mu = mu;
        }
      }
      const auto opt =
          optimize_point(relay, kBase, kTableProtocol, loss, p, cfg);
      if (best_rate > 0.0) {
        const double gap = std::abs(opt.signal_intensity - best_mu);
        pass = pass && gap <= 1e-3 * best_mu + 1e-3;
        // rate agreement follows from the intensity match; the grid itself
        // is quantized, so only a loose relative check is meaningful
        pass = pass && opt.rate >= best_rate * (1.0 - 1e-6);
      }
    }
  }

  const auto fixed_rows = sweep(relay, kBase, kTableProtocol, cfg);
  for (Protocol p : protocols) {
    const auto opt_rows =
        optimize_sweep(relay, kBase, kTableProtocol, cfg, {p});
    for (size_t i = 0; i < fixed_rows.size(); ++i) {
      const double fixed = std::max(0.0, protocol_rate(fixed_rows[i], p));
      pass = pass && opt_rows[i].rate >= fixed - 1e-12;
    }
  }

  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 300.0;
  char detail[64];
  std::snprintf(detail, sizeof(detail), "%.2f s", elapsed);
  report(7, "optimizer correctness", pass, detail);
}

// 8. Byte-identical sweep CSV across repeated runs of the CLI.
void criterion_determinism() {
  const std::string cli = MDIQKD_CLI_PATH;
  const std::string f1 = "acceptance_sweep_1.csv";
  const std::string f2 = "acceptance_sweep_2.csv";
  bool pass = true;
  for (const std::string& f : {f1, f2}) {
    const std::string cmd = cli + " sweep --out " + f;
    pass = pass && std::system(cmd.c_str()) == 0;
  }
  std::string c1, c2;
  for (auto [path, dest] : {std::pair{&f1, &c1}, std::pair{&f2, &c2}}) {
    std::ifstream in(*path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    *dest = ss.str();
  }
  pass = pass && !c1.empty() && c1 == c2;
  std::remove(f1.c_str());
  std::remove(f2.c_str());
  report(8, "sweep determinism", pass);
}

}  // namespace

int main() {
  criterion_bound_soundness();
  criterion_basis_equality();
  criterion_bound_dominance();
  criterion_baseline_dominance();
  criterion_oracle_equivalence();
  criterion_closed_form();
  criterion_optimizer();
  criterion_determinism();
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}

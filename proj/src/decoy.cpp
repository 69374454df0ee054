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

#include "mdiqkd/decoy.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mdiqkd {

namespace {

double checked(const Eigen::Matrix3d& m, int i, int j, const char* what) {
  const double v = m(i, j);
  if (std::isnan(v)) {
    throw std::runtime_error(std::string("tilde_quantities: missing ") + what +
                             " table entry");
  }
  return v;
}

}  // namespace

TildeQuantities tilde_quantities(const GainTable& gains, Basis basis,
                                 const SourceDistributions& dists) {
  const auto& S = gains.gains(basis);
  const auto& T = gains.wrong(basis);
  const double a0 = dists.alice_decoy.at(0);
  const double a0p = dists.alice_signal.at(0);
  const double b0 = dists.bob_decoy.at(0);
  const double b0p = dists.bob_signal.at(0);

  auto s = [&](int i, int j) { return checked(S, i, j, "gain"); };
  auto t = [&](int i, int j) { return checked(T, i, j, "wrong-bit"); };

  TildeQuantities tq;
  const double s00 = s(0, 0);
  tq.S_xx = s(1, 1) - a0 * s(0, 1) - b0 * s(1, 0) + a0 * b0 * s00;
  tq.S_xy = s(1, 2) - a0 * s(0, 2) - b0p * s(1, 0) + a0 * b0p * s00;
  tq.S_yx = s(2, 1) - a0p * s(0, 1) - b0 * s(2, 0) + a0p * b0 * s00;
  tq.S_yy = s(2, 2) - a0p * s(0, 2) - b0p * s(2, 0) + a0p * b0p * s00;
  tq.T_xx = t(1, 1) - a0 * t(0, 1) - b0 * t(1, 0) + a0 * b0 * t(0, 0);
  return tq;
}

S11Bound s11_lower_bound(const TildeQuantities& tq,
                         const SourceDistributions& dists) {
  const auto alice_check =
      check_decoy_condition(dists.alice_decoy, dists.alice_signal);
  const auto bob_check =
      check_decoy_condition(dists.bob_decoy, dists.bob_signal);
  if (!alice_check.satisfied || !bob_check.satisfied) {
    throw std::invalid_argument(
        "s11_lower_bound: decoy condition violated (source photon-number "
        "ratios are not ordered)");
  }
  const double a1 = dists.alice_decoy.at(1);
  const double a2 = dists.alice_decoy.at(2);
  const double a1p = dists.alice_signal.at(1);
  const double a2p = dists.alice_signal.at(2);
  const double b1 = dists.bob_decoy.at(1);
  const double b2 = dists.bob_decoy.at(2);
  const double b1p = dists.bob_signal.at(1);
  const double b2p = dists.bob_signal.at(2);

  const double da = a1 * a2p - a1p * a2;
  const double db = b1 * b2p - b1p * b2;
  const double denom = a1 * b1 * da * db;
  if (!(denom > 0.0)) {
    throw std::invalid_argument(
        "s11_lower_bound: degenerate decoy set (zero or negative "
        "denominator)");
  }
  const double numer = (a1 * a2p * b1 * b2p - a1p * a2 * b1p * b2) * tq.S_xx -
                       b1 * b2 * da * tq.S_xy - a1 * a2 * db * tq.S_yx;
  S11Bound out;
  out.raw = numer / denom;
  out.value = std::max(0.0, out.raw);
  return out;
}

double e11_upper_bound(double t_tilde_xx, double a1, double b1,
                       double s11_lower) {
  if (!(a1 > 0.0) || !(b1 > 0.0)) {
    throw std::invalid_argument(
        "e11_upper_bound: non-positive single-photon coefficient");
  }
  if (!(s11_lower > 0.0)) {
    throw std::domain_error(
        "e11_upper_bound: undefined bound (zero yield lower bound)");
  }
  return std::min(1.0, t_tilde_xx / (a1 * b1 * s11_lower));
}

BoundEstimates estimate_bounds(
    const GainTable& gains, const std::array<SourceDistributions, 2>& dists) {
  BoundEstimates be;
  const auto tq_z = tilde_quantities(gains, Basis::Z, dists[0]);
  const auto s11_z = s11_lower_bound(tq_z, dists[0]);
  be.s11_lower_z = s11_z.value;
  be.s11_raw_z = s11_z.raw;

  TildeQuantities tq_x;
  if (gains.signal_present[1]) {
    tq_x = tilde_quantities(gains, Basis::X, dists[1]);
    const auto s11_x = s11_lower_bound(tq_x, dists[1]);
    be.s11_lower_x = s11_x.value;
    be.s11_raw_x = s11_x.raw;
  } else {
    // Only T~_xx^X is available without an X-basis signal source.
    const auto& T = gains.wrong(Basis::X);
    const double a0 = dists[1].alice_decoy.at(0);
    const double b0 = dists[1].bob_decoy.at(0);
    tq_x.T_xx = T(1, 1) - a0 * T(0, 1) - b0 * T(1, 0) + a0 * b0 * T(0, 0);
  }

  const double a1x = dists[1].alice_decoy.at(1);
  const double b1x = dists[1].bob_decoy.at(1);
  be.e11_upper_x = be.s11_lower_x > 0.0
                       ? e11_upper_bound(tq_x.T_xx, a1x, b1x, be.s11_lower_x)
                       : 1.0;
  be.e11_upper_x_via_z =
      be.s11_lower_z > 0.0
          ? e11_upper_bound(tq_x.T_xx, a1x, b1x, be.s11_lower_z)
          : 1.0;
  be.basis_used = be.s11_lower_z >= be.s11_lower_x ? Basis::Z : Basis::X;
  return be;
}

GainTable read_gain_table_csv(std::istream& in) {
  GainTable gt;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int b = 0; b < 2; ++b) {
    gt.S[b].setConstant(nan);
    gt.T[b].setConstant(nan);
  }
  auto source_index = [](const std::string& s) {
    if (s == "o") return 0;
    if (s == "x") return 1;
    if (s == "y") return 2;
    throw std::runtime_error("gain CSV: unknown source label '" + s + "'");
  };
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream row(line);
    std::string basis, alpha, beta, s_str, t_str;
    if (!std::getline(row, basis, ',') || !std::getline(row, alpha, ',') ||
        !std::getline(row, beta, ',') || !std::getline(row, s_str, ',') ||
        !std::getline(row, t_str, ',')) {
      throw std::runtime_error("gain CSV: malformed row '" + line + "'");
    }
    if (basis == "basis") continue;  // header
    int b;
    if (basis == "Z") {
      b = 0;
    } else if (basis == "X") {
      b = 1;
    } else {
      throw std::runtime_error("gain CSV: unknown basis '" + basis + "'");
    }
    const int i = source_index(alpha);
    const int j = source_index(beta);
    gt.S[b](i, j) = std::stod(s_str);
    gt.T[b](i, j) = std::stod(t_str);
  }
  for (int b = 0; b < 2; ++b) {
    bool full = true;
    for (int i = 0; i < 3 && full; ++i) {
      if (std::isnan(gt.S[b](2, i)) || std::isnan(gt.S[b](i, 2))) full = false;
    }
    gt.signal_present[b] = full;
  }
  return gt;
}

GainTable read_gain_table_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open gain CSV file: " + path);
  }
  return read_gain_table_csv(in);
}

}  // namespace mdiqkd

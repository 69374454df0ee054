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

#include "mdiqkd/keyrate.hpp"

#include <cmath>

namespace mdiqkd {

double binary_entropy(double e) {
  if (e < 0.0 || e > 1.0) {
    throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
  }
  if (e == 0.0 || e == 1.0) return 0.0;
  return -e * std::log2(e) - (1.0 - e) * std::log2(1.0 - e);
}

namespace {

double correction_term(const RateTerms& t) {
  return t.f * t.gain_yy_z * binary_entropy(t.error_yy_z);
}

double rate(double s11_lower, double e11_upper, const RateTerms& t) {
  const double privacy =
      s11_lower > 0.0
          ? t.a1_signal * t.b1_signal * s11_lower *
                (1.0 - binary_entropy(std::min(e11_upper, 1.0)))
          : 0.0;
  return privacy - correction_term(t);
}

}  // namespace

double key_rate_standard(const BoundEstimates& bounds, const RateTerms& terms) {
  return rate(bounds.s11_lower_z, bounds.e11_upper_x, terms);
}

double key_rate_z_anchored(const BoundEstimates& bounds,
                           const RateTerms& terms) {
  return rate(bounds.s11_lower_z, bounds.e11_upper_x_via_z, terms);
}

double key_rate_x_anchored(const BoundEstimates& bounds,
                           const RateTerms& terms) {
  return rate(bounds.s11_lower_x, bounds.e11_upper_x, terms);
}

double key_rate_infinite(const YieldTable& yields, const RateTerms& terms) {
  const double y11_z = yields.Y(Basis::Z)(1, 1);
  const double y11_x = yields.Y(Basis::X)(1, 1);
  if (!(y11_x > 0.0)) return 0.0;
  const double e11_true = yields.T(Basis::X)(1, 1) / y11_x;
  return rate(y11_z, e11_true, terms);
}

RateReport evaluate_point(const YieldTable& yields, const SourceSet& sources,
                          const ProtocolParams& protocol,
                          double tail_epsilon) {
  protocol.validate();
  const GainTable gains = compute_gain_table(yields, sources, tail_epsilon);
  const auto dists =
      build_source_distributions(sources, yields.cutoff(), tail_epsilon);
  const BoundEstimates bounds = estimate_bounds(gains, dists);

  RateTerms terms;
  terms.a1_signal = dists[0].alice_signal.at(1);
  terms.b1_signal = dists[0].bob_signal.at(1);
  terms.gain_yy_z = gains.gains(Basis::Z)(kSignal, kSignal);
  terms.error_yy_z = gains.errors(Basis::Z)(kSignal, kSignal);
  terms.f = protocol.error_correction_inefficiency;

  RateReport report;
  report.loss_db = yields.loss_db;
  report.bounds = bounds;
  report.y11_z = yields.Y(Basis::Z)(1, 1);
  report.y11_x = yields.Y(Basis::X)(1, 1);
  report.e11_true_x =
      report.y11_x > 0.0 ? yields.T(Basis::X)(1, 1) / report.y11_x : 0.0;
  report.gain_yy_z = terms.gain_yy_z;
  report.error_yy_z = terms.error_yy_z;
  report.r_standard = key_rate_standard(bounds, terms);
  report.r_z = key_rate_z_anchored(bounds, terms);
  report.r_x = gains.signal_present[1] ? key_rate_x_anchored(bounds, terms)
                                       : -correction_term(terms);
  report.r_infinite = key_rate_infinite(yields, terms);
  return report;
}

}  // namespace mdiqkd

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

#include "mdiqkd/optimize.hpp"

#include <cmath>
#include <functional>
#include <future>

namespace mdiqkd {

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Standard:
      return "standard";
    case Protocol::ZAnchored:
      return "z_anchored";
    case Protocol::XAnchored:
      return "x_anchored";
    case Protocol::Infinite:
      return "infinite";
  }
  throw std::logic_error("to_string: bad protocol");
}

Protocol protocol_from_string(const std::string& s) {
  if (s == "standard") return Protocol::Standard;
  if (s == "z_anchored") return Protocol::ZAnchored;
  if (s == "x_anchored") return Protocol::XAnchored;
  if (s == "infinite") return Protocol::Infinite;
  throw std::invalid_argument("unknown protocol '" + s + "'");
}

double protocol_rate(const RateReport& report, Protocol p) {
  switch (p) {
    case Protocol::Standard:
      return report.r_standard;
    case Protocol::ZAnchored:
      return report.r_z;
    case Protocol::XAnchored:
      return report.r_x;
    case Protocol::Infinite:
      return report.r_infinite;
  }
  throw std::logic_error("protocol_rate: bad protocol");
}

void SweepConfig::validate() const {
  if (!(loss_step > 0.0)) {
    throw std::invalid_argument("SweepConfig: loss_step must be positive");
  }
  if (!(search_lo > 0.0) || search_hi > 1.5 || !(search_lo < search_hi)) {
    throw std::invalid_argument(
        "SweepConfig: search bounds must satisfy 0 < lo < hi <= 1.5");
  }
}

std::vector<double> SweepConfig::loss_points() const {
  validate();
  std::vector<double> pts;
  if (loss_stop < loss_start) return pts;
  const int n = static_cast<int>(
      std::floor((loss_stop - loss_start) / loss_step + 1e-9));
  pts.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    pts.push_back(loss_start + i * loss_step);
  }
  return pts;
}

namespace {

// Candidate SourceSet for one (decoy, signal) pair under a protocol,
// symmetric parties. The X-anchored protocol keeps its X-basis
// intensities pinned at the base configuration.
SourceSet candidate_sources(const SourceSet& base, Protocol protocol,
                            double decoy, double signal) {
  SourceSet s = SourceSet::symmetric(decoy, signal);
  if (protocol == Protocol::XAnchored) {
    s.alice_x = base.alice_x;
    s.bob_x = base.bob_x;
  }
  return s;
}

struct Objective {
  const YieldTable& yields;
  const SourceSet& base;
  const ProtocolParams& protocol_params;
  Protocol protocol;
  double tail_epsilon;

  double operator()(double decoy, double signal) const {
    const SourceSet s = candidate_sources(base, protocol, decoy, signal);
    const RateReport r = evaluate_point(yields, s, protocol_params,
                                        tail_epsilon);
    return protocol_rate(r, protocol);
  }
};

constexpr int kGridPoints = 48;

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> pts(n);
  const double la = std::log(lo);
  const double lb = std::log(hi);
  for (int i = 0; i < n; ++i) {
    pts[i] = std::exp(la + (lb - la) * i / (n - 1));
  }
  return pts;
}

// Maximize g on [lo, hi]: coarse log grid, then golden-section refinement
// around the best grid point. Ties resolve to the smaller abscissa.
std::pair<double, double> maximize_1d(const std::function<double(double)>& g,
                                      double lo, double hi) {
  const auto grid = log_grid(lo, hi, kGridPoints);
  int best = 0;
  double best_val = g(grid[0]);
  for (int i = 1; i < kGridPoints; ++i) {
    const double v = g(grid[i]);
    if (v > best_val) {
      best = i;
      best_val = v;
    }
  }
  double a = grid[std::max(0, best - 1)];
  double b = grid[std::min(kGridPoints - 1, best + 1)];
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  while (b - a > 1e-3 * a) {
    if (f1 >= f2) {  // >= keeps the smaller abscissa on ties
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = g(x2);
    }
  }
  const double x = 0.5 * (a + b);
  const double fx = g(x);
  if (fx >= best_val) return {x, fx};
  return {grid[best], best_val};
}

}  // namespace

OptimumPoint optimize_point(const RelayModel& relay, const SourceSet& base,
                            const ProtocolParams& protocol_params,
                            double loss_db, Protocol protocol,
                            const SweepConfig& config, double tail_epsilon) {
  config.validate();
  const YieldTable yields = relay.yields(ChannelParams{loss_db});
  const Objective objective{yields, base, protocol_params, protocol,
                            tail_epsilon};

  double decoy = base.alice_z.decoy;
  double signal = base.alice_z.signal.value_or(config.search_hi);

  const auto signal_interval = [&](double d) {
    return std::pair<double, double>{
        std::max(config.search_lo, d * (1.0 + 1e-6)), config.search_hi};
  };

  const int rounds = config.free_decoy ? 2 : 1;
  double best_rate = 0.0;
  for (int round = 0; round < rounds; ++round) {
    {
      const auto [lo, hi] = signal_interval(decoy);
      auto [x, fx] = maximize_1d(
          [&](double s) { return objective(decoy, s); }, lo, hi);
      signal = x;
      best_rate = fx;
    }
    if (config.free_decoy) {
      const double hi = std::min(config.search_hi, signal * (1.0 - 1e-6));
      auto [x, fx] = maximize_1d(
          [&](double d) { return objective(d, signal); }, config.search_lo,
          hi);
      decoy = x;
      best_rate = fx;
    }
  }

  OptimumPoint out;
  out.loss_db = loss_db;
  out.protocol = protocol;
  if (best_rate > 0.0) {
    out.decoy_intensity = decoy;
    out.signal_intensity = signal;
    out.rate = best_rate;
  }
  return out;
}

std::vector<RateReport> sweep(const RelayModel& relay, const SourceSet& sources,
                              const ProtocolParams& protocol_params,
                              const SweepConfig& config, int parallel,
                              double tail_epsilon) {
  const auto points = config.loss_points();
  std::vector<RateReport> out(points.size());
  auto eval = [&](size_t i) {
    const YieldTable yields = relay.yields(ChannelParams{points[i]});
    out[i] = evaluate_point(yields, sources, protocol_params, tail_epsilon);
  };
  if (parallel <= 1) {
    for (size_t i = 0; i < points.size(); ++i) eval(i);
  } else {
    std::vector<std::future<void>> tasks;
    for (int t = 0; t < parallel; ++t) {
      tasks.push_back(std::async(std::launch::async, [&, t] {
        for (size_t i = t; i < points.size(); i += parallel) eval(i);
      }));
    }
    for (auto& f : tasks) f.get();
  }
  return out;
}

std::vector<OptimumPoint> optimize_sweep(
    const RelayModel& relay, const SourceSet& base,
    const ProtocolParams& protocol_params, const SweepConfig& config,
    const std::vector<Protocol>& protocols, int parallel,
    double tail_epsilon) {
  const auto points = config.loss_points();
  std::vector<OptimumPoint> out(points.size() * protocols.size());
  auto eval = [&](size_t i) {
    const size_t pt = i / protocols.size();
    const size_t pr = i % protocols.size();
    out[i] = optimize_point(relay, base, protocol_params, points[pt],
                            protocols[pr], config, tail_epsilon);
  };
  if (parallel <= 1) {
    for (size_t i = 0; i < out.size(); ++i) eval(i);
  } else {
    std::vector<std::future<void>> tasks;
    for (int t = 0; t < parallel; ++t) {
      tasks.push_back(std::async(std::launch::async, [&, t] {
        for (size_t i = t; i < out.size(); i += parallel) eval(i);
      }));
    }
    for (auto& f : tasks) f.get();
  }
  return out;
}

}  // namespace mdiqkd

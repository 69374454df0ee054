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

#include "mdiqkd/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mdiqkd {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid numeric value '" + value +
                                "' for config key '" + key + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("invalid boolean value '" + value +
                              "' for config key '" + key + "'");
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "e_0") {
    e_0 = parse_double(key, value);
  } else if (key == "e_d") {
    e_d = parse_double(key, value);
  } else if (key == "p_d") {
    p_d = parse_double(key, value);
  } else if (key == "f") {
    f = parse_double(key, value);
  } else if (key == "mu1") {
    mu1 = parse_double(key, value);
  } else if (key == "mu2") {
    mu2 = parse_double(key, value);
  } else if (key == "nu1") {
    nu1 = parse_double(key, value);
  } else if (key == "nu2") {
    nu2 = parse_double(key, value);
  } else if (key == "x_mu1") {
    x_mu1 = parse_double(key, value);
  } else if (key == "x_mu2") {
    x_mu2 = parse_double(key, value);
  } else if (key == "x_nu1") {
    x_nu1 = parse_double(key, value);
  } else if (key == "x_nu2") {
    x_nu2 = parse_double(key, value);
  } else if (key == "loss_db") {
    loss_db = parse_double(key, value);
  } else if (key == "loss_start") {
    loss_start = parse_double(key, value);
  } else if (key == "loss_stop") {
    loss_stop = parse_double(key, value);
  } else if (key == "loss_step") {
    loss_step = parse_double(key, value);
  } else if (key == "protocol") {
    if (value != "all") protocol_from_string(value);  // validate eagerly
    protocol = value;
  } else if (key == "free_decoy") {
    free_decoy = parse_bool(key, value);
  } else if (key == "search_lo") {
    search_lo = parse_double(key, value);
  } else if (key == "search_hi") {
    search_hi = parse_double(key, value);
  } else if (key == "cutoff") {
    cutoff = static_cast<int>(parse_double(key, value));
  } else if (key == "tail_epsilon") {
    tail_epsilon = parse_double(key, value);
  } else if (key == "out") {
    out = value;
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    }
    set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

void RunConfig::validate() const {
  if (e_0 != 0.5) {
    throw std::invalid_argument(
        "config key 'e_0' must be 0.5 (background clicks are unbiased in "
        "this model)");
  }
  detector_params().validate();
  protocol_params().validate();
  source_set().validate();
  if (!(tail_epsilon > 0.0) || tail_epsilon >= 1e-6) {
    throw std::invalid_argument(
        "config key 'tail_epsilon' must lie in (0, 1e-6)");
  }
  if (cutoff < 0) {
    throw std::invalid_argument("config key 'cutoff' must be non-negative");
  }
}

SourceSet RunConfig::source_set() const {
  SourceSet s;
  s.alice_z = {mu1, mu2};
  s.bob_z = {nu1.value_or(mu1), nu2.value_or(mu2)};
  s.alice_x = {x_mu1.value_or(mu1), x_mu2.value_or(mu2)};
  s.bob_x = {x_nu1.value_or(s.bob_z.decoy), x_nu2.value_or(s.bob_z.signal.value())};
  return s;
}

DetectorParams RunConfig::detector_params() const { return {p_d, e_d}; }

ProtocolParams RunConfig::protocol_params() const { return {f}; }

SweepConfig RunConfig::sweep_config() const {
  SweepConfig c;
  c.loss_start = loss_start;
  c.loss_stop = loss_stop;
  c.loss_step = loss_step;
  c.free_decoy = free_decoy;
  c.search_lo = search_lo;
  c.search_hi = search_hi;
  return c;
}

std::vector<Protocol> RunConfig::protocols() const {
  if (protocol == "all") {
    return {Protocol::Standard, Protocol::ZAnchored, Protocol::XAnchored,
            Protocol::Infinite};
  }
  return {protocol_from_string(protocol)};
}

int RunConfig::resolve_cutoff(double max_intensity) const {
  return cutoff > 0 ? cutoff : cutoff_for(max_intensity, tail_epsilon);
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_gain_csv(std::ostream& os, const GainTable& gains) {
  os << "basis,alpha,beta,S,T,E\n";
  const char* labels = "oxy";
  for (int b = 0; b < 2; ++b) {
    const Basis basis = static_cast<Basis>(b);
    const auto& S = gains.gains(basis);
    const auto& T = gains.wrong(basis);
    const auto E = gains.errors(basis);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        os << (b == 0 ? 'Z' : 'X') << ',' << labels[i] << ',' << labels[j]
           << ',' << csv_number(S(i, j)) << ',' << csv_number(T(i, j)) << ','
           << csv_number(E(i, j)) << '\n';
      }
    }
  }
}

void write_bounds_csv(std::ostream& os, const BoundEstimates& bounds) {
  os << "s11_lower_Z,s11_lower_X,e11_upper_X,e11_upper_X_via_Z,basis_used\n";
  os << csv_number(bounds.s11_lower_z) << ',' << csv_number(bounds.s11_lower_x)
     << ',' << csv_number(bounds.e11_upper_x) << ','
     << csv_number(bounds.e11_upper_x_via_z) << ','
     << (bounds.basis_used == Basis::Z ? 'Z' : 'X') << '\n';
}

namespace {

double clamp0(double v) { return std::max(0.0, v); }

void write_rate_row(std::ostream& os, const RateReport& r, bool diagnostics) {
  const double inf = clamp0(r.r_infinite);
  auto rel = [&](double raw) { return inf > 0.0 ? clamp0(raw) / inf : 0.0; };
  os << csv_number(r.loss_db) << ',' << csv_number(clamp0(r.r_standard)) << ','
     << csv_number(clamp0(r.r_z)) << ',' << csv_number(clamp0(r.r_x)) << ','
     << csv_number(inf) << ',' << csv_number(r.r_standard) << ','
     << csv_number(r.r_z) << ',' << csv_number(r.r_x) << ','
     << csv_number(r.r_infinite) << ',' << csv_number(rel(r.r_standard)) << ','
     << csv_number(rel(r.r_z)) << ',' << csv_number(rel(r.r_x));
  if (diagnostics) {
    os << ',' << csv_number(r.bounds.s11_lower_z) << ','
       << csv_number(r.bounds.s11_lower_x) << ','
       << csv_number(r.bounds.e11_upper_x) << ','
       << csv_number(r.bounds.e11_upper_x_via_z) << ','
       << csv_number(r.gain_yy_z) << ',' << csv_number(r.error_yy_z);
  }
  os << '\n';
}

const char* kRateHeader =
    "loss_db,R_standard,R_Z,R_X,R_infinite,"
    "R_standard_raw,R_Z_raw,R_X_raw,R_infinite_raw,"
    "rel_standard,rel_Z,rel_X";

}  // namespace

void write_rate_csv(std::ostream& os, const std::vector<RateReport>& rows) {
  os << kRateHeader
     << ",s11_lower_Z,s11_lower_X,e11_upper_X,e11_upper_X_via_Z,S_yy_Z,E_yy_Z"
     << '\n';
  for (const auto& r : rows) write_rate_row(os, r, true);
}

void write_sweep_csv(std::ostream& os, const std::vector<RateReport>& rows) {
  os << kRateHeader << '\n';
  for (const auto& r : rows) write_rate_row(os, r, false);
}

void write_optimize_csv(std::ostream& os,
                        const std::vector<OptimumPoint>& rows) {
  os << "loss_db,protocol,decoy_intensity,signal_intensity,rate\n";
  for (const auto& r : rows) {
    os << csv_number(r.loss_db) << ',' << to_string(r.protocol) << ','
       << csv_number(r.decoy_intensity) << ','
       << csv_number(r.signal_intensity) << ',' << csv_number(r.rate) << '\n';
  }
}

}  // namespace mdiqkd

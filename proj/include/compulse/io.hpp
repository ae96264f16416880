// Copyright 2026 The Compulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Angle parsing and the sequence record JSON schema:
//   {n, L, theta0, gamma, symmetry, phases[], kappa, residual_norm, provenance}

#include <cmath>
#include <cstdio>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "compulse/common.hpp"
#include "compulse/phase_algebra.hpp"
#include "compulse/root_search.hpp"
#include "compulse/su2.hpp"
#include "json.hpp"

namespace compulse {

/// Decimal radians or a multiple of pi: "2pi", "-pi/2", "3pi/4", "0.5*pi".
inline double parse_angle(const std::string& text) {
  static const std::regex symbolic(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, symbolic)) {
    const std::string coef = m[1].str();
    double c = 1.0;
    if (coef == "-") c = -1.0;
    else if (!coef.empty() && coef != "+") c = std::stod(coef);
    double den = m[2].matched ? std::stod(m[2].str()) : 1.0;
    require(den != 0.0, "angle '" + text + "' divides by zero");
    return c * pi / den;
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw contract_error("cannot parse angle '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  require(used == text.size() && std::isfinite(v), "cannot parse angle '" + text + "'");
  return v;
}

/// Decimal or a fraction "a/b".
inline double parse_real(const std::string& text) {
  const auto slash = text.find('/');
  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw contract_error("cannot parse number '" + text + "'");
    }
    require(used == t.size() && std::isfinite(v), "cannot parse number '" + text + "'");
    return v;
  };
  if (slash == std::string::npos) return number(text);
  const double den = number(text.substr(slash + 1));
  require(den != 0.0, "number '" + text + "' divides by zero");
  return number(text.substr(0, slash)) / den;
}

/// Comma-separated angles.
inline std::vector<double> parse_angle_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_angle(item));
  require(!out.empty(), "empty angle list");
  return out;
}

/// Nearest double with 12 significant digits.
inline double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::stod(buf);
}

struct SequenceRecord {
  int n = 0;
  double theta0 = two_pi;
  std::optional<double> gamma;
  Symmetry symmetry = Symmetry::none;
  std::vector<double> phases;
  std::optional<double> kappa;
  double residual_norm = 0;
  std::string provenance;

  int length() const { return static_cast<int>(phases.size()); }

  PulseSequence sequence() const {
    PulseSequence s;
    s.theta0 = theta0;
    s.phases = phases;
    s.symmetry = symmetry;
    s.gamma = gamma;
    s.label = provenance;
    return s;
  }
};

inline PulseFamily family_of(double theta0) {
  if (std::abs(theta0 - two_pi) < 1e-9) return PulseFamily::two_pi;
  if (std::abs(theta0 - pi) < 1e-9) return PulseFamily::pi;
  throw contract_error("theta0 must be 2pi or pi");
}

/// Order-n residual of the sequence's own family; kappa for 2pi pulses with L = 2n.
inline SequenceRecord make_record(int n, const PulseSequence& seq, std::string provenance) {
  SequenceRecord r;
  r.n = n;
  r.theta0 = seq.theta0;
  r.gamma = seq.gamma;
  r.symmetry = seq.symmetry;
  r.phases = seq.phases;
  r.provenance = std::move(provenance);
  if (seq.gamma) {
    const PulseFamily family = family_of(seq.theta0);
    ConstraintSpec spec{n, static_cast<int>(seq.length()), *seq.gamma, family, Symmetry::none};
    spec.require_feasible();
    r.residual_norm = norm2(constraint_residual(spec, seq.phases));
    if (family == PulseFamily::two_pi && static_cast<int>(seq.length()) == 2 * n && r.residual_norm < 1e-8)
      r.kappa = kappa(n, *seq.gamma, seq.phases);
  }
  return r;
}

inline nlohmann::json to_json(const SequenceRecord& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["L"] = r.length();
  j["theta0"] = round12(r.theta0);
  j["gamma"] = r.gamma ? nlohmann::json(round12(*r.gamma)) : nlohmann::json(nullptr);
  j["symmetry"] = to_string(r.symmetry);
  auto phases = nlohmann::json::array();
  for (double p : r.phases) phases.push_back(round12(p));
  j["phases"] = phases;
  j["kappa"] = r.kappa ? nlohmann::json(round12(*r.kappa)) : nlohmann::json(nullptr);
  j["residual_norm"] = r.residual_norm;
  j["provenance"] = r.provenance;
  return j;
}

inline SequenceRecord record_from_json(const nlohmann::json& j) {
  try {
    SequenceRecord r;
    r.n = j.at("n").get<int>();
    r.theta0 = j.at("theta0").get<double>();
    if (std::abs(r.theta0 - two_pi) < 1e-9) r.theta0 = two_pi;
    if (std::abs(r.theta0 - pi) < 1e-9) r.theta0 = pi;
    if (j.contains("gamma") && !j["gamma"].is_null()) r.gamma = j["gamma"].get<double>();
    r.symmetry = j.contains("symmetry") ? symmetry_from_string(j["symmetry"].get<std::string>()) : Symmetry::none;
    r.phases = j.at("phases").get<std::vector<double>>();
    if (j.contains("kappa") && !j["kappa"].is_null()) r.kappa = j["kappa"].get<double>();
    if (j.contains("residual_norm")) r.residual_norm = j["residual_norm"].get<double>();
    if (j.contains("provenance")) r.provenance = j["provenance"].get<std::string>();
    if (j.contains("L"))
      require(j["L"].get<int>() == r.length(), "record L does not match the phase count");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw contract_error(std::string("malformed sequence record: ") + e.what());
  }
}

/// SolutionSet as {"solutions": [records], "statistics": {...}, "seed": s}.
inline nlohmann::json to_json(const SolutionSet& set) {
  nlohmann::json j;
  j["solutions"] = nlohmann::json::array();
  for (std::size_t i = 0; i < set.solutions.size(); ++i) {
    const auto& s = set.solutions[i];
    const auto seq = make_symmetric_sequence(s.half, set.spec.symmetry, set.spec.gamma);
    SequenceRecord r;
    r.n = set.spec.order;
    r.theta0 = two_pi;
    r.gamma = set.spec.gamma;
    r.symmetry = set.spec.symmetry;
    r.phases = seq.phases;
    r.kappa = s.kappa;
    r.residual_norm = s.residual;
    r.provenance = std::string("search:") + to_string(set.spec.symmetry) + std::to_string(set.spec.order) + "_" +
                   std::to_string(i + 1);
    j["solutions"].push_back(to_json(r));
  }
  j["statistics"] = {{"starts", set.stats.starts}, {"converged", set.stats.converged}, {"classes", set.stats.deduped}};
  j["seed"] = set.seed;
  return j;
}

}  // namespace compulse

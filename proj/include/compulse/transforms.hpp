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

// Sequence-level transformations on top of solved phase lists.

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "compulse/common.hpp"
#include "compulse/su2.hpp"

namespace compulse {

/// psi_k = -sum_{h<k} (-1)^h phi_h + sum_{h>k} (-1)^h phi_h, with h counted from 1.
inline std::vector<double> toggle(std::span<const double> phases) {
  const std::size_t L = phases.size();
  std::vector<double> alt(L);
  double total = 0;
  for (std::size_t h = 0; h < L; ++h) {
    alt[h] = (h % 2 == 0 ? -1.0 : 1.0) * phases[h];
    total += alt[h];
  }
  std::vector<double> out(L);
  double before = 0;
  for (std::size_t k = 0; k < L; ++k) {
    const double after = total - before - alt[k];
    out[k] = wrap_angle(-before + after);
    before += alt[k];
  }
  return out;
}

/// Toggled pi-pulse version of a 2pi-pulse sequence. The target angle
/// becomes gamma * pi.
inline PulseSequence toggle(const PulseSequence& seq) {
  PulseSequence out;
  out.theta0 = pi;
  out.phases = toggle(seq.phases);
  out.gamma = seq.gamma;
  out.label = seq.label.empty() ? std::string("toggled") : "BB(" + seq.label + ")";
  return out;
}

/// compose(seq, eps) * M_0[theta_T].
inline Unitary2 corrected_rotation(const PulseSequence& seq, double theta_T, double eps) {
  if (seq.gamma)
    require(std::abs(*seq.gamma * seq.theta0 - theta_T) <= 1e-9 * std::max(1.0, std::abs(theta_T)),
            "corrected_rotation: theta_T disagrees with the sequence gamma");
  return compose(seq, eps) * faulty_pulse(0.0, theta_T, eps);
}

/// R_0[theta_T] times the fourth root of unity that best matches the
/// error-free corrected rotation. Error-free 2pi and pi sequences differ
/// from the target only by such a global phase.
inline Unitary2 aligned_target(const PulseSequence& seq, double theta_T) {
  const Unitary2 target = rotation(0.0, theta_T);
  const Unitary2 u0 = compose(seq, 0.0) * rotation(0.0, theta_T);
  const complex overlap = (u0 * target.adjoint()).trace();
  const std::array<complex, 4> roots{complex(1, 0), complex(0, 1), complex(-1, 0), complex(0, -1)};
  complex best = roots[0];
  for (const auto& r : roots)
    if (std::real(std::conj(r) * overlap) > std::real(std::conj(best) * overlap)) best = r;
  return best * target;
}

/// Class-B inverting sequence of length n+1, theta0 = pi, raw phases
/// (2 pi / (n+1)) (0, 1, -1, 2, -2, ..., n/2, -n/2).
inline PulseSequence vitanov(int n) {
  require(n >= 2 && n % 2 == 0, "vitanov: n must be even and positive");
  PulseSequence out;
  out.theta0 = pi;
  out.label = "V" + std::to_string(n);
  const double unit = two_pi / (n + 1);
  out.phases.push_back(0.0);
  for (int m = 1; m <= n / 2; ++m) {
    out.phases.push_back(wrap_angle(unit * m));
    out.phases.push_back(wrap_angle(-unit * m));
  }
  return out;
}

struct NonlinearErrorModel {
  std::function<double(double)> error;  // E(theta)
  double theta0 = two_pi;
  double theta_T = pi;

  void validate() const {
    require(static_cast<bool>(error), "nonlinear model needs an error function");
    const double e0 = error(theta0);
    require(std::isfinite(e0) && e0 != 0.0, "nonlinear model requires E(theta0) != 0");
  }
};

struct NonlinearRemap {
  double x_scale = 0;    // x per unit eps, E(theta0) / 2
  double gamma_eff = 0;  // E(theta_T) / E(theta0)
};

inline NonlinearRemap nonlinear_remap(const NonlinearErrorModel& model) {
  model.validate();
  const double e0 = model.error(model.theta0);
  return {0.5 * e0, model.error(model.theta_T) / e0};
}

/// Sequence pulses M_phi[theta0 + eps E(theta0)] followed by M_0[theta_T + eps E(theta_T)].
inline Unitary2 nonlinear_corrected_rotation(std::span<const double> phases, const NonlinearErrorModel& model,
                                             double eps) {
  model.validate();
  const double a0 = model.theta0 + eps * model.error(model.theta0);
  Unitary2 u = Unitary2::identity();
  for (double p : phases) u = u * rotation(p, a0);
  return u * rotation(0.0, model.theta_T + eps * model.error(model.theta_T));
}

/// M_{phi_n} ... M_{phi_1} M_0 M_{phi_1} ... M_{phi_n} from a palindromic
/// 2pi-pulse solution at gamma = 1. Length 2n + 1, zeroth pulse in the middle.
inline PulseSequence rearrange_symmetric(const PulseSequence& seq) {
  seq.validate();
  require(seq.symmetry == Symmetry::palindromic, "rearrange_symmetric: needs a PD-tagged sequence");
  require(seq.gamma && std::abs(*seq.gamma - 1.0) < 1e-12, "rearrange_symmetric: needs gamma = 1");
  require(std::abs(seq.theta0 - two_pi) < 1e-12, "rearrange_symmetric: needs theta0 = 2pi");
  require(seq.length() % 2 == 0, "rearrange_symmetric: needs an even length");
  const std::size_t n = seq.length() / 2;
  PulseSequence out;
  out.theta0 = two_pi;
  out.symmetry = Symmetry::palindromic;
  out.label = seq.label.empty() ? std::string("rearranged") : seq.label + "_centered";
  for (std::size_t k = n; k-- > 0;) out.phases.push_back(seq.phases[k]);
  out.phases.push_back(0.0);
  for (std::size_t k = 0; k < n; ++k) out.phases.push_back(seq.phases[k]);
  return out;
}

}  // namespace compulse

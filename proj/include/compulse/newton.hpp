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

// Damped Gauss-Newton on phase systems. Square systems reduce to Newton;
// rectangular ones are solved in the least-squares sense.

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "compulse/phase_algebra.hpp"

namespace compulse {

struct NewtonOptions {
  int max_iterations = 60;
  double tolerance = 1e-13;
  double max_step = 1.0;
  int max_backtracks = 20;
};

struct NewtonResult {
  std::vector<double> x;
  double residual_norm = 0;
  int iterations = 0;
  bool converged = false;
};

/// A residual/Jacobian pair over a vector of angles.
struct AngleSystem {
  std::function<std::vector<double>(std::span<const double>)> residual;
  std::function<Eigen::MatrixXd(std::span<const double>)> jacobian;
};

inline NewtonResult gauss_newton(const AngleSystem& system, std::vector<double> x, const NewtonOptions& opt = {}) {
  NewtonResult out;
  auto r = system.residual(x);
  double norm = norm2(r);
  int it = 0;
  for (; it < opt.max_iterations && norm > opt.tolerance; ++it) {
    const Eigen::MatrixXd jac = system.jacobian(x);
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
    Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-rv);
    if (!step.allFinite()) break;
    const double size = step.norm();
    if (size > opt.max_step) step *= opt.max_step / size;
    double scale = 1.0;
    bool accepted = false;
    for (int b = 0; b <= opt.max_backtracks; ++b, scale *= 0.5) {
      std::vector<double> trial(x);
      for (std::size_t k = 0; k < trial.size(); ++k) trial[k] = wrap_angle(trial[k] + scale * step[k]);
      auto rt = system.residual(trial);
      const double nt = norm2(rt);
      if (nt < norm) {
        x = std::move(trial);
        r = std::move(rt);
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  out.x = std::move(x);
  out.residual_norm = norm;
  out.iterations = it;
  out.converged = norm <= opt.tolerance * 1e3;
  return out;
}

/// Residual and Jacobian of an AP/PD system on its half list.
inline AngleSystem symmetric_system(const ConstraintSpec& spec) {
  return {[spec](std::span<const double> h) { return symmetric_residual(spec, h); },
          [spec](std::span<const double> h) { return jacobian(spec, h); }};
}

/// Residual and Jacobian of the unsymmetrized system on a full list.
inline AngleSystem full_system(const ConstraintSpec& spec) {
  return {[spec](std::span<const double> p) { return constraint_residual(spec, p); },
          [spec](std::span<const double> p) { return full_jacobian(spec, p); }};
}

}  // namespace compulse

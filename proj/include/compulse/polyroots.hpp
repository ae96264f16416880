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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace compulse {

struct RealRoots {
  std::vector<double> roots;
  bool degree_reduced = false;  // leading coefficient vanished at this gamma
};

/// Real roots of sum_i c[i] x^i via companion-matrix eigenvalues. Near-real
/// pairs from double roots are kept when the polynomial is small there.
inline RealRoots real_polynomial_roots(std::vector<double> c) {
  RealRoots out;
  double scale = 0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0) return out;
  while (c.size() > 1 && std::abs(c.back()) <= 1e-12 * scale) {
    c.pop_back();
    out.degree_reduced = true;
  }
  const int degree = static_cast<int>(c.size()) - 1;
  if (degree < 1) return out;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[i] / c[degree];
  const Eigen::VectorXcd eig = companion.eigenvalues();
  auto scaled_value = [&](double x) {
    double v = 0, m = 0, p = 1;
    for (double ci : c) {
      v += ci * p;
      m += std::abs(ci * p);
      p *= x;
    }
    return std::abs(v) / std::max(m, 1e-300);
  };
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const double re = eig[i].real();
    const double im = eig[i].imag();
    if (std::abs(im) <= 1e-9 * std::max(1.0, std::abs(re)) ||
        (std::abs(im) <= 1e-4 * std::max(1.0, std::abs(re)) && scaled_value(re) < 1e-10))
      out.roots.push_back(re);
  }
  std::sort(out.roots.begin(), out.roots.end());
  // Collapse double roots reported twice.
  std::vector<double> unique;
  for (double r : out.roots)
    if (unique.empty() || std::abs(r - unique.back()) > 1e-7 * std::max(1.0, std::abs(r))) unique.push_back(r);
  out.roots = std::move(unique);
  return out;
}

}  // namespace compulse

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

// Solve PD2 at gamma = 1, check it, and print how the error scales.

#include <cstdio>

#include "compulse/compulse.hpp"

using namespace compulse;

int main() {
  const double gamma = 1.0;
  for (const auto& seq : solve_closed_form(ClosedFormFamily::PD2, gamma)) {
    std::printf("%s:", seq.label.c_str());
    for (double p : seq.phases) std::printf(" %+.6f", p);
    std::printf("\n  residual %.2e  kappa %.5f\n", full_residual_norm(2, gamma, seq.phases),
                kappa(2, gamma, seq.phases));

    const double theta_T = gamma * seq.theta0;
    const auto curve = error_curve(seq, theta_T, log_grid(1e-3, 1e-1, 5));
    for (const auto& p : curve.points) std::printf("  eps %.0e  D %.3e\n", p.eps, p.value);
    std::printf("  slope %.3f\n", fit_slope(error_curve(seq, theta_T, log_grid(1e-3, 1e-2, 11))).slope);
  }
}

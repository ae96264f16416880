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

// Count AP and PD solution classes by multistart search, then follow the
// ToP family in gamma.

#include <cstdio>

#include "compulse/compulse.hpp"

using namespace compulse;

int main() {
  const double gamma = 0.5;
  for (int n = 1; n <= 4; ++n) {
    const auto c = census(n, gamma, default_start_count(n), 1);
    std::printf("n=%d gamma=%.2f: %zu classes\n", n, gamma, c.classes);
    for (const auto* set : {&c.antipalindromic, &c.palindromic})
      for (const auto& s : set->solutions) {
        std::printf("  %s", to_string(set->spec.symmetry));
        for (double h : s.half) std::printf(" %+.5f", h);
        std::printf("  kappa %.5f\n", s.kappa);
      }
  }

  const auto path = continue_path(seed_top(4, 0), 2.0);
  std::printf("\nToP4 from gamma = 0: %s after %zu records\n", to_string(path.status), path.records.size());
  for (std::size_t k = 0; k < path.records.size(); k += 10) {
    const auto& r = path.records[k];
    std::printf("  gamma %.3f  det J %+.3e  residual %.1e\n", r.gamma, r.det_j, r.residual);
  }
}

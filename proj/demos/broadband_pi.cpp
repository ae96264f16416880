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

// Toggled PD sequences as broadband inverting pulses, next to a few
// sequences from the literature.

#include <cstdio>

#include "compulse/compulse.hpp"

using namespace compulse;

int main() {
  const auto lib = literature_library();
  std::printf("%-8s %4s %10s %10s\n", "label", "L", "p(0.2)", "width");
  for (const auto& e : lib)
    std::printf("%-8s %4zu %10.6f %10.4f\n", e.sequence.label.c_str(), e.sequence.length(),
                transition_probability(compose(e.sequence, 0.2)), inversion_width(e.sequence, 1 - 1e-4));

  const auto bb4 = bb_sequence(4);
  std::printf("\nBB4 phases:");
  for (double p : bb4.phases) std::printf(" %+.5f", p);
  std::printf("\n\n%8s %14s\n", "eps", "1 - p");
  for (int k = -5; k <= 5; ++k) {
    const double e = 0.1 * k;
    std::printf("%8.2f %14.3e\n", e, 1 - transition_probability(compose(bb4, e)));
  }
}

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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace compulse {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Raised when a caller breaks an operation's precondition.
class contract_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative procedure exceeds its configured work budget.
class resource_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an iterative solver fails to converge.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw contract_error(message);
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double angle) {
  double r = std::remainder(angle, two_pi);
  if (r <= -pi) r += two_pi;
  return r;
}

enum class Symmetry { none, antipalindromic, palindromic };

enum class PulseFamily { two_pi, pi };

inline const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::antipalindromic:
      return "AP";
    case Symmetry::palindromic:
      return "PD";
    default:
      return "none";
  }
}

inline Symmetry symmetry_from_string(const std::string& s) {
  if (s == "AP" || s == "ap") return Symmetry::antipalindromic;
  if (s == "PD" || s == "pd") return Symmetry::palindromic;
  if (s == "none" || s.empty()) return Symmetry::none;
  throw contract_error("unknown symmetry tag: " + s);
}

}  // namespace compulse

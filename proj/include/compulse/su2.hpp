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

// Numeric kernel for single-qubit rotations. Matrices are 2x2 complex,
// row-major, and global phase is always kept.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "compulse/common.hpp"

namespace compulse {

using complex = std::complex<double>;

class Mat2 {
 public:
  constexpr Mat2() = default;
  constexpr Mat2(complex a, complex b, complex c, complex d) : m_{a, b, c, d} {}

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }
  static constexpr Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
  static constexpr Mat2 pauli_y() { return {0.0, complex(0, -1), complex(0, 1), 0.0}; }
  static constexpr Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

  constexpr complex operator()(int row, int col) const { return m_[2 * row + col]; }
  constexpr complex& operator()(int row, int col) { return m_[2 * row + col]; }

  constexpr complex trace() const { return m_[0] + m_[3]; }
  constexpr complex determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  Mat2 adjoint() const {
    return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
  }

  double frobenius_norm_sq() const {
    double s = 0;
    for (const auto& z : m_) s += std::norm(z);
    return s;
  }

  double max_abs() const {
    double s = 0;
    for (const auto& z : m_) s = std::max(s, std::abs(z));
    return s;
  }

  friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m_[0] * b.m_[0] + a.m_[1] * b.m_[2], a.m_[0] * b.m_[1] + a.m_[1] * b.m_[3],
            a.m_[2] * b.m_[0] + a.m_[3] * b.m_[2], a.m_[2] * b.m_[1] + a.m_[3] * b.m_[3]};
  }
  friend constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.m_[0] + b.m_[0], a.m_[1] + b.m_[1], a.m_[2] + b.m_[2], a.m_[3] + b.m_[3]};
  }
  friend constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.m_[0] - b.m_[0], a.m_[1] - b.m_[1], a.m_[2] - b.m_[2], a.m_[3] - b.m_[3]};
  }
  friend constexpr Mat2 operator*(complex s, const Mat2& a) {
    return {s * a.m_[0], s * a.m_[1], s * a.m_[2], s * a.m_[3]};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;

 private:
  std::array<complex, 4> m_{};
};

using Unitary2 = Mat2;

/// sigma_phi = X cos(phi) + Y sin(phi)
inline Mat2 pauli_phi(double phase) {
  const complex e(std::cos(phase), std::sin(phase));
  return {0.0, std::conj(e), e, 0.0};
}

/// exp(-i amplitude sigma_phi / 2), i.e. cos(a/2) I - i sin(a/2) sigma_phi.
inline Unitary2 rotation(double phase, double amplitude) {
  const double c = std::cos(amplitude / 2);
  const double s = std::sin(amplitude / 2);
  const complex e(std::cos(phase), std::sin(phase));
  const complex off = complex(0, -s);
  return {c, off * std::conj(e), off * e, c};
}

/// A pulse that over-rotates by the fractional amplitude error eps.
inline Unitary2 faulty_pulse(double phase, double amplitude, double eps) {
  return rotation(phase, (1.0 + eps) * amplitude);
}

/// Equal-amplitude pulses with ordered phases. Phase index 0 is the leftmost
/// factor of the operator product.
struct PulseSequence {
  double theta0 = two_pi;
  std::vector<double> phases;
  Symmetry symmetry = Symmetry::none;
  std::optional<double> gamma;
  std::string label;

  std::size_t length() const { return phases.size(); }

  /// Throws contract_error when the symmetry tag disagrees with the phases.
  void validate() const {
    require(!phases.empty(), "pulse sequence must contain at least one pulse");
    require(std::isfinite(theta0), "theta0 must be finite");
    const std::size_t n = phases.size();
    for (std::size_t k = 0; k < n; ++k) {
      require(std::isfinite(phases[k]), "phases must be finite");
      const double mirror = phases[n - 1 - k];
      if (symmetry == Symmetry::antipalindromic)
        require(phases[k] == -mirror, "antipalindromic tag requires phi_k = -phi_{L-k+1}");
      if (symmetry == Symmetry::palindromic)
        require(phases[k] == mirror, "palindromic tag requires phi_k = phi_{L-k+1}");
    }
  }
};

inline Unitary2 compose(std::span<const double> phases, double theta0, double eps) {
  Unitary2 u = Unitary2::identity();
  for (double phase : phases) u = u * faulty_pulse(phase, theta0, eps);
  return u;
}

inline Unitary2 compose(const PulseSequence& seq, double eps) {
  return compose(seq.phases, seq.theta0, eps);
}

/// Sum of the two singular values of a 2x2 matrix. The singular values are
/// the square roots of the Gram eigenvalues, so their sum squared is
/// tr(A^H A) + 2 |det A|.
inline double nuclear_norm(const Mat2& a) {
  const double gram_trace = a.frobenius_norm_sq();
  const double det = std::abs(a.determinant());
  return std::sqrt(std::max(0.0, gram_trace + 2.0 * det));
}

/// Singular values, largest first.
inline std::array<double, 2> singular_values(const Mat2& a) {
  const double t = a.frobenius_norm_sq();
  const double d = std::abs(a.determinant());
  const double sum = std::sqrt(std::max(0.0, t + 2 * d));
  const double diff = std::sqrt(std::max(0.0, t - 2 * d));
  return {(sum + diff) / 2, std::max(0.0, (sum - diff) / 2)};
}

inline double trace_distance(const Unitary2& u, const Unitary2& v) {
  return 0.5 * nuclear_norm(u - v);
}

/// Gate fidelity |tr(U V^H)| / 2.
inline double fidelity(const Unitary2& u, const Unitary2& v) {
  return 0.5 * std::abs((u * v.adjoint()).trace());
}

inline double infidelity(const Unitary2& u, const Unitary2& v) { return 1.0 - fidelity(u, v); }

/// |<1|U|0>|^2
inline double transition_probability(const Unitary2& u) { return std::norm(u(1, 0)); }

inline double unitarity_defect(const Unitary2& u) {
  return (u * u.adjoint() - Unitary2::identity()).max_abs();
}

}  // namespace compulse

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

// Phase sums, their polynomial targets, and the constraint systems built from
// them.
//
// For a phase list phi_1..phi_L the phase sum of order j is
//
//     Phi_L^j = sum over h_1 < ... < h_j of exp(-i sum_k (-1)^k phi_{h_k}),
//
// and an order-n, 2pi-pulse sequence of even length L corrects a target
// rotation gamma * theta0 iff Phi_L^j = f_L^j(gamma) for 0 < j <= n, where
//
//     sum_j f_L^j(gamma) y^j = (1 + y)^((L - gamma)/2) (1 - y)^((L + gamma)/2).
//
// Only the real parts of odd orders and the imaginary parts of all orders are
// independent; the real parts of even orders follow from unitarity.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "compulse/common.hpp"
#include "compulse/su2.hpp"

namespace compulse {

struct PhaseSumTable {
  int length = 0;
  int jmax = 0;
  std::vector<complex> values;  // values[j] = Phi_L^j, j = 0..jmax

  complex operator[](int j) const { return values.at(static_cast<std::size_t>(j)); }
};

namespace detail {

/// Sign of the exponent attached to the j-th chosen element.
inline constexpr double position_sign(int j) { return (j % 2 == 1) ? 1.0 : -1.0; }

inline complex unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace detail

/// Dynamic programming over Phi_p^j = Phi_{p-1}^j + Phi_{p-1}^{j-1} e^{i(-1)^{j+1} phi_p}.
inline PhaseSumTable phase_sums(std::span<const double> phases, int jmax) {
  const int length = static_cast<int>(phases.size());
  require(jmax >= 0 && jmax <= length, "phase_sums: jmax must lie in [0, L]");
  std::vector<complex> row(static_cast<std::size_t>(jmax) + 1, complex(0.0));
  row[0] = 1.0;
  for (int p = 0; p < length; ++p) {
    const complex plus = detail::unit(phases[p]);
    const complex minus = std::conj(plus);
    for (int j = std::min(jmax, p + 1); j >= 1; --j) row[j] += row[j - 1] * (j % 2 ? plus : minus);
  }
  return {length, jmax, std::move(row)};
}

/// grad[j][p] = d Phi_L^j / d phi_p for j = 0..jmax.
inline std::vector<std::vector<complex>> phase_sum_gradients(std::span<const double> phases, int jmax) {
  const int length = static_cast<int>(phases.size());
  require(jmax >= 0 && jmax <= length, "phase_sum_gradients: jmax must lie in [0, L]");
  const auto rows = static_cast<std::size_t>(jmax) + 1;
  std::vector<complex> plus(length), minus(length);
  for (int p = 0; p < length; ++p) {
    plus[p] = detail::unit(phases[p]);
    minus[p] = std::conj(plus[p]);
  }
  std::vector<std::vector<complex>> grad(rows, std::vector<complex>(length, complex(0.0)));
  std::vector<complex> prefix(rows, complex(0.0));
  prefix[0] = 1.0;
  std::vector<complex> deriv(rows);
  for (int p = 0; p < length; ++p) {
    // Sums in which phi_p is chosen, differentiated at phi_p.
    std::fill(deriv.begin(), deriv.end(), complex(0.0));
    for (std::size_t j = 1; j < rows; ++j) {
      const complex factor = (j % 2) ? complex(0, 1) * plus[p] : complex(0, -1) * minus[p];
      deriv[j] = prefix[j - 1] * factor;
    }
    for (int q = p + 1; q < length; ++q)
      for (std::size_t j = rows - 1; j >= 1; --j) deriv[j] += deriv[j - 1] * ((j % 2) ? plus[q] : minus[q]);
    for (std::size_t j = 0; j < rows; ++j) grad[j][p] = deriv[j];
    for (std::size_t j = std::min<std::size_t>(rows - 1, p + 1); j >= 1; --j)
      prefix[j] += prefix[j - 1] * ((j % 2) ? plus[p] : minus[p]);
  }
  return grad;
}

/// binom(top, k) for real or exact top, as a falling factorial over k!.
template <class Scalar>
Scalar generalized_binomial(const Scalar& top, int k) {
  Scalar result(1);
  for (int i = 0; i < k; ++i) {
    result *= (top - Scalar(i));
    result /= Scalar(i + 1);
  }
  return result;
}

/// f_L^j(gamma) = sum_k (-1)^k binom(T, k) binom(L - T, j - k), T = (gamma + L)/2.
template <class Scalar>
Scalar ml_poly(int length, int j, const Scalar& gamma) {
  require(j >= 0, "ml_poly: order must be non-negative");
  const Scalar top = (gamma + Scalar(length)) / Scalar(2);
  const Scalar rest = Scalar(length) - top;
  Scalar sum(0);
  for (int k = 0; k <= j; ++k) {
    Scalar term = generalized_binomial(top, k) * generalized_binomial(rest, j - k);
    if (k % 2) sum -= term;
    else sum += term;
  }
  return sum;
}

/// Coefficients of f_L^j as a polynomial in gamma, lowest power first.
template <class Scalar>
std::vector<Scalar> ml_poly_coefficients(int length, int j) {
  using Poly = std::vector<Scalar>;
  auto mul = [](const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
    return out;
  };
  // binom(c0 + c1*gamma, k) as a polynomial in gamma.
  auto binom_poly = [&](const Scalar& c0, const Scalar& c1, int k) {
    Poly p{Scalar(1)};
    for (int i = 0; i < k; ++i) {
      p = mul(p, Poly{(c0 - Scalar(i)) / Scalar(i + 1), c1 / Scalar(i + 1)});
    }
    return p;
  };
  const Scalar half_length = Scalar(length) / Scalar(2);
  Poly sum(static_cast<std::size_t>(j) + 1, Scalar(0));
  for (int k = 0; k <= j; ++k) {
    Poly term = mul(binom_poly(half_length, Scalar(1) / Scalar(2), k),
                    binom_poly(half_length, Scalar(-1) / Scalar(2), j - k));
    for (std::size_t i = 0; i < term.size(); ++i) {
      if (k % 2) sum[i] -= term[i];
      else sum[i] += term[i];
    }
  }
  return sum;
}

inline double ml_poly_derivative(int length, int j, double gamma) {
  const auto c = ml_poly_coefficients<double>(length, j);
  double d = 0;
  for (std::size_t i = c.size() - 1; i >= 1; --i) d = d * gamma + static_cast<double>(i) * c[i];
  return d;
}

/// Mirrors a half list: AP appends the negated reversal, PD the reversal.
inline std::vector<double> expand_symmetry(std::span<const double> half, Symmetry tag) {
  require(tag != Symmetry::none, "expand_symmetry: tag must be AP or PD");
  std::vector<double> full(half.begin(), half.end());
  full.reserve(2 * half.size());
  const double sign = (tag == Symmetry::antipalindromic) ? -1.0 : 1.0;
  for (auto it = half.rbegin(); it != half.rend(); ++it) full.push_back(sign * *it);
  return full;
}

inline PulseSequence make_symmetric_sequence(std::span<const double> half, Symmetry tag, double gamma,
                                             std::string label = {}) {
  PulseSequence seq;
  seq.theta0 = two_pi;
  seq.phases = expand_symmetry(half, tag);
  seq.symmetry = tag;
  seq.gamma = gamma;
  seq.label = std::move(label);
  return seq;
}

/// The residual system for an order-n, length-L sequence at target gamma.
struct ConstraintSpec {
  int order = 1;
  int length = 2;
  double gamma = 1.0;
  PulseFamily family = PulseFamily::two_pi;
  Symmetry symmetry = Symmetry::none;

  static ConstraintSpec symmetric(int order, double gamma, Symmetry tag) {
    return {order, 2 * order, gamma, PulseFamily::two_pi, tag};
  }

  void validate() const {
    require(order >= 1, "constraint order must be positive");
    require(length >= 1, "sequence length must be positive");
    require(std::isfinite(gamma), "gamma must be finite");
    if (family == PulseFamily::two_pi)
      require(length % 2 == 0, "2pi-pulse sequences need even length");
    else {
      require(length % 4 == 0, "pi-pulse sequences need length divisible by 4");
      require(symmetry == Symmetry::none, "pi-pulse constraints take unsymmetrized phases");
    }
    if (symmetry != Symmetry::none) require(length % 2 == 0, "symmetric sequences need even length");
  }

  /// Lower bound: no order-n sequence with L <= n corrects arbitrary gamma.
  bool feasible() const { return length > order; }

  void require_feasible() const {
    validate();
    require(feasible(), "infeasible constraint system: need L > n");
  }

  int free_variables() const { return symmetry == Symmetry::none ? length : length / 2; }

  std::size_t equation_count() const {
    std::size_t count = 0;
    for (int j = 1; j <= order; ++j) count += row_count(j);
    if (family == PulseFamily::pi) count += 2;
    return count;
  }

  /// Rows contributed by order j, in Re-before-Im order.
  int row_count(int j) const {
    if (family == PulseFamily::pi || symmetry == Symmetry::none) return (j % 2) ? 2 : 1;
    if (symmetry == Symmetry::antipalindromic) return 1;
    return (j % 2) ? 2 : 0;
  }
};

namespace detail {

// Calls emit(j, is_real_part) for each residual row in order.
template <class Emit>
void for_each_row(const ConstraintSpec& spec, Emit&& emit) {
  for (int j = 1; j <= spec.order; ++j) {
    const bool odd = j % 2;
    switch (spec.family == PulseFamily::pi ? Symmetry::none : spec.symmetry) {
      case Symmetry::none:
        if (odd) emit(j, true);
        emit(j, false);
        break;
      case Symmetry::antipalindromic:
        emit(j, odd);
        break;
      case Symmetry::palindromic:
        if (odd) {
          emit(j, true);
          emit(j, false);
        }
        break;
    }
  }
}

}  // namespace detail

/// Stacked residuals, j ascending with Re before Im. For the pi-pulse family
/// the phase sums are read in reverse order, Phi^j -> Phi^{L-j}, and two
/// leading rows require Phi^L = 1.
inline std::vector<double> constraint_residual(const ConstraintSpec& spec, std::span<const double> phases) {
  spec.validate();
  require(static_cast<int>(phases.size()) == spec.length,
          "constraint_residual: phase count does not match the spec length");
  const int length = spec.length;
  const bool reversed = spec.family == PulseFamily::pi;
  const int jmax = reversed ? length : std::min(spec.order, length);
  const auto table = phase_sums(phases, jmax);
  auto phi = [&](int j) -> complex {
    const int index = reversed ? length - j : j;
    if (index < 0 || index > jmax) return 0.0;
    return table[index];
  };
  std::vector<double> out;
  out.reserve(spec.equation_count());
  if (reversed) {
    out.push_back(phi(0).real() - 1.0);
    out.push_back(phi(0).imag());
  }
  detail::for_each_row(spec, [&](int j, bool real_part) {
    const complex value = phi(j);
    out.push_back(real_part ? value.real() - ml_poly<double>(length, j, spec.gamma) : value.imag());
  });
  return out;
}

inline double norm2(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Residual of the symmetric system evaluated on a half list.
inline std::vector<double> symmetric_residual(const ConstraintSpec& spec, std::span<const double> half) {
  require(spec.symmetry != Symmetry::none, "symmetric_residual needs an AP or PD spec");
  return constraint_residual(spec, expand_symmetry(half, spec.symmetry));
}

/// Residual of the full, unsymmetrized 2pi system on a full phase list.
inline double full_residual_norm(int order, double gamma, std::span<const double> phases) {
  ConstraintSpec spec{order, static_cast<int>(phases.size()), gamma, PulseFamily::two_pi, Symmetry::none};
  return norm2(constraint_residual(spec, phases));
}

/// Jacobian of the symmetric residual with respect to the independent half
/// phases. For AP this is the map Re Phi^j (odd j), Im Phi^j (even j); for PD
/// the rows are Re and Im of the odd orders. Rows match constraint_residual.
inline Eigen::MatrixXd jacobian(const ConstraintSpec& spec, std::span<const double> half) {
  spec.validate();
  require(spec.family == PulseFamily::two_pi && spec.symmetry != Symmetry::none,
          "jacobian needs an AP or PD 2pi-pulse spec");
  const int m = spec.length / 2;
  require(static_cast<int>(half.size()) == m, "jacobian: half list must have L/2 entries");
  const auto full = expand_symmetry(half, spec.symmetry);
  const int jmax = std::min(spec.order, spec.length);
  const auto grad = phase_sum_gradients(full, jmax);
  const double mirror_sign = spec.symmetry == Symmetry::antipalindromic ? -1.0 : 1.0;
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(spec.equation_count()), m);
  Eigen::Index row = 0;
  detail::for_each_row(spec, [&](int j, bool real_part) {
    for (int k = 0; k < m; ++k) {
      const complex d = grad[j][k] + mirror_sign * grad[j][spec.length - 1 - k];
      jac(row, k) = real_part ? d.real() : d.imag();
    }
    ++row;
  });
  return jac;
}

/// Jacobian of constraint_residual with respect to every phase of a full,
/// unsymmetrized list. Works for both pulse families.
inline Eigen::MatrixXd full_jacobian(const ConstraintSpec& spec, std::span<const double> phases) {
  spec.validate();
  require(static_cast<int>(phases.size()) == spec.length, "full_jacobian: phase count does not match");
  const int length = spec.length;
  const bool reversed = spec.family == PulseFamily::pi;
  const int jmax = reversed ? length : std::min(spec.order, length);
  const auto grad = phase_sum_gradients(phases, jmax);
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(spec.equation_count()), length);
  Eigen::Index row = 0;
  auto emit_row = [&](int index, bool real_part) {
    for (int k = 0; k < length; ++k) {
      const complex d = (index >= 0 && index <= jmax) ? grad[index][k] : complex(0.0);
      jac(row, k) = real_part ? d.real() : d.imag();
    }
    ++row;
  };
  if (reversed) {
    emit_row(length, true);
    emit_row(length, false);
  }
  detail::for_each_row(spec, [&](int j, bool real_part) { emit_row(reversed ? length - j : j, real_part); });
  return jac;
}

/// d(residual)/d(gamma): only the real-part rows depend on gamma.
inline Eigen::VectorXd residual_gamma_derivative(const ConstraintSpec& spec) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(spec.equation_count()));
  Eigen::Index row = 0;
  if (spec.family == PulseFamily::pi) {
    d(row++) = 0;
    d(row++) = 0;
  }
  detail::for_each_row(spec, [&](int j, bool real_part) {
    d(row++) = real_part ? -ml_poly_derivative(spec.length, j, spec.gamma) : 0.0;
  });
  return d;
}

/// Taylor coefficients, in x = eps * theta0 / 2, of S(x) R_0[2 x gamma] - c I
/// where c = (-1)^L for 2pi pulses and (-i)^L for pi pulses.
struct SeriesExpansion {
  std::vector<Mat2> coefficients;
  std::vector<double> residuals;  // max-abs entry per order

  int order() const { return static_cast<int>(coefficients.size()) - 1; }
};

namespace detail {

using MatSeries = std::vector<Mat2>;

inline MatSeries series_product(const MatSeries& a, const MatSeries& b) {
  const std::size_t k = a.size();
  MatSeries out(k, Mat2::zero());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; i + j < k; ++j) out[i + j] = out[i + j] + a[i] * b[j];
  return out;
}

// Taylor series of cos(a + s x) I - i sin(a + s x) sigma.
inline MatSeries rotation_series(double offset, double scale, const Mat2& sigma, int order) {
  MatSeries out;
  out.reserve(static_cast<std::size_t>(order) + 1);
  double power = 1.0;
  double factorial = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) {
      power *= scale;
      factorial *= k;
    }
    const double shift = offset + k * pi / 2;
    const double c = std::cos(shift) * power / factorial;
    const double s = std::sin(shift) * power / factorial;
    out.push_back(complex(c) * Mat2::identity() + complex(0, -s) * sigma);
  }
  return out;
}

}  // namespace detail

inline SeriesExpansion verify_expansion(const PulseSequence& seq, double gamma, int order) {
  seq.validate();
  require(order >= 0, "verify_expansion: order must be non-negative");
  const bool two_pi_pulses = std::abs(seq.theta0 - two_pi) < 1e-12;
  const bool pi_pulses = std::abs(seq.theta0 - pi) < 1e-12;
  require(two_pi_pulses || pi_pulses, "verify_expansion: theta0 must be pi or 2pi");
  detail::MatSeries product(static_cast<std::size_t>(order) + 1, Mat2::zero());
  product[0] = Mat2::identity();
  for (double phase : seq.phases)
    product = detail::series_product(product, detail::rotation_series(seq.theta0 / 2, 1.0, pauli_phi(phase), order));
  product = detail::series_product(product, detail::rotation_series(0.0, gamma, Mat2::pauli_x(), order));
  const int length = static_cast<int>(seq.length());
  complex reference = 1.0;
  for (int k = 0; k < length; ++k) reference *= two_pi_pulses ? complex(-1.0) : complex(0, -1);
  product[0] = product[0] - reference * Mat2::identity();
  SeriesExpansion out;
  out.coefficients = std::move(product);
  for (const auto& c : out.coefficients) out.residuals.push_back(c.max_abs());
  return out;
}

/// |f_{L}^{n+1}(gamma) - Phi_{L}^{n+1}|, the size of the leading error term.
inline double leading_error(int order, double gamma, std::span<const double> phases) {
  const int length = static_cast<int>(phases.size());
  require(order + 1 <= length, "leading_error: need L >= n + 1");
  const auto table = phase_sums(phases, order + 1);
  return std::abs(complex(ml_poly<double>(length, order + 1, gamma)) - table[order + 1]);
}

/// Leading-error scale: the residual rotation has amplitude
/// (kappa * eps * theta0 / 2)^(n+1), i.e. kappa^(n+1) = 2 |f - Phi|.
inline double kappa(int order, double gamma, std::span<const double> phases, double tolerance = 1e-8) {
  const int length = static_cast<int>(phases.size());
  require(length == 2 * order, "kappa: expects L = 2n");
  const double residual = full_residual_norm(order, gamma, phases);
  if (!(residual < tolerance))
    throw contract_error("kappa: phases do not satisfy the order-" + std::to_string(order) +
                         " constraints (residual " + std::to_string(residual) + ")");
  return std::pow(2.0 * leading_error(order, gamma, phases), 1.0 / (order + 1));
}

/// Wraps to (-pi, pi] and picks the global-sign representative whose first
/// non-negligible phase is positive.
inline std::vector<double> canonicalize(std::span<const double> phases) {
  std::vector<double> out(phases.begin(), phases.end());
  for (double& p : out) p = wrap_angle(p);
  for (double p : out) {
    if (std::abs(p) < 1e-12) continue;
    if (p < 0)
      for (double& q : out) q = wrap_angle(-q);
    break;
  }
  return out;
}

inline std::vector<double> canonicalize_wrap_only(std::span<const double> phases) {
  std::vector<double> out(phases.begin(), phases.end());
  for (double& p : out) p = wrap_angle(p);
  return out;
}

/// Max-norm distance between angle lists, modulo 2pi.
inline double angular_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "angular_distance: length mismatch");
  double d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(wrap_angle(a[k] - b[k])));
  return d;
}

}  // namespace compulse

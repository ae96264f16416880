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

// Triangular closed forms for short sequences, in the Weierstrass variables
// t_k = tan(phi_k / 2). Each chain starts with a univariate h(t_1) whose real
// roots are found from a companion matrix; the remaining t_k follow by
// substitution.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "compulse/common.hpp"
#include "compulse/newton.hpp"
#include "compulse/phase_algebra.hpp"
#include "compulse/polyroots.hpp"
#include "compulse/su2.hpp"

namespace compulse {

enum class ClosedFormFamily { AP1, AP2, PD2, NS2, AP3, PD4 };

inline const char* to_string(ClosedFormFamily f) {
  switch (f) {
    case ClosedFormFamily::AP1: return "AP1";
    case ClosedFormFamily::AP2: return "AP2";
    case ClosedFormFamily::PD2: return "PD2";
    case ClosedFormFamily::NS2: return "NS2";
    case ClosedFormFamily::AP3: return "AP3";
    case ClosedFormFamily::PD4: return "PD4";
  }
  return "?";
}

inline ClosedFormFamily closed_form_family_from_string(const std::string& s) {
  for (auto f : {ClosedFormFamily::AP1, ClosedFormFamily::AP2, ClosedFormFamily::PD2, ClosedFormFamily::NS2,
                 ClosedFormFamily::AP3, ClosedFormFamily::PD4})
    if (s == to_string(f)) return f;
  throw contract_error("unknown closed-form family: " + s);
}

/// h(t_1) and its back-substitution. When `in_t1_squared` is set the
/// coefficients are in u = t_1^2 and only t_1 >= 0 is enumerated, since the
/// negated branch is the global-sign partner.
struct RegularChain {
  ClosedFormFamily family = ClosedFormFamily::AP1;
  int order = 1;
  Symmetry symmetry = Symmetry::antipalindromic;
  bool in_t1_squared = true;
  std::function<std::vector<double>(double gamma, double t4)> h_coefficients;
  std::function<std::vector<double>(double gamma, double t1, double t4)> substitute;

  int variables() const { return family == ClosedFormFamily::NS2 ? 4 : order; }
};

namespace detail {

inline double pd4_a(int n, double g) {
  const double base = (g - 8) * (g - 4) * (g + 4);
  switch (n) {
    case 1: return base * (-(g - 8) * (g - 4) * (g - 4) * g);
    case 2: return base * (-3 * g * (g * g - 2 * g + 4));
    case 3: return base * (g * (g + 2) * (g * g - 6 * g - 4));
    default: return base * (g - 4);
  }
}

inline double pd4_b(int n, double g) {
  const double g2 = g * g, g3 = g2 * g, g4 = g3 * g;
  switch (n) {
    case 1: return (8 + g) * (g4 * g2 - 64 * g4 + 128 * g3 + 1024 * g2 + 1024 * g - 1024);
    case 2: return (8 + g) * (5 * g4 * g - 10 * g4 - 76 * g3 - 64 * g2 - 64 * g + 128);
    case 3: return (8 + g) * (g2 - 6 * g - 4) * (g4 + 2 * g3 - 48 * g2 - 32 * g - 64);
    default: return (8 + g) * (g3 + 4 * g2 - 64 * g + 32);
  }
}

inline double ap3_a1(double g) { return (g - 2) * std::pow(g + 2, 3) * std::pow(g + 4, 2) * std::pow(g + 6, 2); }
inline double ap3_a2(double g) {
  return (g + 2) * (g + 4) * (g + 6) * (std::pow(g, 5) - 32 * std::pow(g, 3) + 96 * g * g + 256 * g + 192);
}
inline double ap3_a3(double g) {
  return std::pow(g, 8) - 60 * std::pow(g, 6) + 816 * std::pow(g, 4) + 9152 * g * g - 9216;
}

// Side condition that fixes the signs of t_2, t_3 in the order-3 chain.
inline double ap3_side(double t1, double t2, double t3) {
  const double s1 = 1 + t1 * t1, s2 = 1 + t2 * t2, s3 = 1 + t3 * t3;
  const double q1 = (2 - s1) / s1, q2 = (2 - s2) / s2, q3 = (2 - s3) / s3;
  return t1 / s1 * (q1 + 2 * q2 + 2 * q3) + t2 / s2 * (q2 + 2 * q3) + t3 / s3 * q3;
}

inline double ns2_partner(double g, double ta, double tb) {
  const double ia = 1 / (1 + ta * ta), ib = 1 / (1 + tb * tb);
  return ta * ((g - 4) * (g - 2) - 8 * (1 - g) * ib - 8 * ia) / ((4 - g) * (g + 2) - 8 * (g + 1) * ib - 8 * ia);
}

}  // namespace detail

inline RegularChain regular_chain(ClosedFormFamily family) {
  RegularChain chain;
  chain.family = family;
  switch (family) {
    case ClosedFormFamily::AP1:
      chain.order = 1;
      chain.h_coefficients = [](double g, double) { return std::vector<double>{2 + g, -(2 - g)}; };
      chain.substitute = [](double, double t1, double) { return std::vector<double>{t1}; };
      break;
    case ClosedFormFamily::AP2:
      chain.order = 2;
      chain.h_coefficients = [](double g, double) {
        return std::vector<double>{(g + 2) * (g + 2) * (g + 4), 2 * g * (g * g + 4), (g - 4) * (g - 2) * (g - 2)};
      };
      chain.substitute = [](double g, double t1, double) { return std::vector<double>{t1, t1 * (2 - g) / (2 + g)}; };
      break;
    case ClosedFormFamily::PD2:
      chain.order = 2;
      chain.symmetry = Symmetry::palindromic;
      chain.h_coefficients = [](double g, double) { return std::vector<double>{4 + g, -(4 - g)}; };
      chain.substitute = [](double, double t1, double) { return std::vector<double>{t1, -t1}; };
      break;
    case ClosedFormFamily::NS2:
      chain.order = 2;
      chain.symmetry = Symmetry::none;
      chain.in_t1_squared = false;
      chain.h_coefficients = [](double g, double t4) {
        const double s = t4 * t4;
        return std::vector<double>{(g + 2) * (g + 2) * (g + 4) + g * (g * g - 4) * s, -16 * g * t4,
                                   g * (g * g - 4) + (g - 4) * (g - 2) * (g - 2) * s};
      };
      chain.substitute = [](double g, double t1, double t4) {
        return std::vector<double>{t1, detail::ns2_partner(g, t1, t4), detail::ns2_partner(g, t4, t1), t4};
      };
      break;
    case ClosedFormFamily::AP3:
      chain.order = 3;
      chain.h_coefficients = [](double g, double) {
        return std::vector<double>{detail::ap3_a1(g), 4 * detail::ap3_a2(g), 6 * detail::ap3_a3(g),
                                   4 * detail::ap3_a2(-g), detail::ap3_a1(-g)};
      };
      chain.substitute = [](double g, double t1, double) {
        const double s1 = 1 + t1 * t1;
        const double t2sq = -(96 * g + 16 * (g * g - 3 * g + 2) * s1 + (g - 4) * (g - 2) * (g + 2) * s1 * s1) /
                            (96 * g + 16 * (g * g - 9 * g + 2) * s1 + (g - 6) * (g - 4) * (g - 2) * s1 * s1);
        const double t3sq = -(g + 2) / (g - 2) * (16 * (g + 1) + (g - 4) * (g - 2) * s1) /
                            (16 * (g - 1) + (g - 6) * (g - 4) * s1);
        if (!(t2sq >= -1e-12) || !(t3sq >= -1e-12)) return std::vector<double>{};
        const double t2 = std::sqrt(std::max(0.0, t2sq)), t3 = std::sqrt(std::max(0.0, t3sq));
        std::vector<double> best;
        double best_side = INFINITY;
        for (double a : {1.0, -1.0})
          for (double b : {1.0, -1.0}) {
            const double side = std::abs(detail::ap3_side(t1, a * t2, b * t3));
            if (side < best_side) {
              best_side = side;
              best = {t1, a * t2, b * t3};
            }
          }
        return best;
      };
      break;
    case ClosedFormFamily::PD4:
      chain.order = 4;
      chain.symmetry = Symmetry::palindromic;
      chain.h_coefficients = [](double g, double) {
        return std::vector<double>{detail::pd4_a(1, -g), 3 * detail::pd4_b(1, g), -3 * detail::pd4_b(1, -g),
                                   -detail::pd4_a(1, g)};
      };
      chain.substitute = [](double g, double t1, double) {
        std::vector<double> t{t1};
        const double u = t1 * t1;
        for (int n = 2; n <= 4; ++n) {
          const double sign = ((1 + (n + 1) / 2) % 2) ? -1.0 : 1.0;
          t.push_back(t1 * sign * (detail::pd4_b(n, g) + detail::pd4_a(n, g) * u) /
                      (detail::pd4_a(n, -g) + detail::pd4_b(n, -g) * u));
        }
        return t;
      };
      break;
  }
  return chain;
}

struct ChainRoots {
  std::vector<std::vector<double>> phases;  // half lists, or full lists for NS2
  bool degree_reduced = false;
};

namespace detail {

inline AngleSystem chain_system(const RegularChain& chain, double gamma, double t4) {
  if (chain.family != ClosedFormFamily::NS2)
    return symmetric_system(ConstraintSpec::symmetric(chain.order, gamma, chain.symmetry));
  const ConstraintSpec spec{2, 4, gamma, PulseFamily::two_pi, Symmetry::none};
  const double phi4 = 2 * std::atan(t4);
  auto full = [phi4](std::span<const double> x) { return std::vector<double>{x[0], x[1], x[2], phi4}; };
  return {[spec, full](std::span<const double> x) { return constraint_residual(spec, full(x)); },
          [spec, full](std::span<const double> x) {
            return Eigen::MatrixXd(full_jacobian(spec, full(x)).leftCols(3));
          }};
}

}  // namespace detail

/// All real branches of the chain at gamma, polished on the full system and
/// filtered by residual.
inline ChainRoots chain_roots(const RegularChain& chain, double gamma, double t4 = 0.0,
                              double tolerance = 1e-9) {
  require(std::isfinite(gamma), "chain_roots: gamma must be finite");
  ChainRoots out;
  const auto h = chain.h_coefficients(gamma, t4);
  const RealRoots roots = real_polynomial_roots(h);
  out.degree_reduced = roots.degree_reduced;
  std::vector<double> t1_values;
  for (double r : roots.roots) {
    if (chain.in_t1_squared) {
      if (r < -1e-10) continue;
      t1_values.push_back(std::sqrt(std::max(0.0, r)));
    } else {
      t1_values.push_back(r);
    }
  }
  // A vanishing leading coefficient sends a root to t_1 = infinity (phi_1 = pi).
  if (roots.degree_reduced) t1_values.push_back(1e9);

  const AngleSystem system = detail::chain_system(chain, gamma, t4);
  const bool ns2 = chain.family == ClosedFormFamily::NS2;
  for (double t1 : t1_values) {
    const auto t = chain.substitute(gamma, t1, t4);
    if (t.empty()) continue;
    std::vector<double> x;
    const std::size_t free = ns2 ? 3 : t.size();
    for (std::size_t k = 0; k < free; ++k) x.push_back(2 * std::atan(t[k]));
    std::vector<std::vector<double>> starts;
    if (std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) starts.push_back(x);
    if (ns2) {
      // Partner formula is 0/0 on the symmetric branches.
      const double a = 2 * std::atan(t1), b = 2 * std::atan(t4);
      for (double p2 : {-a, a, -b, b})
        for (double p3 : {-a, a, -b, b}) starts.push_back({a, p2, p3});
    }
    for (const auto& start : starts) {
      const NewtonResult polished = gauss_newton(system, start, {8, 1e-14, 0.1, 10});
      if (!(polished.residual_norm < tolerance)) continue;
      auto phases = polished.x;
      if (ns2) phases.push_back(2 * std::atan(t4));
      const bool duplicate = std::any_of(out.phases.begin(), out.phases.end(), [&](const auto& p) {
        return angular_distance(p, phases) < 1e-8;
      });
      if (!duplicate) out.phases.push_back(std::move(phases));
    }
  }
  return out;
}

/// Every real solution of the family at gamma, one per global-sign class,
/// expanded to full sequences. Empty outside the real range.
inline std::vector<PulseSequence> solve_closed_form(ClosedFormFamily family, double gamma,
                                                    std::optional<double> ns2_t4 = std::nullopt) {
  require(std::isfinite(gamma), "solve_closed_form: gamma must be finite");
  const bool ns2 = family == ClosedFormFamily::NS2;
  require(!ns2 || ns2_t4.has_value(), "NS2 needs a fixed t4");
  const RegularChain chain = regular_chain(family);
  const auto roots = chain_roots(chain, gamma, ns2_t4.value_or(0.0));
  std::vector<std::vector<double>> classes;
  for (const auto& p : roots.phases) {
    auto c = ns2 ? canonicalize_wrap_only(p) : canonicalize(p);
    const bool duplicate = std::any_of(classes.begin(), classes.end(),
                                       [&](const auto& q) { return angular_distance(q, c) < 1e-8; });
    if (!duplicate) classes.push_back(std::move(c));
  }
  std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) { return a > b; });
  std::vector<PulseSequence> out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    PulseSequence seq;
    seq.theta0 = two_pi;
    seq.symmetry = chain.symmetry;
    seq.phases = ns2 ? classes[i] : expand_symmetry(classes[i], chain.symmetry);
    seq.gamma = gamma;
    seq.label = std::string(to_string(family)) + "_" + std::to_string(i + 1);
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace compulse

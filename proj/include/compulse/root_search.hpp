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

// Multistart enumeration of real AP/PD solutions at fixed gamma.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "compulse/common.hpp"
#include "compulse/newton.hpp"
#include "compulse/phase_algebra.hpp"

namespace compulse {

struct Solution {
  std::vector<double> half;  // canonical
  double kappa = 0;
  double residual = 0;  // full unsymmetrized system
};

struct SearchStatistics {
  std::size_t starts = 0;
  std::size_t converged = 0;
  std::size_t deduped = 0;  // distinct classes kept
};

struct SolutionSet {
  ConstraintSpec spec;
  std::vector<Solution> solutions;
  SearchStatistics stats;
  std::uint64_t seed = 0;
};

struct SearchOptions {
  double dedupe_tolerance = 1e-6;
  double accept_residual = 1e-10;
  NewtonOptions newton{150, 1e-13, 0.5, 4};
};

/// Start k draws from its own generator, so results depend only on (seed, k).
inline std::vector<double> search_start(std::uint64_t seed, std::size_t k, int dimension) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> angle(-pi, pi);
  std::vector<double> x(static_cast<std::size_t>(dimension));
  for (double& v : x) v = angle(rng);
  return x;
}

namespace detail {

// Allocation-free residual and Jacobian of an AP/PD system, with a damped
// Newton loop on top. Prefix sums P[p][a] and alternating-sign suffix sums
// S[q][b][s] give every phase derivative in O(L n^2).
class SymmetricKernel {
 public:
  explicit SymmetricKernel(const ConstraintSpec& spec)
      : spec_(spec),
        n_(spec.order),
        length_(spec.length),
        rows_(static_cast<int>(spec.equation_count())),
        e_(static_cast<std::size_t>(length_)),
        prefix_(static_cast<std::size_t>((length_ + 1) * (n_ + 1))),
        suffix_(static_cast<std::size_t>((length_ + 1) * (n_ + 1) * 2)),
        grad_(static_cast<std::size_t>((n_ + 1) * length_)),
        jac_(rows_, n_),
        res_(rows_),
        trial_res_(rows_) {
    for (int j = 1; j <= n_; ++j) target_.push_back(ml_poly<double>(length_, j, spec.gamma));
    for_each_row(spec, [&](int j, bool re) { layout_.emplace_back(j, re); });
  }

  int rows() const { return rows_; }

  // Fills res (and jac when requested) at half list h; returns the norm.
  double evaluate(const double* h, Eigen::VectorXd& res, bool with_jacobian) {
    const double mirror = spec_.symmetry == Symmetry::antipalindromic ? -1.0 : 1.0;
    for (int k = 0; k < n_; ++k) {
      e_[k] = {std::cos(h[k]), std::sin(h[k])};
      e_[length_ - 1 - k] = mirror > 0 ? e_[k] : std::conj(e_[k]);
    }
    auto P = [&](int p, int a) -> complex& { return prefix_[p * (n_ + 1) + a]; };
    auto S = [&](int q, int b, int s) -> complex& { return suffix_[(q * (n_ + 1) + b) * 2 + s]; };
    std::fill(prefix_.begin(), prefix_.end(), complex(0.0));
    P(0, 0) = 1.0;
    for (int p = 0; p < length_; ++p) {
      P(p + 1, 0) = 1.0;
      for (int j = 1; j <= n_; ++j) P(p + 1, j) = P(p, j) + P(p, j - 1) * ((j % 2) ? e_[p] : std::conj(e_[p]));
    }
    for (int r = 0; r < rows_; ++r) {
      const auto [j, re] = layout_[r];
      const complex v = P(length_, j);
      res[r] = re ? v.real() - target_[j - 1] : v.imag();
    }
    if (with_jacobian) {
      std::fill(suffix_.begin(), suffix_.end(), complex(0.0));
      S(length_, 0, 0) = S(length_, 0, 1) = 1.0;
      for (int q = length_ - 1; q >= 0; --q)
        for (int b = 0; b <= n_; ++b)
          for (int s = 0; s < 2; ++s) {
            complex v = S(q + 1, b, s);
            if (b > 0) v += (s == 0 ? e_[q] : std::conj(e_[q])) * S(q + 1, b - 1, 1 - s);
            S(q, b, s) = v;
          }
      for (int p = 0; p < length_; ++p)
        for (int j = 1; j <= n_; ++j) {
          complex d = 0.0;
          for (int a = 0; a < j; ++a) {
            const bool plus = (a % 2) == 0;
            const complex factor = plus ? complex(0, 1) * e_[p] : complex(0, -1) * std::conj(e_[p]);
            d += P(p, a) * factor * S(p + 1, j - a - 1, plus ? 1 : 0);
          }
          grad_[j * length_ + p] = d;
        }
      for (int r = 0; r < rows_; ++r) {
        const auto [j, re] = layout_[r];
        for (int k = 0; k < n_; ++k) {
          const complex d = grad_[j * length_ + k] + mirror * grad_[j * length_ + length_ - 1 - k];
          jac_(r, k) = re ? d.real() : d.imag();
        }
      }
    }
    return res.norm();
  }

  /// Damped Newton (least squares when rows > n) from x, in place.
  double solve(std::vector<double>& x, const NewtonOptions& opt) {
    double norm = evaluate(x.data(), res_, true);
    std::vector<double> trial(x.size());
    for (int it = 0; it < opt.max_iterations && norm > opt.tolerance; ++it) {
      Eigen::VectorXd step;
      if (rows_ == n_) {
        step = jac_.partialPivLu().solve(-res_);
      } else {
        Eigen::MatrixXd normal = jac_.transpose() * jac_;
        normal.diagonal().array() += 1e-14;
        step = normal.ldlt().solve(-(jac_.transpose() * res_));
      }
      if (!step.allFinite()) break;
      const double size = step.norm();
      if (size > opt.max_step) step *= opt.max_step / size;
      double scale = 1.0;
      bool accepted = false;
      for (int b = 0; b <= opt.max_backtracks; ++b, scale *= 0.5) {
        for (std::size_t k = 0; k < x.size(); ++k) trial[k] = wrap_angle(x[k] + scale * step[static_cast<Eigen::Index>(k)]);
        const double nt = evaluate(trial.data(), trial_res_, false);
        if (nt < norm) {
          x = trial;
          norm = evaluate(x.data(), res_, true);
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    return norm;
  }

 private:
  ConstraintSpec spec_;
  int n_, length_, rows_;
  std::vector<double> target_;
  std::vector<std::pair<int, bool>> layout_;
  std::vector<complex> e_, prefix_, suffix_, grad_;
  Eigen::MatrixXd jac_;
  Eigen::VectorXd res_, trial_res_;
};

}  // namespace detail

inline SolutionSet multistart_search(const ConstraintSpec& spec, std::size_t num_starts, std::uint64_t seed,
                                     const SearchOptions& opt = {}) {
  spec.validate();
  require(spec.family == PulseFamily::two_pi && spec.symmetry != Symmetry::none,
          "multistart_search: needs an AP or PD 2pi-pulse spec");
  require(spec.length == 2 * spec.order, "multistart_search: expects L = 2n");
  require(spec.order <= 8, "multistart_search: supported for n <= 8");
  const int n = spec.order;
  detail::SymmetricKernel kernel(spec);
  SolutionSet out;
  out.spec = spec;
  out.seed = seed;
  out.stats.starts = num_starts;
  for (std::size_t k = 0; k < num_starts; ++k) {
    auto x = search_start(seed, k, n);
    const double residual = kernel.solve(x, opt.newton);
    if (!(residual < opt.accept_residual)) continue;
    ++out.stats.converged;
    auto c = canonicalize(x);
    const bool known = std::any_of(out.solutions.begin(), out.solutions.end(), [&](const Solution& s) {
      return angular_distance(s.half, c) < opt.dedupe_tolerance;
    });
    if (known) continue;
    Solution s;
    const auto full = expand_symmetry(c, spec.symmetry);
    s.residual = full_residual_norm(n, spec.gamma, full);
    s.kappa = kappa(n, spec.gamma, full, 1e-8);
    s.half = std::move(c);
    out.solutions.push_back(std::move(s));
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const Solution& a, const Solution& b) { return a.half > b.half; });
  out.stats.deduped = out.solutions.size();
  return out;
}

inline std::size_t default_start_count(int n) { return static_cast<std::size_t>(1000) << n; }

struct CensusResult {
  int order = 0;
  double gamma = 0;
  SolutionSet antipalindromic;
  SolutionSet palindromic;
  std::size_t classes = 0;  // pooled, sequences in both families counted once

  std::size_t expected_count() const { return std::size_t{1} << ((order + 1) / 2); }
};

/// Pooled AP and PD class count at gamma.
inline CensusResult census(int n, double gamma, std::size_t num_starts, std::uint64_t seed,
                           const SearchOptions& opt = {}) {
  CensusResult out;
  out.order = n;
  out.gamma = gamma;
  out.antipalindromic = multistart_search(ConstraintSpec::symmetric(n, gamma, Symmetry::antipalindromic),
                                          num_starts, seed, opt);
  out.palindromic =
      multistart_search(ConstraintSpec::symmetric(n, gamma, Symmetry::palindromic), num_starts, seed, opt);
  out.classes = out.antipalindromic.solutions.size();
  for (const auto& p : out.palindromic.solutions) {
    const auto full = expand_symmetry(p.half, Symmetry::palindromic);
    const bool shared = std::any_of(
        out.antipalindromic.solutions.begin(), out.antipalindromic.solutions.end(), [&](const Solution& a) {
          const auto other = expand_symmetry(a.half, Symmetry::antipalindromic);
          return angular_distance(canonicalize(full), canonicalize(other)) < opt.dedupe_tolerance;
        });
    if (!shared) ++out.classes;
  }
  return out;
}

}  // namespace compulse

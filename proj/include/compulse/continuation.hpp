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

// Seeds with exactly known phases and predictor-corrector continuation of
// symmetric solutions in gamma.

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "compulse/common.hpp"
#include "compulse/newton.hpp"
#include "compulse/phase_algebra.hpp"
#include "json.hpp"

namespace compulse {

struct SeedDescriptor {
  std::string family;  // "ToP", "PD" or "bootstrap"
  int order = 1;
  int parameter = 0;   // b for ToP, m for PD
  double gamma0 = 0;
  Symmetry symmetry = Symmetry::antipalindromic;
};

struct Seed {
  SeedDescriptor descriptor;
  std::vector<double> half;
};

/// gamma0 = 2b with b phases equal to pi followed by n - b equal to pi/2.
inline Seed seed_top(int n, int b) {
  require(n >= 1, "seed_top: n must be positive");
  require(b >= 0 && b <= n / 2, "seed_top: b must lie in [0, floor(n/2)]");
  Seed s{{"ToP", n, b, 2.0 * b, Symmetry::antipalindromic}, {}};
  for (int k = 0; k < n; ++k) s.half.push_back(k < b ? pi : pi / 2);
  return s;
}

/// gamma0 = 2 with half list (2 m pi / (n+1)) (1, -1, 2, -2, ..., n/2, -n/2).
inline Seed seed_pd(int n, int m) {
  require(n >= 2 && n % 2 == 0, "seed_pd: n must be even and positive");
  require(std::gcd(n + 1, m) == 1, "seed_pd: n + 1 and m must be coprime");
  Seed s{{"PD", n, m, 2.0, Symmetry::palindromic}, {}};
  const double unit = two_pi * m / (n + 1);
  for (int k = 1; k <= n / 2; ++k) {
    s.half.push_back(wrap_angle(unit * k));
    s.half.push_back(wrap_angle(-unit * k));
  }
  return s;
}

/// Integer matrix D_{jk} = sum_r C(k-1, j-r-1) C(k+r-1, r), j, k = 1..n.
inline std::vector<std::vector<boost::multiprecision::cpp_int>> d_matrix(int n) {
  using boost::multiprecision::cpp_int;
  auto binom = [](int top, int k) -> cpp_int {
    if (k < 0 || top < 0 || k > top) return 0;
    cpp_int r = 1;
    for (int i = 0; i < k; ++i) r = r * (top - i) / (i + 1);
    return r;
  };
  std::vector<std::vector<cpp_int>> d(n, std::vector<cpp_int>(n));
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k)
      for (int r = 0; r <= j; ++r) d[j - 1][k - 1] += binom(k - 1, j - r - 1) * binom(k + r - 1, r);
  return d;
}

/// Fraction-free Gaussian elimination; exact for integer matrices.
inline boost::multiprecision::cpp_int bareiss_determinant(std::vector<std::vector<boost::multiprecision::cpp_int>> a) {
  using boost::multiprecision::cpp_int;
  const std::size_t n = a.size();
  if (n == 0) return 1;
  cpp_int sign = 1, previous = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous;
    previous = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

struct PathRecord {
  double gamma = 0;
  std::vector<double> half;
  double det_j = 0;
  double residual = 0;  // full unsymmetrized system
  double step = 0;
};

enum class PathStatus { reached_target, singular, step_underflow };

inline const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::reached_target: return "reached_target";
    case PathStatus::singular: return "singular";
    default: return "step_underflow";
  }
}

struct ContinuationPath {
  SeedDescriptor seed;
  std::vector<PathRecord> records;
  PathStatus status = PathStatus::reached_target;

  double gamma_begin() const { return records.front().gamma; }
  double gamma_end() const { return records.back().gamma; }
  double gamma_min() const { return std::min(gamma_begin(), gamma_end()); }
  double gamma_max() const { return std::max(gamma_begin(), gamma_end()); }
  double min_abs_det() const {
    double m = INFINITY;
    for (const auto& r : records) m = std::min(m, std::abs(r.det_j));
    return m;
  }
  double max_residual() const {
    double m = 0;
    for (const auto& r : records) m = std::max(m, r.residual);
    return m;
  }
};

struct ContinuationOptions {
  double initial_step = 1e-2;
  double max_step = 5e-2;
  double min_step = 1e-8;
  double corrector_tolerance = 1e-12;
  double accept_residual = 1e-10;
  int corrector_iterations = 12;
  double max_displacement = 0.25;
  double singular_scale = 1e-8;
};

/// |det J| below which a path is declared singular, relative to the seed.
inline double singular_threshold(double seed_det, const ContinuationOptions& opt = {}) {
  return opt.singular_scale * std::abs(seed_det);
}

namespace detail {

struct Corrected {
  std::vector<double> half;
  double residual;
  bool ok;
};

inline Corrected correct(const ConstraintSpec& spec, std::vector<double> h, const ContinuationOptions& opt) {
  const std::vector<double> start = h;
  auto r = symmetric_residual(spec, h);
  double norm = norm2(r);
  for (int it = 0; it < opt.corrector_iterations && norm > opt.corrector_tolerance; ++it) {
    const Eigen::MatrixXd jac = jacobian(spec, h);
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
    const Eigen::VectorXd step = jac.partialPivLu().solve(-rv);
    if (!step.allFinite()) return {h, norm, false};
    std::vector<double> trial(h);
    for (std::size_t k = 0; k < h.size(); ++k) trial[k] += step[static_cast<Eigen::Index>(k)];
    auto rt = symmetric_residual(spec, trial);
    const double nt = norm2(rt);
    if (!(nt < norm)) break;
    h = std::move(trial);
    r = std::move(rt);
    norm = nt;
  }
  double displacement = 0;
  for (std::size_t k = 0; k < h.size(); ++k) displacement = std::max(displacement, std::abs(h[k] - start[k]));
  return {h, norm, norm < opt.accept_residual && displacement < opt.max_displacement};
}

inline PathRecord make_record(const ConstraintSpec& spec, const std::vector<double>& h, double step) {
  PathRecord rec;
  rec.gamma = spec.gamma;
  rec.half = h;
  rec.det_j = jacobian(spec, h).determinant();
  rec.residual = full_residual_norm(spec.order, spec.gamma, expand_symmetry(h, spec.symmetry));
  rec.step = step;
  return rec;
}

}  // namespace detail

/// Tangent predictor, Newton corrector, adaptive step in gamma. Stops at the
/// target or where the Jacobian becomes singular.
inline ContinuationPath continue_path(const Seed& seed, double gamma_target, const ContinuationOptions& opt = {}) {
  const int n = seed.descriptor.order;
  require(static_cast<int>(seed.half.size()) == n, "continue_path: seed has wrong length");
  ConstraintSpec spec = ConstraintSpec::symmetric(n, seed.descriptor.gamma0, seed.descriptor.symmetry);
  ContinuationPath path;
  path.seed = seed.descriptor;
  PathRecord first = detail::make_record(spec, seed.half, 0.0);
  require(first.residual < 1e-9, "continue_path: seed residual too large");
  require(std::isfinite(first.det_j) && std::abs(first.det_j) > 1e-12, "continue_path: singular seed Jacobian");
  const double threshold = singular_threshold(first.det_j, opt);
  path.records.push_back(first);

  const double direction = gamma_target >= spec.gamma ? 1.0 : -1.0;
  double step = opt.initial_step;
  int successes = 0;
  std::vector<double> h = seed.half;
  while (direction * (gamma_target - spec.gamma) > 1e-14) {
    const double dg = direction * std::min(step, std::abs(gamma_target - spec.gamma));
    // Tangent: J dh/dgamma = -dF/dgamma.
    const Eigen::MatrixXd jac = jacobian(spec, h);
    const Eigen::VectorXd tangent = jac.partialPivLu().solve(-residual_gamma_derivative(spec));
    ConstraintSpec next = spec;
    next.gamma = spec.gamma + dg;
    std::vector<double> guess(h);
    for (std::size_t k = 0; k < h.size(); ++k) guess[k] += dg * tangent[static_cast<Eigen::Index>(k)];
    auto corrected = detail::correct(next, guess, opt);
    bool ok = corrected.ok && tangent.allFinite();
    PathRecord rec;
    if (ok) {
      rec = detail::make_record(next, corrected.half, std::abs(dg));
      ok = rec.residual < 1e-9;
    }
    if (ok && std::abs(rec.det_j) < threshold) {
      path.status = PathStatus::singular;
      return path;
    }
    if (!ok) {
      step /= 2;
      successes = 0;
      if (step < opt.min_step) {
        path.status = PathStatus::step_underflow;
        return path;
      }
      continue;
    }
    h = corrected.half;
    spec = next;
    path.records.push_back(std::move(rec));
    if (++successes >= 3) {
      step = std::min(opt.max_step, 2 * step);
      successes = 0;
    }
  }
  path.status = PathStatus::reached_target;
  return path;
}

/// Newton polish of an AP/PD half list at gamma, at most 50 iterations.
inline std::vector<double> polish_symmetric(int n, double gamma, Symmetry tag, std::vector<double> half) {
  const auto result = gauss_newton(symmetric_system(ConstraintSpec::symmetric(n, gamma, tag)), std::move(half),
                                   {50, 1e-13, 0.5, 20});
  if (!(result.residual_norm < 1e-10)) throw convergence_error("Newton polish did not converge");
  return result.x;
}

/// Order n + 1 ToP half list at gamma = 1 from the order n one: append pi/2
/// and polish.
inline std::vector<double> bootstrap_top(const std::vector<double>& top_n) {
  const int n = static_cast<int>(top_n.size());
  std::vector<double> guess(top_n);
  guess.push_back(pi / 2);
  return polish_symmetric(n + 1, 1.0, Symmetry::antipalindromic, std::move(guess));
}

/// ToP half list at gamma = 1 by bootstrapping up from order 1.
inline std::vector<double> top_at_gamma_one(int n) {
  require(n >= 1, "top_at_gamma_one: n must be positive");
  std::vector<double> h{2 * pi / 3};
  for (int k = 1; k < n; ++k) h = bootstrap_top(h);
  return h;
}

/// Union of gamma intervals covered by a set of paths.
struct Coverage {
  std::vector<std::pair<double, double>> intervals;

  void add(double lo, double hi) {
    intervals.emplace_back(lo, hi);
    std::sort(intervals.begin(), intervals.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : intervals) {
      if (!merged.empty() && iv.first <= merged.back().second + 1e-12)
        merged.back().second = std::max(merged.back().second, iv.second);
      else
        merged.push_back(iv);
    }
    intervals = std::move(merged);
  }

  bool covers(double lo, double hi) const {
    for (const auto& iv : intervals)
      if (iv.first <= lo + 1e-12 && iv.second >= hi - 1e-12) return true;
    return false;
  }
};

/// Paths from one seed toward both ends of [lo, hi].
inline std::vector<ContinuationPath> continue_both(const Seed& seed, double lo, double hi,
                                                   const ContinuationOptions& opt = {}) {
  std::vector<ContinuationPath> out;
  if (hi > seed.descriptor.gamma0) out.push_back(continue_path(seed, hi, opt));
  if (lo < seed.descriptor.gamma0) out.push_back(continue_path(seed, lo, opt));
  if (out.empty()) out.push_back(continue_path(seed, seed.descriptor.gamma0, opt));
  return out;
}

struct CoverageReport {
  int order = 0;
  std::vector<ContinuationPath> paths;
  Coverage coverage;
  bool used_bootstrap = false;
  double max_residual = 0;
};

/// ToP paths from gamma = 0 and gamma = 2, then from the gamma = 1 bootstrap
/// seed when those leave a gap (or when forced).
inline CoverageReport cover_top(int n, double lo, double hi, bool force_bootstrap = false,
                                const ContinuationOptions& opt = {}) {
  CoverageReport report;
  report.order = n;
  std::vector<Seed> seeds{seed_top(n, 0)};
  if (n >= 2) seeds.push_back(seed_top(n, 1));
  auto run = [&](const Seed& s) {
    for (auto& p : continue_both(s, lo, hi, opt)) {
      report.coverage.add(p.gamma_min(), p.gamma_max());
      report.max_residual = std::max(report.max_residual, p.max_residual());
      report.paths.push_back(std::move(p));
    }
  };
  for (const auto& s : seeds) run(s);
  if (force_bootstrap || !report.coverage.covers(lo, hi)) {
    report.used_bootstrap = true;
    run({{"bootstrap", n, 0, 1.0, Symmetry::antipalindromic}, top_at_gamma_one(n)});
  }
  return report;
}

/// PD_{n,m} paths from gamma = 2 in both directions.
inline CoverageReport cover_pd(int n, int m, double lo, double hi, const ContinuationOptions& opt = {}) {
  CoverageReport report;
  report.order = n;
  for (auto& p : continue_both(seed_pd(n, m), lo, hi, opt)) {
    report.coverage.add(p.gamma_min(), p.gamma_max());
    report.max_residual = std::max(report.max_residual, p.max_residual());
    report.paths.push_back(std::move(p));
  }
  return report;
}

/// One JSON object per accepted record.
inline std::string to_json_lines(const ContinuationPath& path) {
  std::ostringstream os;
  for (const auto& r : path.records) {
    nlohmann::json j;
    j["gamma"] = r.gamma;
    j["phases"] = expand_symmetry(r.half, path.seed.symmetry);
    j["detJ"] = r.det_j;
    j["residual"] = r.residual;
    os << j.dump() << "\n";
  }
  return os.str();
}

}  // namespace compulse

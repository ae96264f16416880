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

// Error curves, Monte Carlo noise sweeps and reference sequences.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "compulse/common.hpp"
#include "compulse/continuation.hpp"
#include "compulse/phase_algebra.hpp"
#include "compulse/su2.hpp"
#include "compulse/transforms.hpp"
#include "json.hpp"

namespace compulse {

enum class Metric { trace_distance, infidelity, transition_probability };

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::trace_distance:
      return "trace-distance";
    case Metric::infidelity:
      return "infidelity";
    case Metric::transition_probability:
      return "transition-probability";
  }
  return "?";
}

inline Metric metric_from_string(const std::string& s) {
  if (s == "trace-distance") return Metric::trace_distance;
  if (s == "infidelity") return Metric::infidelity;
  if (s == "transition-probability") return Metric::transition_probability;
  throw contract_error("unknown metric '" + s + "'");
}

struct CurvePoint {
  double eps = 0;
  double value = 0;
};

struct ErrorCurve {
  Metric metric = Metric::trace_distance;
  std::vector<CurvePoint> points;
  std::string label;
  double theta_T = pi;
  int order = 0;  // 0 when not applicable
  std::optional<double> gamma;
};

struct NoiseModel {
  double sigma_amplitude = 0;
  double sigma_phase = 0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;

  void validate() const {
    require(sigma_amplitude >= 0 && sigma_phase >= 0, "noise sigmas must be non-negative");
    require(trials >= 1, "noise model needs at least one trial");
  }
};

/// n points spaced evenly in log between lo and hi.
inline std::vector<double> log_grid(double lo, double hi, int n) {
  require(lo > 0 && hi > lo && n >= 2, "log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
  return out;
}

namespace detail {

inline void check_grid(const std::vector<double>& grid) {
  require(!grid.empty(), "eps grid is empty");
  for (std::size_t k = 1; k < grid.size(); ++k) require(grid[k] > grid[k - 1], "eps grid must increase");
}

inline double evaluate_metric(Metric metric, const Unitary2& u, const Unitary2& target) {
  switch (metric) {
    case Metric::trace_distance:
      return trace_distance(u, target);
    case Metric::infidelity:
      return std::max(0.0, infidelity(u, target));
    case Metric::transition_probability:
      return transition_probability(u);
  }
  return 0;
}

inline ErrorCurve curve_header(const PulseSequence& seq, double theta_T, Metric metric) {
  ErrorCurve c;
  c.metric = metric;
  c.label = seq.label;
  c.theta_T = theta_T;
  c.gamma = seq.gamma;
  if (seq.symmetry != Symmetry::none && seq.length() % 2 == 0) c.order = static_cast<int>(seq.length() / 2);
  return c;
}

}  // namespace detail

/// Metric of corrected_rotation(seq, theta_T, eps) on each grid point.
inline ErrorCurve error_curve(const PulseSequence& seq, double theta_T, const std::vector<double>& grid,
                              Metric metric = Metric::trace_distance) {
  seq.validate();
  detail::check_grid(grid);
  const Unitary2 target = aligned_target(seq, theta_T);
  ErrorCurve c = detail::curve_header(seq, theta_T, metric);
  for (double eps : grid)
    c.points.push_back({eps, detail::evaluate_metric(metric, corrected_rotation(seq, theta_T, eps), target)});
  return c;
}

/// |<1|U|0>|^2 of the bare product, for inverting sequences that already
/// carry their zeroth pulse.
inline ErrorCurve transition_curve(const PulseSequence& seq, const std::vector<double>& grid) {
  seq.validate();
  detail::check_grid(grid);
  ErrorCurve c = detail::curve_header(seq, seq.theta0, Metric::transition_probability);
  for (double eps : grid) c.points.push_back({eps, transition_probability(compose(seq, eps))});
  return c;
}

/// Mean metric over trials. Each trial draws one amplitude and one phase
/// offset per pulse (the trailing M_0 included) and keeps them across the
/// grid. Trial t uses a generator seeded from (seed, t).
inline ErrorCurve noise_mc(const PulseSequence& seq, double theta_T, const std::vector<double>& grid,
                           const NoiseModel& noise, Metric metric = Metric::trace_distance) {
  seq.validate();
  noise.validate();
  detail::check_grid(grid);
  const Unitary2 target = aligned_target(seq, theta_T);
  const std::size_t pulses = seq.length() + 1;
  std::vector<double> sums(grid.size(), 0.0);
  std::vector<double> da(pulses), dp(pulses);
  for (std::size_t t = 0; t < noise.trials; ++t) {
    std::seed_seq sq{static_cast<std::uint32_t>(noise.seed), static_cast<std::uint32_t>(noise.seed >> 32),
                     static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    std::mt19937_64 rng(sq);
    std::normal_distribution<double> normal;
    for (std::size_t k = 0; k < pulses; ++k) {
      da[k] = normal(rng) * noise.sigma_amplitude;
      dp[k] = normal(rng) * noise.sigma_phase;
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      Unitary2 u = Unitary2::identity();
      for (std::size_t k = 0; k < seq.length(); ++k)
        u = u * faulty_pulse(seq.phases[k] + dp[k], seq.theta0, grid[g] + da[k]);
      u = u * faulty_pulse(dp.back(), theta_T, grid[g] + da.back());
      sums[g] += detail::evaluate_metric(metric, u, target);
    }
  }
  ErrorCurve c = detail::curve_header(seq, theta_T, metric);
  for (std::size_t g = 0; g < grid.size(); ++g)
    c.points.push_back({grid[g], sums[g] / static_cast<double>(noise.trials)});
  return c;
}

struct SlopeFit {
  double slope = 0;
  double intercept = 0;  // natural log
  std::size_t used = 0;
};

/// Least squares of ln(value) on ln(eps) over [lo, hi], skipping values
/// below 1e-13.
inline SlopeFit fit_slope(const ErrorCurve& curve, double lo = 0, double hi = 1e300) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& p : curve.points) {
    if (p.eps < lo || p.eps > hi || p.eps <= 0 || !(p.value >= 1e-13)) continue;
    const double x = std::log(p.eps), y = std::log(p.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  require(m >= 2, "fit_slope: fewer than two usable points");
  const double dm = static_cast<double>(m);
  SlopeFit f;
  f.slope = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / dm;
  f.used = m;
  return f;
}

/// Width of the interval around eps = 0 on which the bare-product transition
/// probability stays at or above threshold.
inline double inversion_width(const PulseSequence& seq, double threshold, double eps_max = 1.0,
                              double resolution = 1e-4) {
  auto p = [&](double e) { return transition_probability(compose(seq, e)); };
  require(p(0.0) >= threshold, "inversion_width: sequence does not invert at eps = 0");
  auto edge = [&](double dir) {
    double inside = 0, e = resolution;
    while (e <= eps_max && p(dir * e) >= threshold) {
      inside = e;
      e += resolution;
    }
    if (e > eps_max) return eps_max;
    double outside = e;
    for (int k = 0; k < 50; ++k) {
      const double mid = 0.5 * (inside + outside);
      (p(dir * mid) >= threshold ? inside : outside) = mid;
    }
    return inside;
  };
  return edge(1.0) + edge(-1.0);
}

struct LibraryEntry {
  PulseSequence sequence;  // theta0 = pi, zeroth pulse included
  bool class_a = false;
};

/// PD_{n,n/2} half list continued from gamma = 2 to gamma = 1.
inline std::vector<double> pd_at_gamma_one(int n) {
  const auto path = continue_path(seed_pd(n, n / 2), 1.0);
  require(path.status == PathStatus::reached_target, "pd_at_gamma_one: continuation did not reach gamma = 1");
  return path.records.back().half;
}

/// Toggled PDn at gamma = 1 followed by its M_0 pulse, length 2n + 1.
inline PulseSequence bb_sequence(int n, const std::vector<double>& pd_half) {
  PulseSequence pd = make_symmetric_sequence(pd_half, Symmetry::palindromic, 1.0);
  PulseSequence out;
  out.theta0 = pi;
  out.phases = toggle(pd.phases);
  out.phases.push_back(0.0);
  out.label = "BB" + std::to_string(n);
  return out;
}

inline PulseSequence bb_sequence(int n) { return bb_sequence(n, pd_at_gamma_one(n)); }

inline LibraryEntry scaled_entry(std::string label, double unit, std::initializer_list<int> multipliers) {
  LibraryEntry e;
  e.sequence.theta0 = pi;
  e.sequence.label = std::move(label);
  for (int m : multipliers) e.sequence.phases.push_back(wrap_angle(unit * m));
  return e;
}

inline LibraryEntry toggled_vitanov(int n) {
  LibraryEntry e;
  e.sequence = vitanov(n);
  e.sequence.phases = toggle(e.sequence.phases);
  return e;
}

/// Inverting pi-pulse sequences of length 9 and 25, and BB4, BB12.
inline std::vector<LibraryEntry> literature_library() {
  std::vector<LibraryEntry> lib;
  lib.push_back(scaled_entry("Delta2", pi / 6, {0, 3, 0, 4, 7, 4, 0, 3, 0}));
  lib.push_back(scaled_entry("C9", pi / 12, {0, 1, 12, 11, 18, 11, 12, 1, 0}));
  lib.push_back(scaled_entry("S2", pi / 3, {0, 0, 2, 1, 2, 0, 0, 2, 1, 2, 2, 2, 4, 3, 4, 1, 1, 3, 2, 3, 2, 2, 4, 3, 4}));
  lib.push_back(toggled_vitanov(8));
  lib.push_back(toggled_vitanov(24));
  lib.push_back({bb_sequence(4), true});
  lib.push_back({bb_sequence(12), true});
  return lib;
}

/// |f - Phi| at order n + 1 for ToPn at gamma = 1, n = 1..n_max.
inline std::vector<std::pair<int, double>> leading_error_trend(int n_max) {
  require(n_max >= 1, "leading_error_trend: n_max must be positive");
  std::vector<std::pair<int, double>> out;
  std::vector<double> h{2 * pi / 3};
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) h = bootstrap_top(h);
    out.emplace_back(n, leading_error(n, 1.0, expand_symmetry(h, Symmetry::antipalindromic)));
  }
  return out;
}

inline std::string to_csv(const ErrorCurve& curve) {
  std::ostringstream os;
  os.precision(12);
  os << "epsilon,value,label,metric,n,gamma\n";
  for (const auto& p : curve.points) {
    os << p.eps << ',' << p.value << ',' << curve.label << ',' << to_string(curve.metric) << ',' << curve.order
       << ',';
    if (curve.gamma) os << *curve.gamma;
    os << '\n';
  }
  return os.str();
}

inline std::string to_json_lines(const ErrorCurve& curve) {
  std::ostringstream os;
  for (const auto& p : curve.points) {
    nlohmann::json j;
    j["epsilon"] = p.eps;
    j["value"] = p.value;
    j["label"] = curve.label;
    j["metric"] = to_string(curve.metric);
    j["n"] = curve.order;
    if (curve.gamma) j["gamma"] = *curve.gamma;
    os << j.dump() << '\n';
  }
  return os.str();
}

/// Writes <dir>/<label>_<metric>.csv and returns the path.
inline std::filesystem::path write_csv(const ErrorCurve& curve, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto file = dir / (curve.label + "_" + to_string(curve.metric) + ".csv");
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << to_csv(curve);
  return file;
}

}  // namespace compulse

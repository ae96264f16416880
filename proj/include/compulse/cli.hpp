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

// The compulse command line: solve, continue, search, verify, groebner, bench.
//
// Exit codes: 0 success, 1 computation failure, 2 no solution (or a failed
// verification), 3 invalid input, 64 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "compulse/bench.hpp"
#include "compulse/closed_form.hpp"
#include "compulse/continuation.hpp"
#include "compulse/groebner.hpp"
#include "compulse/io.hpp"
#include "compulse/root_search.hpp"
#include "compulse/transforms.hpp"
#include "json.hpp"

namespace compulse::cli {

enum ExitCode { ok = 0, failure = 1, no_solution = 2, invalid = 3, usage = 64 };

inline constexpr const char* output_dir_variable = "COMPULSE_OUTPUT_DIR";

/// Default directory for bench files.
inline std::filesystem::path default_output_dir() {
  const char* v = std::getenv(output_dir_variable);
  return (v && *v) ? std::filesystem::path(v) : std::filesystem::path(".");
}

struct JobConfig {
  std::string family;
  std::string symmetry = "AP";
  std::string gamma = "1";
  std::string target;
  std::string theta0 = "2pi";
  std::string t4;
  std::string phases;
  std::string input;
  std::string seed_kind = "top";
  std::string kind = "slopes";
  std::string format = "json";
  std::string out;
  std::string out_dir;
  int n = 0;
  int b = 0;
  int m = 1;
  std::size_t starts = 0;
  std::uint64_t rng_seed = 1;
  double tolerance = 1e-4;
  bool check_slope = false;
  std::size_t max_pairs = 20000;
  double sigma = 1e-6;
  std::size_t trials = 200;
};

namespace detail {

inline void emit(const JobConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw std::runtime_error("cannot write " + cfg.out);
  f << text;
}

inline std::string records_csv(const std::vector<SequenceRecord>& rs) {
  std::ostringstream os;
  os.precision(12);
  os << "n,L,theta0,gamma,symmetry,kappa,residual_norm,provenance,phases\n";
  for (const auto& r : rs) {
    os << r.n << ',' << r.length() << ',' << r.theta0 << ',';
    if (r.gamma) os << *r.gamma;
    os << ',' << to_string(r.symmetry) << ',';
    if (r.kappa) os << *r.kappa;
    os << ',' << r.residual_norm << ',' << r.provenance << ',';
    for (std::size_t k = 0; k < r.phases.size(); ++k) os << (k ? ";" : "") << r.phases[k];
    os << '\n';
  }
  return os.str();
}

inline std::string records_json(const std::vector<SequenceRecord>& rs) {
  nlohmann::json j;
  j["solutions"] = nlohmann::json::array();
  for (const auto& r : rs) j["solutions"].push_back(to_json(r));
  return j.dump(2) + "\n";
}

inline int run_solve(const JobConfig& cfg, std::ostream& out) {
  const auto family = closed_form_family_from_string(cfg.family);
  const double gamma = parse_real(cfg.gamma);
  std::optional<double> t4;
  if (!cfg.t4.empty()) t4 = parse_angle(cfg.t4);
  const auto chain = regular_chain(family);
  std::vector<SequenceRecord> rs;
  for (const auto& seq : solve_closed_form(family, gamma, t4))
    rs.push_back(make_record(chain.order, seq, "closed_form:" + seq.label));
  emit(cfg, cfg.format == "csv" ? records_csv(rs) : records_json(rs), out);
  return rs.empty() ? no_solution : ok;
}

inline int run_continue(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  require(cfg.n >= 1, "continue: --n is required");
  require(cfg.seed_kind == "pd" || cfg.seed_kind == "top", "continue: --seed must be top or pd");
  const Seed seed = cfg.seed_kind == "pd" ? seed_pd(cfg.n, cfg.m) : seed_top(cfg.n, cfg.b);
  const double target = cfg.target.empty() ? 1.0 : parse_real(cfg.target);
  const auto path = continue_path(seed, target);
  emit(cfg, to_json_lines(path), out);
  err << "status " << to_string(path.status) << ", reached gamma " << path.gamma_end() << ", "
      << path.records.size() << " records, max residual " << path.max_residual() << "\n";
  return path.status == PathStatus::reached_target ? ok : no_solution;
}

inline int run_search(const JobConfig& cfg, std::ostream& out) {
  require(cfg.n >= 1, "search: --n is required");
  const auto tag = symmetry_from_string(cfg.symmetry);
  const auto spec = ConstraintSpec::symmetric(cfg.n, parse_real(cfg.gamma), tag);
  const std::size_t starts = cfg.starts ? cfg.starts : default_start_count(cfg.n);
  const auto set = multistart_search(spec, starts, cfg.rng_seed);
  if (cfg.format == "csv") {
    std::vector<SequenceRecord> rs;
    for (const auto& j : to_json(set)["solutions"]) rs.push_back(record_from_json(j));
    emit(cfg, records_csv(rs), out);
  } else {
    emit(cfg, to_json(set).dump(2) + "\n", out);
  }
  return set.solutions.empty() ? no_solution : ok;
}

inline std::vector<SequenceRecord> verify_inputs(const JobConfig& cfg, std::istream& in) {
  std::vector<SequenceRecord> rs;
  if (!cfg.phases.empty()) {
    require(cfg.n >= 1, "verify: --n is required with --phases");
    SequenceRecord r;
    r.n = cfg.n;
    r.theta0 = parse_angle(cfg.theta0);
    r.gamma = parse_real(cfg.gamma);
    r.phases = parse_angle_list(cfg.phases);
    r.provenance = "cli";
    rs.push_back(std::move(r));
    return rs;
  }
  require(!cfg.input.empty(), "verify: give --phases or --input");
  std::string text;
  if (cfg.input == "-") {
    text.assign(std::istreambuf_iterator<char>(in), {});
  } else {
    std::ifstream f(cfg.input);
    require(static_cast<bool>(f), "verify: cannot read " + cfg.input);
    text.assign(std::istreambuf_iterator<char>(f), {});
  }
  const auto j = nlohmann::json::parse(text, nullptr, false);
  require(!j.is_discarded(), "verify: input is not valid JSON");
  if (j.is_object() && j.contains("solutions")) {
    for (const auto& s : j["solutions"]) rs.push_back(record_from_json(s));
  } else if (j.is_array()) {
    for (const auto& s : j) rs.push_back(record_from_json(s));
  } else {
    rs.push_back(record_from_json(j));
  }
  require(!rs.empty(), "verify: no sequences in input");
  return rs;
}

inline int run_verify(const JobConfig& cfg, std::istream& in, std::ostream& out) {
  const auto inputs = verify_inputs(cfg, in);
  nlohmann::json results = nlohmann::json::array();
  bool all = true;
  for (const auto& input : inputs) {
    require(input.gamma.has_value(), "verify: each sequence needs a gamma");
    auto seq = input.sequence();
    seq.symmetry = Symmetry::none;
    auto rec = make_record(input.n, seq, input.provenance);
    rec.symmetry = input.symmetry;
    const double theta_T = *seq.gamma * seq.theta0;
    const auto curve = error_curve(seq, theta_T, log_grid(1e-3, 1e-2, 6));
    std::optional<double> slope;
    try {
      slope = fit_slope(curve).slope;
    } catch (const contract_error&) {
    }
    bool passed = rec.residual_norm < cfg.tolerance;
    if (cfg.check_slope) passed = passed && slope && *slope >= input.n + 1 - 0.1;
    all = all && passed;
    auto j = to_json(rec);
    j["slope"] = slope ? nlohmann::json(round12(*slope)) : nlohmann::json(nullptr);
    j["passed"] = passed;
    results.push_back(j);
  }
  nlohmann::json doc;
  doc["results"] = results;
  doc["tolerance"] = cfg.tolerance;
  emit(cfg, doc.dump(2) + "\n", out);
  return all ? ok : no_solution;
}

inline nlohmann::json strings(const PolySystem& s) {
  auto a = nlohmann::json::array();
  for (const auto& p : s.polys) a.push_back(to_string(p));
  return a;
}

inline int run_groebner(const JobConfig& cfg, std::ostream& out) {
  require(cfg.n >= 1, "groebner: --n is required");
  const auto tag = symmetry_from_string(cfg.symmetry);
  const auto spec = ConstraintSpec::symmetric(cfg.n, 1.0, tag);
  const auto w = weierstrass_system(spec);
  BuchbergerOptions opt;
  opt.max_pairs = cfg.max_pairs;
  const auto g = buchberger(w, opt);
  const auto r = reduce_basis(g);
  const auto q = saturate(r, w.spurious, opt);
  nlohmann::json j;
  auto vars = nlohmann::json::array();
  for (int k = 1; k <= w.variables; ++k) vars.push_back("t" + std::to_string(k));
  j["system"] = std::string(to_string(tag)) + std::to_string(cfg.n);
  j["variables"] = vars;
  j["input"] = strings(w);
  PolySystem spurious{w.variables, w.spurious, {}};
  j["spurious"] = strings(spurious);
  j["groebner"] = strings(g);
  j["reduced"] = strings(r);
  j["saturated"] = strings(q);
  bool found = true;
  if (!cfg.target.empty()) {
    const double gamma = parse_real(cfg.target);
    auto roots = nlohmann::json::array();
    for (const auto& t : real_roots_triangular(q, gamma)) {
      std::vector<double> half;
      for (double v : t) half.push_back(2 * std::atan(v));
      auto full = expand_symmetry(half, tag);
      for (double& p : full) p = round12(p);
      roots.push_back(full);
    }
    found = !roots.empty();
    j["gamma"] = gamma;
    j["phases"] = roots;
  }
  emit(cfg, j.dump(2) + "\n", out);
  return found ? ok : no_solution;
}

inline std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / (n - 1);
  return g;
}

inline int run_bench(const JobConfig& cfg, std::ostream& out) {
  const auto dir = cfg.out_dir.empty() ? default_output_dir() : std::filesystem::path(cfg.out_dir);
  nlohmann::json summary;
  summary["kind"] = cfg.kind;
  auto files = nlohmann::json::array();
  if (cfg.kind == "slopes") {
    const auto grid = log_grid(1e-3, 1e-2, 11);
    const auto wide = log_grid(1e-4, 1e-1, 31);
    auto fits = nlohmann::json::array();
    std::vector<std::pair<PulseSequence, int>> seqs;
    for (int n = 1; n <= 4; ++n) {
      const auto path = continue_path(seed_top(n, 0), 0.5);
      require(path.status == PathStatus::reached_target, "bench: ToP path did not reach gamma = 1/2");
      seqs.emplace_back(make_symmetric_sequence(path.records.back().half, Symmetry::antipalindromic, 0.5,
                                                "ToP" + std::to_string(n)),
                        n);
    }
    for (int n : {2, 4}) {
      auto bb = toggle(make_symmetric_sequence(pd_at_gamma_one(n), Symmetry::palindromic, 1.0));
      bb.label = "BB" + std::to_string(n);
      seqs.emplace_back(bb, n);
    }
    for (const auto& [seq, n] : seqs) {
      auto curve = error_curve(seq, pi, wide);
      curve.order = n;
      files.push_back(write_csv(curve, dir).string());
      auto fit_curve = error_curve(seq, pi, grid);
      fits.push_back({{"label", seq.label}, {"n", n}, {"slope", round12(fit_slope(fit_curve).slope)}});
    }
    summary["fits"] = fits;
  } else if (cfg.kind == "noise") {
    auto bb = toggle(make_symmetric_sequence(pd_at_gamma_one(4), Symmetry::palindromic, 1.0));
    const auto grid = log_grid(1e-5, 1e-1, 17);
    auto floors = nlohmann::json::array();
    NoiseModel noise{cfg.sigma, cfg.sigma, cfg.trials, cfg.rng_seed};
    bb.label = "BB4_noise";
    auto curve = noise_mc(bb, pi, grid, noise);
    curve.order = 4;
    files.push_back(write_csv(curve, dir).string());
    floors.push_back({{"sigma", cfg.sigma}, {"floor", curve.points.front().value}});
    summary["floors"] = floors;
  } else if (cfg.kind == "fig4") {
    const auto grid = linear_grid(-1.0, 1.0, 201);
    auto entries = nlohmann::json::array();
    for (const auto& e : literature_library()) {
      files.push_back(write_csv(transition_curve(e.sequence, grid), dir).string());
      entries.push_back({{"label", e.sequence.label},
                         {"L", e.sequence.length()},
                         {"class_a", e.class_a},
                         {"p_at_0.2", round12(transition_probability(compose(e.sequence, 0.2)))},
                         {"width_1e-4", round12(inversion_width(e.sequence, 1 - 1e-4))}});
    }
    summary["sequences"] = entries;
  } else if (cfg.kind == "trend") {
    std::filesystem::create_directories(dir);
    const auto file = dir / "ToP_leading_error.csv";
    std::ofstream f(file);
    f.precision(12);
    f << "n,leading_error\n";
    auto trend = nlohmann::json::array();
    for (const auto& [n, v] : leading_error_trend(cfg.n ? cfg.n : 12)) {
      f << n << ',' << v << '\n';
      trend.push_back({{"n", n}, {"leading_error", round12(v)}});
    }
    files.push_back(file.string());
    summary["trend"] = trend;
  } else {
    throw contract_error("bench: --kind must be slopes, noise, fig4 or trend");
  }
  summary["files"] = files;
  emit(cfg, summary.dump(2) + "\n", out);
  return ok;
}

}  // namespace detail

/// Runs one job. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Composite pulse sequences for amplitude errors", "compulse"};
  app.require_subcommand(1);
  JobConfig cfg;

  auto* solve = app.add_subcommand("solve", "closed-form solutions");
  solve->add_option("--family", cfg.family, "AP1, AP2, PD2, NS2, AP3 or PD4")->required();
  solve->add_option("--gamma", cfg.gamma, "target ratio theta_T / theta0");
  solve->add_option("--t4", cfg.t4, "fixed fourth phase for NS2");

  auto* cont = app.add_subcommand("continue", "follow a seed in gamma, JSON lines out");
  cont->add_option("--seed", cfg.seed_kind, "top or pd");
  cont->add_option("--n", cfg.n, "order")->required();
  cont->add_option("--b", cfg.b, "ToP seed parameter");
  cont->add_option("--m", cfg.m, "PD seed parameter");
  cont->add_option("--target", cfg.target, "gamma to reach");

  auto* search = app.add_subcommand("search", "multistart AP/PD enumeration");
  search->add_option("--n", cfg.n, "order")->required();
  search->add_option("--gamma", cfg.gamma, "target ratio");
  search->add_option("--symmetry", cfg.symmetry, "AP or PD");
  search->add_option("--starts", cfg.starts, "start count (default 1000 * 2^n)");
  search->add_option("--seed", cfg.rng_seed, "rng seed");

  auto* verify = app.add_subcommand("verify", "residual and slope of a phase list");
  verify->add_option("--n", cfg.n, "order");
  verify->add_option("--theta0", cfg.theta0, "2pi or pi");
  verify->add_option("--gamma", cfg.gamma, "target ratio");
  verify->add_option("--phases", cfg.phases, "comma-separated angles");
  verify->add_option("--input", cfg.input, "JSON file, - for stdin");
  verify->add_option("--tol", cfg.tolerance, "residual tolerance");
  verify->add_flag("--check-slope", cfg.check_slope, "also require slope >= n + 0.9");

  auto* groebner = app.add_subcommand("groebner", "Weierstrass system, basis and saturation");
  groebner->add_option("--n", cfg.n, "order, at most 4")->required();
  groebner->add_option("--symmetry", cfg.symmetry, "AP or PD");
  groebner->add_option("--gamma", cfg.target, "evaluate real roots at this gamma");
  groebner->add_option("--max-pairs", cfg.max_pairs, "S-pair budget");

  auto* bench = app.add_subcommand("bench", "error curves as CSV");
  bench->add_option("--kind", cfg.kind, "slopes, noise, fig4 or trend");
  bench->add_option("--out-dir", cfg.out_dir, std::string("output directory (default $") + output_dir_variable + ")");
  bench->add_option("--sigma", cfg.sigma, "noise sigma");
  bench->add_option("--trials", cfg.trials, "Monte Carlo trials");
  bench->add_option("--seed", cfg.rng_seed, "rng seed");
  bench->add_option("--n", cfg.n, "largest order for trend");

  for (auto* sub : {solve, search, verify, groebner, bench, cont}) {
    sub->add_option("--out", cfg.out, "write to file instead of stdout");
    if (sub != bench && sub != cont && sub != groebner)
      sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return usage;
  }

  try {
    if (solve->parsed()) return detail::run_solve(cfg, out);
    if (cont->parsed()) return detail::run_continue(cfg, out, err);
    if (search->parsed()) return detail::run_search(cfg, out);
    if (verify->parsed()) return detail::run_verify(cfg, in, out);
    if (groebner->parsed()) return detail::run_groebner(cfg, out);
    if (bench->parsed()) return detail::run_bench(cfg, out);
  } catch (const contract_error& e) {
    err << "error: " << e.what() << "\n";
    return invalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
  return usage;
}

}  // namespace compulse::cli

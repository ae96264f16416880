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

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace compulse;
using Catch::Matchers::WithinAbs;

namespace {

bool contains_half(const std::vector<PulseSequence>& sols, const std::vector<double>& half, double tol) {
  const auto want = canonicalize(half);
  for (const auto& s : sols) {
    std::vector<double> h(s.phases.begin(), s.phases.begin() + static_cast<long>(want.size()));
    if (angular_distance(canonicalize(h), want) < tol) return true;
  }
  return false;
}

double eval_poly(const std::vector<double>& c, double x) {
  double v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

}  // namespace

TEST_CASE("real polynomial roots", "[closed_form]") {
  // (x - 1)(x - 2)(x^2 + 1)
  const auto r = real_polynomial_roots({2, -3, 3, -3, 1});
  REQUIRE(r.roots.size() == 2);
  CHECK_THAT(r.roots[0], WithinAbs(1.0, 1e-12));
  CHECK_THAT(r.roots[1], WithinAbs(2.0, 1e-12));
  const auto d = real_polynomial_roots({1, -2, 1});
  REQUIRE(d.roots.size() == 1);
  CHECK_THAT(d.roots[0], WithinAbs(1.0, 1e-6));
  const auto reduced = real_polynomial_roots({1, -1, 0});
  CHECK(reduced.degree_reduced);
  CHECK(real_polynomial_roots({0, 0}).roots.empty());
}

TEST_CASE("family names", "[closed_form]") {
  for (auto f : {ClosedFormFamily::AP1, ClosedFormFamily::AP2, ClosedFormFamily::PD2, ClosedFormFamily::NS2,
                 ClosedFormFamily::AP3, ClosedFormFamily::PD4})
    CHECK(closed_form_family_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(closed_form_family_from_string("AP9"), contract_error);
}

TEST_CASE("AP1 closed form", "[closed_form]") {
  const auto sols = solve_closed_form(ClosedFormFamily::AP1, 1.0);
  REQUIRE(sols.size() == 1);
  CHECK_THAT(sols[0].phases[0], WithinAbs(2 * pi / 3, 1e-12));
  CHECK_THAT(sols[0].phases[1], WithinAbs(-2 * pi / 3, 1e-12));
  CHECK(solve_closed_form(ClosedFormFamily::AP1, 3.0).empty());
  const auto edge = solve_closed_form(ClosedFormFamily::AP1, 2.0);
  REQUIRE(edge.size() == 1);
  CHECK_THAT(std::abs(edge[0].phases[0]), WithinAbs(pi, 1e-6));
}

TEST_CASE("PD2 closed form", "[closed_form]") {
  const auto sols = solve_closed_form(ClosedFormFamily::PD2, 1.0);
  REQUIRE(sols.size() == 1);
  CHECK_THAT(sols[0].phases[0], WithinAbs(1.82348, 1e-5));
  CHECK_THAT(sols[0].phases[1], WithinAbs(-1.82348, 1e-5));
  CHECK(sols[0].phases[2] == sols[0].phases[1]);
}

TEST_CASE("chains at gamma = 0", "[closed_form]") {
  for (auto f : {ClosedFormFamily::AP1, ClosedFormFamily::PD2}) {
    const auto sols = solve_closed_form(f, 0.0);
    REQUIRE(sols.size() == 1);
    CHECK_THAT(sols[0].phases[0], WithinAbs(pi / 2, 1e-12));
  }
  const auto ap2 = solve_closed_form(ClosedFormFamily::AP2, 0.0);
  REQUIRE_FALSE(ap2.empty());
  for (const auto& s : ap2) CHECK(full_residual_norm(2, 0.0, s.phases) < 1e-9);
}

TEST_CASE("closed forms reproduce reference rows", "[closed_form]") {
  const std::pair<const char*, ClosedFormFamily> map[] = {
      {"AP1", ClosedFormFamily::AP1}, {"AP2", ClosedFormFamily::AP2}, {"PD2", ClosedFormFamily::PD2},
      {"AP3", ClosedFormFamily::AP3}, {"PD4", ClosedFormFamily::PD4}};
  int checked = 0;
  for (const auto& row : testdata::reference_rows()) {
    const std::string name = std::string(row.family) + std::to_string(row.n);
    for (const auto& [key, family] : map) {
      if (name != key) continue;
      const auto sols = solve_closed_form(family, row.gamma);
      INFO(name << " gamma " << row.gamma << " index " << row.index);
      CHECK(contains_half(sols, row.half, 1e-4));
      ++checked;
    }
  }
  CHECK(checked == 21);
}

TEST_CASE("chain polynomials vanish on reference solutions", "[closed_form]") {
  const std::pair<const char*, ClosedFormFamily> map[] = {
      {"AP2", ClosedFormFamily::AP2}, {"AP3", ClosedFormFamily::AP3}, {"PD4", ClosedFormFamily::PD4}};
  for (const auto& row : testdata::reference_rows()) {
    const std::string name = std::string(row.family) + std::to_string(row.n);
    for (const auto& [key, family] : map) {
      if (name != key) continue;
      const auto polished = testing::polished(row);
      const double t1 = std::tan(polished.phases[0] / 2);
      const auto h = regular_chain(family).h_coefficients(row.gamma, 0.0);
      double scale = 0;
      for (std::size_t i = 0; i < h.size(); ++i) scale += std::abs(h[i]) * std::pow(t1 * t1, static_cast<double>(i));
      CHECK(std::abs(eval_poly(h, t1 * t1)) < 1e-9 * scale);
    }
  }
}

TEST_CASE("closed forms solve the constraints for random gamma", "[closed_form]") {
  std::mt19937_64 rng(41);
  const std::pair<ClosedFormFamily, double> families[] = {{ClosedFormFamily::AP1, 1.9},
                                                          {ClosedFormFamily::AP2, 1.9},
                                                          {ClosedFormFamily::PD2, 1.9},
                                                          {ClosedFormFamily::AP3, 1.9},
                                                          {ClosedFormFamily::PD4, 3.9}};
  for (const auto& [family, range] : families) {
    const int order = regular_chain(family).order;
    std::uniform_real_distribution<double> gd(-range, range);
    int nonempty = 0;
    for (int k = 0; k < 100; ++k) {
      const double g = gd(rng);
      const auto sols = solve_closed_form(family, g);
      if (!sols.empty()) ++nonempty;
      for (const auto& s : sols) CHECK(full_residual_norm(order, g, s.phases) < 1e-9);
    }
    INFO(to_string(family));
    CHECK(nonempty >= 90);
  }
}

TEST_CASE("PD4 has no real solutions for large gamma", "[closed_form]") {
  CHECK(solve_closed_form(ClosedFormFamily::PD4, 5.0).empty());
  CHECK(solve_closed_form(ClosedFormFamily::PD4, -6.0).empty());
}

TEST_CASE("NS2 recovers the symmetric length-four solutions", "[closed_form]") {
  CHECK_THROWS_AS(solve_closed_form(ClosedFormFamily::NS2, 1.0), contract_error);
  for (auto family : {ClosedFormFamily::AP2, ClosedFormFamily::PD2}) {
    for (const auto& sym : solve_closed_form(family, 1.0)) {
      const double t4 = std::tan(sym.phases[3] / 2);
      const auto ns = solve_closed_form(ClosedFormFamily::NS2, 1.0, t4);
      bool found = false;
      for (const auto& s : ns) {
        CHECK(full_residual_norm(2, 1.0, s.phases) < 1e-9);
        if (angular_distance(s.phases, sym.phases) < 1e-7) found = true;
      }
      INFO(to_string(family));
      CHECK(found);
    }
  }
}

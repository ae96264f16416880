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
using boost::multiprecision::cpp_int;

namespace {

ConstraintSpec ap_spec(int n, double g) { return ConstraintSpec::symmetric(n, g, Symmetry::antipalindromic); }

void check_path_invariants(const ContinuationPath& path) {
  REQUIRE_FALSE(path.records.empty());
  for (std::size_t i = 0; i < path.records.size(); ++i) {
    const auto& r = path.records[i];
    CHECK(r.residual < 1e-9);
    if (i == 0) continue;
    const double d0 = path.records[1].gamma - path.records[0].gamma;
    CHECK((r.gamma - path.records[i - 1].gamma) * d0 > 0);
  }
  const int n = path.seed.order;
  double previous = -1;
  for (const auto& r : path.records) {
    // The ToP leading error vanishes at gamma = 0.
    if (path.seed.family == "ToP" && r.gamma == 0.0) continue;
    const auto full = expand_symmetry(r.half, path.seed.symmetry);
    const double k = kappa(n, r.gamma, full, 1e-9);
    if (previous >= 0) CHECK(std::abs(k - previous) < 0.5);
    previous = k;
  }
}

}  // namespace

TEST_CASE("ToP seeds", "[continuation]") {
  const auto s3 = seed_top(3, 0);
  CHECK(s3.descriptor.gamma0 == 0.0);
  CHECK(s3.half == std::vector<double>(3, pi / 2));
  const auto s4 = seed_top(4, 2);
  CHECK(s4.descriptor.gamma0 == 4.0);
  CHECK(s4.half == std::vector<double>{pi, pi, pi / 2, pi / 2});
  CHECK(s4.descriptor.symmetry == Symmetry::antipalindromic);
  CHECK_THROWS_AS(seed_top(4, 3), contract_error);
  CHECK_THROWS_AS(seed_top(3, -1), contract_error);
  for (int n = 1; n <= 12; ++n)
    for (int b = 0; b <= n / 2; ++b) {
      const auto s = seed_top(n, b);
      // Round-off grows with the size of the phase sums, about C(2n, n).
      const double scale = std::tgamma(2 * n + 1.0) / std::pow(std::tgamma(n + 1.0), 2);
      CHECK(full_residual_norm(n, s.descriptor.gamma0, expand_symmetry(s.half, Symmetry::antipalindromic)) <
            std::max(1e-12, 1e-15 * scale));
    }
}

TEST_CASE("PD seeds", "[continuation]") {
  const auto s = seed_pd(2, 1);
  CHECK(s.descriptor.gamma0 == 2.0);
  CHECK_THAT(s.half[0], WithinAbs(2 * pi / 3, 1e-15));
  CHECK_THAT(s.half[1], WithinAbs(-2 * pi / 3, 1e-15));
  const auto s12 = seed_pd(12, 6);
  for (int k = 1; k <= 6; ++k) {
    CHECK_THAT(std::remainder(s12.half[2 * k - 2] - 12 * pi / 13 * k, two_pi), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::remainder(s12.half[2 * k - 1] + 12 * pi / 13 * k, two_pi), WithinAbs(0.0, 1e-12));
  }
  CHECK_THROWS_AS(seed_pd(5, 2), contract_error);
  CHECK_THROWS_AS(seed_pd(8, 3), contract_error);
  for (int n = 2; n <= 12; n += 2) {
    const auto p = seed_pd(n, n / 2);
    CHECK(full_residual_norm(n, 2.0, expand_symmetry(p.half, Symmetry::palindromic)) < 1e-9);
  }
}

TEST_CASE("ToP Jacobian determinant at gamma = 0", "[continuation]") {
  for (int n = 1; n <= 12; ++n) {
    const double det = jacobian(ap_spec(n, 0.0), seed_top(n, 0).half).determinant();
    const double expect = ((n % 2) ? -1.0 : 1.0) * std::pow(2.0, n * (n + 1) / 2);
    INFO("n = " << n);
    CHECK(std::abs(det / expect - 1) < 1e-8);
  }
}

TEST_CASE("Jacobian recurrence at the ToP seed", "[continuation]") {
  for (int n = 2; n <= 12; ++n) {
    const auto J = jacobian(ap_spec(n, 0.0), seed_top(n, 0).half);
    for (int j = 0; j + 1 < n; ++j)
      for (int k = 0; k + 1 < n; ++k) {
        const double expect = J(j + 1, k) + J(j, k + 1) + J(j, k);
        CHECK(std::abs(J(j + 1, k + 1) - expect) <= 1e-9 * std::max(1.0, std::abs(expect)));
      }
  }
}

TEST_CASE("D matrix determinant", "[continuation]") {
  for (int n = 1; n <= 12; ++n) {
    const auto d = d_matrix(n);
    CHECK(bareiss_determinant(d) == (cpp_int(1) << (n * (n - 1) / 2)));
  }
  // Entries against a direct double evaluation.
  auto binom = [](int top, int k) { return (k < 0 || k > top) ? 0.0 : std::round(std::tgamma(top + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(top - k + 1.0))); };
  const auto d = d_matrix(6);
  for (int j = 1; j <= 6; ++j)
    for (int k = 1; k <= 6; ++k) {
      double v = 0;
      for (int r = 0; r <= j - 1; ++r) v += binom(k - 1, j - r - 1) * binom(k + r - 1, r);
      CHECK(d[j - 1][k - 1].convert_to<double>() == v);
    }
  CHECK(bareiss_determinant({{0, 1}, {1, 0}}) == -1);
  CHECK(bareiss_determinant({{2, 4}, {1, 2}}) == 0);
}

TEST_CASE("continuation to the seed is a single record", "[continuation]") {
  const auto path = continue_path(seed_top(3, 0), 0.0);
  CHECK(path.records.size() == 1);
  CHECK(path.status == PathStatus::reached_target);
  CHECK(path.records[0].half == seed_top(3, 0).half);
}

TEST_CASE("ToP2 from 0 to 1", "[continuation]") {
  const auto path = continue_path(seed_top(2, 0), 1.0);
  REQUIRE(path.status == PathStatus::reached_target);
  CHECK_THAT(path.gamma_end(), WithinAbs(1.0, 1e-15));
  CHECK_THAT(path.records.back().half[0], WithinAbs(2.35949, 1e-4));
  CHECK_THAT(path.records.back().half[1], WithinAbs(1.35980, 1e-4));
  check_path_invariants(path);
}

TEST_CASE("ToP4 from 0 to 1/2", "[continuation]") {
  const auto path = continue_path(seed_top(4, 0), 0.5);
  REQUIRE(path.status == PathStatus::reached_target);
  const std::vector<double> expect{2.10426, 1.11746, 1.80109, 1.52196};
  CHECK(angular_distance(path.records.back().half, expect) < 1e-4);
  check_path_invariants(path);
}

TEST_CASE("PD12 from 2 to 1", "[continuation]") {
  const auto path = continue_path(seed_pd(12, 6), 1.0);
  REQUIRE(path.status == PathStatus::reached_target);
  const auto& row = testing::reference("PD", 12, 1, 1.0);
  CHECK(angular_distance(canonicalize(path.records.back().half), canonicalize(row.half)) < 1e-3);
  check_path_invariants(path);
}

TEST_CASE("continuation stops at singular points", "[continuation]") {
  const auto path = continue_path(seed_pd(8, 4), 0.0);
  CHECK(path.status != PathStatus::reached_target);
  CHECK(path.gamma_end() > 0.0);
  CHECK(path.gamma_end() < 0.5);
  CHECK(path.max_residual() < 1e-9);
  CHECK(singular_threshold(-64.0) == 64e-8);
}

TEST_CASE("bootstrap", "[continuation]") {
  const auto h2 = bootstrap_top({2 * pi / 3});
  CHECK(angular_distance(h2, std::vector<double>{2.35949, 1.35980}) < 1e-4);
  const auto h12 = top_at_gamma_one(12);
  CHECK(full_residual_norm(12, 1.0, expand_symmetry(h12, Symmetry::antipalindromic)) < 1e-10);
  const auto& row = testing::reference("AP", 12, 1, 1.0);
  CHECK(angular_distance(canonicalize(h12), canonicalize(row.half)) < 1e-3);
  CHECK_THROWS_AS(top_at_gamma_one(0), contract_error);
}

TEST_CASE("leading error of ToP at gamma = 1 decreases with n", "[continuation]") {
  std::vector<double> h{2 * pi / 3};
  double previous = INFINITY;
  for (int n = 1; n <= 12; ++n) {
    if (n > 1) h = bootstrap_top(h);
    const double e = leading_error(n, 1.0, expand_symmetry(h, Symmetry::antipalindromic));
    CHECK(e < previous);
    previous = e;
  }
}

TEST_CASE("coverage intervals", "[continuation]") {
  Coverage c;
  c.add(0.0, 0.5);
  c.add(1.0, 2.0);
  CHECK_FALSE(c.covers(0.0, 2.0));
  CHECK(c.covers(1.2, 1.8));
  c.add(0.4, 1.1);
  CHECK(c.intervals.size() == 1);
  CHECK(c.covers(0.0, 2.0));
}

TEST_CASE("small orders are covered from gamma = 0", "[continuation]") {
  for (int n = 1; n <= 4; ++n) {
    const auto path = continue_path(seed_top(n, 0), 2.0);
    INFO("n = " << n);
    CHECK(path.status == PathStatus::reached_target);
  }
}

TEST_CASE("path dump", "[continuation]") {
  const auto path = continue_path(seed_top(2, 0), 0.1);
  std::istringstream lines(to_json_lines(path));
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("gamma"));
    CHECK(j.contains("detJ"));
    CHECK(j.contains("residual"));
    CHECK(j["phases"].size() == 4);
    ++count;
  }
  CHECK(count == path.records.size());
}

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

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "compulse/cli.hpp"
#include "json.hpp"

using namespace compulse;
using Catch::Matchers::WithinAbs;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parsed(const Result& r) {
  auto j = nlohmann::json::parse(r.out, nullptr, false);
  REQUIRE_FALSE(j.is_discarded());
  return j;
}

}  // namespace

TEST_CASE("solve PD2 at gamma 1", "[cli]") {
  const auto r = invoke({"solve", "--family", "PD2", "--gamma", "1"});
  REQUIRE(r.code == cli::ok);
  const auto j = parsed(r);
  REQUIRE(j["solutions"].size() >= 1);
  bool found = false;
  for (const auto& s : j["solutions"]) {
    CHECK(s["n"] == 2);
    CHECK(s["L"] == 4);
    CHECK(s["residual_norm"].get<double>() < 1e-9);
    const auto p = s["phases"].get<std::vector<double>>();
    REQUIRE(p.size() == 4);
    const std::vector<double> want{1.82348, -1.82348, -1.82348, 1.82348};
    bool match = true;
    for (int k = 0; k < 4; ++k) match = match && std::abs(p[k] - want[k]) < 1e-5;
    found = found || match;
  }
  CHECK(found);
}

TEST_CASE("solve AP1 out of range", "[cli]") {
  const auto r = invoke({"solve", "--family", "AP1", "--gamma", "3"});
  CHECK(r.code == cli::no_solution);
  CHECK(parsed(r)["solutions"].empty());
}

TEST_CASE("verify a 2pi pair", "[cli]") {
  const auto r = invoke({"verify", "--theta0", "2pi", "--gamma", "1", "--phases", "2.0944,-2.0944", "--n", "1"});
  REQUIRE(r.code == cli::ok);
  const auto j = parsed(r);
  REQUIRE(j["results"].size() == 1);
  CHECK(j["results"][0]["residual_norm"].get<double>() < 1e-4);
  CHECK(j["results"][0]["passed"] == true);
}

TEST_CASE("verify rejects wrong phases", "[cli]") {
  const auto r = invoke({"verify", "--gamma", "1", "--phases", "0.3,0.7", "--n", "1"});
  CHECK(r.code == cli::no_solution);
  CHECK(parsed(r)["results"][0]["passed"] == false);
}

TEST_CASE("solve output round-trips through verify", "[cli]") {
  for (const std::string family : {"AP1", "AP2", "PD2", "AP3", "PD4"}) {
    for (const std::string gamma : {"1", "1/2", "1/4"}) {
      const auto s = invoke({"solve", "--family", family, "--gamma", gamma});
      if (s.code == cli::no_solution) continue;
      REQUIRE(s.code == cli::ok);
      const auto v = invoke({"verify", "--input", "-", "--check-slope"}, s.out);
      INFO(family << " gamma " << gamma << "\n" << v.out << v.err);
      CHECK(v.code == cli::ok);
      CHECK(parsed(v)["results"].size() == parsed(s)["solutions"].size());
    }
  }
}

TEST_CASE("usage errors", "[cli]") {
  CHECK(invoke({"solve", "--family", "PD2", "--bogus", "1"}).code == cli::usage);
  CHECK(invoke({"frobnicate"}).code == cli::usage);
  CHECK(invoke({}).code == cli::usage);
  const auto r = invoke({"solve", "--gamma", "1"});
  CHECK(r.code == cli::usage);
  CHECK(r.err.find("solve") != std::string::npos);
  CHECK(invoke({"solve", "--family", "PD2", "--format", "xml"}).code == cli::usage);
}

TEST_CASE("validation errors", "[cli]") {
  CHECK(invoke({"solve", "--family", "QQ7"}).code == cli::invalid);
  CHECK(invoke({"solve", "--family", "PD2", "--gamma", "abc"}).code == cli::invalid);
  CHECK(invoke({"verify", "--gamma", "1"}).code == cli::invalid);
  CHECK(invoke({"verify", "--input", "-"}, "not json").code == cli::invalid);
  CHECK(invoke({"verify", "--input", "-"}, R"({"n":1})").code == cli::invalid);
  CHECK(invoke({"continue", "--n", "2", "--seed", "zz"}).code == cli::invalid);
}

TEST_CASE("angle and number parsing", "[cli]") {
  CHECK_THAT(parse_angle("2pi"), WithinAbs(two_pi, 1e-15));
  CHECK_THAT(parse_angle("-pi/2"), WithinAbs(-pi / 2, 1e-15));
  CHECK_THAT(parse_angle("3pi/4"), WithinAbs(3 * pi / 4, 1e-15));
  CHECK_THAT(parse_angle("0.5*pi"), WithinAbs(pi / 2, 1e-15));
  CHECK_THAT(parse_angle("pi"), WithinAbs(pi, 1e-15));
  CHECK_THAT(parse_angle("1.25"), WithinAbs(1.25, 1e-15));
  CHECK_THAT(parse_angle("-2.0944"), WithinAbs(-2.0944, 1e-15));
  CHECK_THROWS_AS(parse_angle("pie"), contract_error);
  CHECK_THROWS_AS(parse_angle("1.2x"), contract_error);
  CHECK_THROWS_AS(parse_angle("pi/0"), contract_error);
  CHECK_THAT(parse_real("1/2"), WithinAbs(0.5, 1e-15));
  CHECK_THAT(parse_real("0.25"), WithinAbs(0.25, 1e-15));
  CHECK_THROWS_AS(parse_real("1/0"), contract_error);
  CHECK_THROWS_AS(parse_real("half"), contract_error);
  const auto list = parse_angle_list("pi,-pi/2,0.1");
  REQUIRE(list.size() == 3);
  CHECK_THAT(list[1], WithinAbs(-pi / 2, 1e-15));
  CHECK(round12(pi) == 3.14159265359);
}

TEST_CASE("csv output", "[cli]") {
  const auto r = invoke({"solve", "--family", "AP2", "--gamma", "1", "--format", "csv"});
  REQUIRE(r.code == cli::ok);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  CHECK(line == "n,L,theta0,gamma,symmetry,kappa,residual_norm,provenance,phases");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
    const auto last = line.substr(line.rfind(',') + 1);
    CHECK(std::count(last.begin(), last.end(), ';') == 3);
  }
  CHECK(rows >= 1);
}

TEST_CASE("record schema", "[cli]") {
  const auto j = parsed(invoke({"solve", "--family", "AP2", "--gamma", "1/2"}));
  for (const auto& s : j["solutions"]) {
    for (const char* key : {"n", "L", "theta0", "gamma", "symmetry", "phases", "kappa", "residual_norm", "provenance"})
      CHECK(s.contains(key));
    CHECK(s["symmetry"] == "AP");
    CHECK(s["kappa"].is_number());
    const auto rec = record_from_json(s);
    CHECK(to_json(rec) == s);
  }
  nlohmann::json bad = j["solutions"][0];
  bad["L"] = 7;
  CHECK_THROWS_AS(record_from_json(bad), contract_error);
}

TEST_CASE("groebner dump", "[cli]") {
  const auto r = invoke({"groebner", "--n", "2", "--symmetry", "PD", "--gamma", "1"});
  REQUIRE(r.code == cli::ok);
  const auto j = parsed(r);
  CHECK(j["system"] == "PD2");
  CHECK(j["variables"].size() == 2);
  CHECK(j["saturated"].size() == 2);
  bool found = false;
  for (const auto& p : j["phases"]) {
    const auto v = p.get<std::vector<double>>();
    REQUIRE(v.size() == 4);
    found = found || std::abs(std::abs(v[0]) - 1.82348) < 1e-5;
  }
  CHECK(found);
}

TEST_CASE("continue and search", "[cli]") {
  const auto c = invoke({"continue", "--n", "2", "--seed", "top", "--target", "1"});
  REQUIRE(c.code == cli::ok);
  std::istringstream is(c.out);
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) {
    const auto j = nlohmann::json::parse(line, nullptr, false);
    REQUIRE_FALSE(j.is_discarded());
    ++lines;
  }
  CHECK(lines >= 2);

  const auto s = invoke({"search", "--n", "2", "--gamma", "1", "--symmetry", "PD", "--starts", "200"});
  REQUIRE(s.code == cli::ok);
  const auto j = parsed(s);
  CHECK(j["solutions"].size() >= 1);
  CHECK(j["statistics"]["starts"] == 200);
}

TEST_CASE("file output", "[cli]") {
  const auto path = std::filesystem::temp_directory_path() / "compulse_cli_test.json";
  const auto r = invoke({"solve", "--family", "PD2", "--gamma", "1", "--out", path.string()});
  REQUIRE(r.code == cli::ok);
  CHECK(r.out.empty());
  const auto v = invoke({"verify", "--input", path.string()});
  CHECK(v.code == cli::ok);
  std::filesystem::remove(path);
}

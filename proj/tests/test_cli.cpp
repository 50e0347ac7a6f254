// Copyright 2026 The qment Authors
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

// Runs the qment executable (path from QMENT_CLI_PATH) and checks exit codes
// and output.

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " QMENT_CLI_PATH " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

}  // namespace

TEST_CASE("state summaries", "[cli]") {
  const auto r = run("state 'ghz(n=3)'");
  CHECK(r.status == 0);
  CHECK(r.out.find("purity: 1") != std::string::npos);
  CHECK(r.out.find("marginal_entropies: 1 1 1") != std::string::npos);

  const std::string path = "cli_test_states.spec";
  {
    std::ofstream f(path);
    f << "# two states\nghz(n=3)\nsmolin(n=4, c=0,0,0)\n";
  }
  const auto file = run("state " + path);
  CHECK(file.status == 0);
  CHECK(file.out.find("purity: 0.0625") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("measure output is JSON", "[cli]") {
  const auto sep = run("measure sep 'ghz_phi_mix(p=0, alpha=0.3)'");
  REQUIRE(sep.status == 0);
  const auto j = nlohmann::json::parse(sep.out);
  CHECK(j["measure"] == "separability");
  CHECK(j["subsets"][0]["subset"] == nlohmann::json::array({1, 2}));
  CHECK(j["subsets"][0]["value"].get<double>() == Catch::Approx(2.0));
  CHECK(j["partition_label"] == "{12|3}");

  const auto phys = run("measure phys 'w(n=3)'", "QMENT_MODE=bound");
  REQUIRE(phys.status == 0);
  const auto k = nlohmann::json::parse(phys.out);
  CHECK(k["mode"] == "bound");
  CHECK(k["subsets"][0]["kind"] == "lower-bound");
  CHECK(k["subsets"][0]["value"].get<double>() == Catch::Approx(-2.0 * std::log2(7.0 / 9.0)).margin(1e-9));
}

TEST_CASE("scan, ppt and smolin commands", "[cli]") {
  const auto s = run("scan 'line2 alpha=0..0.5:0.25 beta=0 ppt'");
  REQUIRE(s.status == 0);
  CHECK(s.out.rfind("alpha,status,ppt_min_eig,npt\n", 0) == 0);
  CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 4);

  const auto p = run("ppt 'bell' --part 2");
  REQUIRE(p.status == 0);
  CHECK(nlohmann::json::parse(p.out)["min_eigenvalue"].get<double>() == Catch::Approx(-0.5));

  const auto m = run("smolin --n 4 --c 1,1,1");
  REQUIRE(m.status == 0);
  const auto j = nlohmann::json::parse(m.out);
  CHECK(j["entangled"] == true);
  CHECK(j["agree"] == true);
}

TEST_CASE("rejected input exits with status 2", "[cli]") {
  CHECK(run("state 'line2(alpha=2)'").status == 2);
  CHECK(run("state 'ghz(n=3, q=1)'").status == 2);
  CHECK(run("state 'ghz(n=1/0)'").status == 2);
  CHECK(run("measure sep 'smolin(c=0.1,0.1,0.1)'").status == 2);
  CHECK(run("measure phys 'ghz(n=9)'").status == 2);
  CHECK(run("scan 'line2 alpha=1..0:0.1 ppt'").status == 2);
  CHECK(run("smolin --n 3 --c 0,0,0").status == 2);
  CHECK(run("smolin --n 4 --c -1,-1,-1").status == 2);
  CHECK(run("measure magic 'ghz'").status == 2);
  CHECK(run("").status == 2);
  CHECK(run("state 'ghz'", "QMENT_MODE=sideways").status == 2);
}

TEST_CASE("output file flag", "[cli]") {
  const std::string path = "cli_test_out.json";
  REQUIRE(run("--out " + path + " measure sep 'ghz(n=3)'").status == 0);
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["total"].get<double>() == Catch::Approx(3.0));
  std::remove(path.c_str());
}

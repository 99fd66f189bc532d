// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "drmimo/harness.hpp"

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dimred");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (auto& s : args) {
    argv.push_back(s.data());
  }
  return drmimo::cli_main(static_cast<int>(argv.size()), argv.data());
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(',', start);
      if (pos == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    rows.push_back(fields);
  }
  return rows;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << body;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("sum-rate sweep runs end to end from flags") {
  const std::string out = temp_path("drmimo_cli_sumrate.csv");
  const int rc = run_cli({"sumrate-vs-n", "--users", "4", "--rrhs", "2", "--antennas", "4",
                          "--dims", "2,4", "--trials", "2", "--methods", "cklt", "--seed", "3",
                          "--out", out});
  CHECK(rc == 0);
  const auto table = read_csv(out);
  REQUIRE(table.size() == 5);  // header + 2 params x 2 metrics
  for (std::size_t i = 1; i < table.size(); ++i) {
    CHECK(table[i][0] == "sumrate-vs-n");
    CHECK(table[i][1] == "cklt");
    CHECK(table[i][6] == "2");
    CHECK(table[i][7] == "3");
  }
  std::filesystem::remove(out);
}

TEST_CASE("bad invocations exit nonzero without touching the filesystem") {
  CHECK(run_cli({"sumrate-vs-n", "--dims", "0", "--trials", "1", "--out",
                 temp_path("drmimo_cli_unused.csv")}) == 1);
  CHECK(run_cli({"bogus-scenario"}) == 1);
  CHECK(run_cli({"sumrate-vs-n", "--no-such-flag"}) == 1);
  CHECK(run_cli({}) == 1);
  CHECK_FALSE(std::filesystem::exists(temp_path("drmimo_cli_unused.csv")));
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli({"--help"}) == 0);
  CHECK(run_cli({"sumrate-vs-n", "--help"}) == 0);
}

TEST_CASE("unwritable output path reports an io failure") {
  CHECK(run_cli({"sumrate-vs-n", "--users", "4", "--rrhs", "2", "--antennas", "4", "--dims",
                 "2", "--trials", "1", "--methods", "antred", "--out",
                 "/nonexistent-dir-drmimo/out.csv"}) == 2);
}

TEST_CASE("json config drives a run and flags override it") {
  const std::string cfg_path = temp_path("drmimo_cli_config.json");
  const std::string out = temp_path("drmimo_cli_config_out.csv");
  write_file(cfg_path, R"({
    "scenario": "sumrate-vs-n",
    "trials": 2,
    "seed": 9,
    "methods": ["antred"],
    "sweep": [2, 4],
    "out_path": ")" + out + R"(",
    "base": {"users": 4, "rrhs": 2, "antennas": 4, "snr_db": 5.0}
  })");

  CHECK(run_cli({"sumrate-vs-n", "--config", cfg_path}) == 0);
  auto table = read_csv(out);
  REQUIRE(table.size() == 5);
  CHECK(table[1][1] == "antred");
  CHECK(table[1][6] == "2");
  CHECK(table[1][7] == "9");

  CHECK(run_cli({"sumrate-vs-n", "--config", cfg_path, "--seed", "11"}) == 0);
  table = read_csv(out);
  REQUIRE(table.size() == 5);
  CHECK(table[1][7] == "11");

  std::filesystem::remove(cfg_path);
  std::filesystem::remove(out);
}

TEST_CASE("config scenario must match the subcommand") {
  const std::string cfg_path = temp_path("drmimo_cli_mismatch.json");
  write_file(cfg_path, R"({"scenario": "sumrate-vs-n", "trials": 1})");
  CHECK(run_cli({"mi-vs-snr", "--config", cfg_path}) == 1);
  std::filesystem::remove(cfg_path);
}

TEST_CASE("config file problems map to distinct exit codes") {
  CHECK(run_cli({"sumrate-vs-n", "--config", "/nonexistent-dir-drmimo/cfg.json"}) == 2);
  const std::string cfg_path = temp_path("drmimo_cli_invalid.json");
  write_file(cfg_path, "{ this is not json");
  CHECK(run_cli({"sumrate-vs-n", "--config", cfg_path}) == 1);
  std::filesystem::remove(cfg_path);
}

TEST_CASE("fronthaul subcommand reproduces the closed-form loads") {
  const std::string out = temp_path("drmimo_cli_fronthaul.csv");
  const int rc = run_cli({"fronthaul", "--coherence", "10,20", "--trials", "1", "--out", out});
  CHECK(rc == 0);
  const auto table = read_csv(out);
  REQUIRE(table.size() == 13);  // header + 3 methods x 2 params x 2 metrics
  bool saw = false;
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (table[i][1] == "decentralised-dr" && table[i][2] == "10" &&
        table[i][3] == "load_ratio") {
      CHECK(std::strtod(table[i][4].c_str(), nullptr) == doctest::Approx(0.375).epsilon(1e-15));
      saw = true;
    }
  }
  CHECK(saw);
  std::filesystem::remove(out);
}

TEST_CASE("per-trial dump can be requested from the command line") {
  const std::string out = temp_path("drmimo_cli_dump_out.csv");
  const std::string dump = temp_path("drmimo_cli_dump.csv");
  const int rc = run_cli({"sumrate-vs-n", "--users", "4", "--rrhs", "2", "--antennas", "4",
                          "--dims", "2", "--trials", "2", "--methods", "antred", "--out", out,
                          "--dump-trials", dump});
  CHECK(rc == 0);
  const auto table = read_csv(dump);
  REQUIRE(table.size() == 5);  // header + 1 param x 2 metrics x 2 trials
  CHECK(table[0][4] == "trial");
  std::filesystem::remove(out);
  std::filesystem::remove(dump);
}

TEST_SUITE_END();

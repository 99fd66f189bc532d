// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "drmimo/harness.hpp"
#include "drmimo/rng.hpp"

using drmimo::ExperimentConfig;
using drmimo::IoError;
using drmimo::ResultRow;
using drmimo::Scenario;
using drmimo::ValidationError;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

bool rows_equal(const std::vector<ResultRow>& a, const std::vector<ResultRow>& b) {
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].scenario != b[i].scenario || a[i].method != b[i].method ||
        a[i].param != b[i].param || a[i].metric != b[i].metric || a[i].mean != b[i].mean ||
        a[i].std_error != b[i].std_error || a[i].trials != b[i].trials ||
        a[i].seed != b[i].seed) {
      return false;
    }
  }
  return true;
}

const ResultRow& find_row(const std::vector<ResultRow>& rows, const std::string& method,
                          double param, const std::string& metric) {
  for (const auto& r : rows) {
    if (r.method == method && r.param == param && r.metric == metric) {
      return r;
    }
  }
  REQUIRE_MESSAGE(false, "row not found: " << method << " " << param << " " << metric);
  static ResultRow dummy;
  return dummy;
}

bool has_row(const std::vector<ResultRow>& rows, const std::string& method, double param,
             const std::string& metric) {
  for (const auto& r : rows) {
    if (r.method == method && r.param == param && r.metric == metric) {
      return true;
    }
  }
  return false;
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

ExperimentConfig small_sum_rate_cfg() {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kSumRateVsN;
  cfg.base.K = 4;
  cfg.base.L = 2;
  cfg.base.M = 4;
  cfg.base.N = 2;
  cfg.sweep = {2, 4};
  cfg.methods = {"cklt", "antred"};
  cfg.trials = 3;
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("repeated runs with a fixed seed are identical") {
  const ExperimentConfig cfg = small_sum_rate_cfg();
  const auto a = drmimo::run_experiment(cfg);
  const auto b = drmimo::run_experiment(cfg);
  CHECK(rows_equal(a, b));
  CHECK(a.size() == 8);  // 2 methods x 2 sweep values x 2 metrics
}

TEST_CASE("results do not depend on the worker count") {
  const ExperimentConfig cfg = small_sum_rate_cfg();
  setenv("DIMRED_THREADS", "1", 1);
  const auto serial = drmimo::run_experiment(cfg);
  setenv("DIMRED_THREADS", "5", 1);
  const auto parallel = drmimo::run_experiment(cfg);
  unsetenv("DIMRED_THREADS");
  CHECK(rows_equal(serial, parallel));
}

TEST_CASE("full-dimension conditional transform reports zero loss") {
  ExperimentConfig cfg = small_sum_rate_cfg();
  cfg.sweep = {4};
  cfg.methods = {"cklt"};
  cfg.trials = 5;
  const auto rows = drmimo::run_experiment(cfg);
  CHECK(find_row(rows, "cklt", 4.0, "delta_bits").mean <= 1e-9);
}

TEST_CASE("rows come back sorted by method, parameter, metric") {
  ExperimentConfig cfg = small_sum_rate_cfg();
  cfg.methods = {"dcklt", "cklt"};
  cfg.sweep = {4, 2};
  cfg.trials = 2;
  const auto rows = drmimo::run_experiment(cfg);
  REQUIRE(rows.size() == 8);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto key = [](const ResultRow& r) {
      return std::make_tuple(r.scenario, r.method, r.param, r.metric);
    };
    CHECK(key(rows[i - 1]) < key(rows[i]));
  }
  CHECK(rows.front().method == "cklt");
  CHECK(rows.front().param == 2.0);
  CHECK(rows.front().metric == "delta_bits");
}

TEST_CASE("information grows with SNR") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kMiVsSnr;
  cfg.base.K = 4;
  cfg.base.L = 2;
  cfg.base.M = 4;
  cfg.base.N = 2;
  cfg.sweep = {0.0, 10.0};
  cfg.methods = {"cklt"};
  cfg.trials = 5;
  cfg.seed = 3;
  const auto rows = drmimo::run_experiment(cfg);
  CHECK(find_row(rows, "cklt", 10.0, "mi_bits").mean >
        find_row(rows, "cklt", 0.0, "mi_bits").mean);
}

TEST_CASE("outage hits both extremes") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kOutageVsN;
  cfg.base.K = 4;
  cfg.base.L = 2;
  cfg.base.M = 4;
  cfg.base.N = 4;
  cfg.sweep = {4};
  cfg.methods = {"full"};
  cfg.trials = 3;
  cfg.outage_threshold_bits = 1e-3;
  const auto low = drmimo::run_experiment(cfg);
  CHECK(find_row(low, "full", 4.0, "outage").mean == 0.0);
  cfg.outage_threshold_bits = 1e6;
  const auto high = drmimo::run_experiment(cfg);
  CHECK(find_row(high, "full", 4.0, "outage").mean == 1.0);
}

TEST_CASE("density scenario pairs user count with half as many radio heads") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kDensityScaling;
  cfg.base.K = 4;
  cfg.base.L = 2;
  cfg.base.M = 4;
  cfg.base.N = 2;
  cfg.sweep = {4, 8};
  cfg.methods = {"full"};
  cfg.trials = 2;
  const auto rows = drmimo::run_experiment(cfg);
  CHECK(has_row(rows, "full", 4.0, "user_rate"));
  CHECK(has_row(rows, "full", 8.0, "user_rate"));
  CHECK(find_row(rows, "full", 4.0, "user_rate").mean > 0.0);
}

TEST_CASE("csi sweep produces finite whitened rates") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kCsiSweep;
  cfg.base.K = 4;
  cfg.base.L = 2;
  cfg.base.M = 4;
  cfg.base.N = 2;
  cfg.sweep = {30.0};
  cfg.methods = {"full", "cklt"};
  cfg.trials = 3;
  const auto rows = drmimo::run_experiment(cfg);
  const double full = find_row(rows, "full", 30.0, "sum_rate").mean;
  const double cklt = find_row(rows, "cklt", 30.0, "sum_rate").mean;
  CHECK(std::isfinite(full));
  CHECK(std::isfinite(cklt));
  CHECK(cklt <= full + 1e-9);
}

TEST_CASE("infeasible zero-forcing configurations surface as rows, not crashes") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kDownlinkVsN;
  cfg.base.K = 8;
  cfg.base.L = 4;
  cfg.base.M = 8;
  cfg.base.N = 1;
  cfg.sweep = {1, 3};
  cfg.methods = {"cklt"};
  cfg.trials = 2;
  const auto rows = drmimo::run_experiment(cfg);
  const auto& bad = find_row(rows, "cklt", 1.0, "infeasible");
  CHECK(bad.mean == 1.0);
  CHECK_FALSE(has_row(rows, "cklt", 1.0, "user_rate"));
  CHECK(has_row(rows, "cklt", 3.0, "user_rate"));
  CHECK(find_row(rows, "cklt", 3.0, "user_rate").mean > 0.0);
}

TEST_CASE("fronthaul scenario emits deterministic loads") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kFronthaulVsT;
  cfg.base.K = 8;
  cfg.base.L = 4;
  cfg.base.M = 8;
  cfg.base.N = 3;
  cfg.base.T_coh = 10;
  cfg.sweep = {10, 100};
  cfg.methods = {"standard", "centralised-dr", "decentralised-dr"};
  cfg.trials = 1;
  const auto rows = drmimo::run_experiment(cfg);
  CHECK(rows.size() == 12);
  CHECK(find_row(rows, "decentralised-dr", 10.0, "mean_load").mean == 3.0);
  CHECK(find_row(rows, "decentralised-dr", 10.0, "load_ratio").mean ==
        doctest::Approx(0.375).epsilon(1e-15));
  CHECK(find_row(rows, "centralised-dr", 10.0, "load_ratio").mean ==
        doctest::Approx(1.175).epsilon(1e-12));
  CHECK(find_row(rows, "standard", 100.0, "load_ratio").mean == 1.0);
}

TEST_CASE("validation rejects malformed experiment configurations") {
  ExperimentConfig cfg = small_sum_rate_cfg();
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);

  cfg = small_sum_rate_cfg();
  cfg.methods.clear();
  CHECK_THROWS_AS(cfg.validate(), ValidationError);

  cfg = small_sum_rate_cfg();
  cfg.methods = {"bogus"};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);

  cfg = small_sum_rate_cfg();
  cfg.sweep = {0};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);

  cfg = small_sum_rate_cfg();
  cfg.sweep = {2.5};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);

  cfg = small_sum_rate_cfg();
  cfg.scenario = Scenario::kDensityScaling;
  cfg.sweep = {3};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);

  cfg = small_sum_rate_cfg();
  cfg.scenario = Scenario::kFronthaulVsT;
  cfg.methods = {"cklt"};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("csv writer round-trips full-precision values") {
  const std::string path = temp_path("drmimo_csv_roundtrip.csv");

  drmimo::emit_csv({}, path);
  auto table = read_csv(path);
  REQUIRE(table.size() == 1);
  CHECK(table[0] == std::vector<std::string>{"scenario", "method", "param", "metric", "mean",
                                             "stderr", "trials", "seed"});

  std::vector<ResultRow> rows;
  auto rng = drmimo::substream_rng(91, 0, 0);
  for (int i = 0; i < 1000; ++i) {
    ResultRow r;
    r.scenario = "sumrate-vs-n";
    r.method = i % 2 == 0 ? "cklt" : "antred";
    r.param = static_cast<double>(i % 8);
    r.metric = "sum_rate";
    const double sign = drmimo::uniform01(rng) < 0.5 ? -1.0 : 1.0;
    r.mean = sign * std::exp(40.0 * (drmimo::uniform01(rng) - 0.5)) * drmimo::uniform01(rng);
    r.std_error = drmimo::uniform01(rng) * 1e-3;
    r.trials = 1000 + i;
    r.seed = 7;
    rows.push_back(r);
  }
  drmimo::emit_csv(rows, path);
  table = read_csv(path);
  REQUIRE(table.size() == 1001);

  std::vector<ResultRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.scenario, a.method, a.param, a.metric) <
           std::tie(b.scenario, b.method, b.param, b.metric);
  });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& fields = table[i + 1];
    REQUIRE(fields.size() == 8);
    CHECK(fields[0] == sorted[i].scenario);
    CHECK(fields[1] == sorted[i].method);
    CHECK(std::strtod(fields[2].c_str(), nullptr) == sorted[i].param);
    CHECK(fields[3] == sorted[i].metric);
    CHECK(std::strtod(fields[4].c_str(), nullptr) == sorted[i].mean);
    CHECK(std::strtod(fields[5].c_str(), nullptr) == sorted[i].std_error);
    CHECK(std::stol(fields[6]) == sorted[i].trials);
    CHECK(std::stoull(fields[7]) == sorted[i].seed);
  }
  std::filesystem::remove(path);

  CHECK_THROWS_AS(drmimo::emit_csv({}, "/nonexistent-dir-drmimo/out.csv"), IoError);
}

TEST_CASE("per-trial dumps cover every feasible cell") {
  ExperimentConfig cfg = small_sum_rate_cfg();
  cfg.dump_trials_path = temp_path("drmimo_dump_trials.csv");
  const auto rows = drmimo::run_experiment(cfg);
  const auto table = read_csv(cfg.dump_trials_path);
  REQUIRE(table.size() ==
          1 + 8 * static_cast<std::size_t>(cfg.trials));  // header + cells x trials
  CHECK(table[0] == std::vector<std::string>{"scenario", "method", "param", "metric", "trial",
                                             "value"});
  // Trial 0 of each cell matches a fresh single-trial run.
  ExperimentConfig one = cfg;
  one.trials = 1;
  one.dump_trials_path.clear();
  const auto single = drmimo::run_experiment(one);
  for (const auto& fields : table) {
    if (fields[4] != "0") {
      continue;
    }
    const double v = std::strtod(fields[5].c_str(), nullptr);
    const auto& ref = find_row(single, fields[1], std::strtod(fields[2].c_str(), nullptr),
                               fields[3]);
    CHECK(v == ref.mean);
  }
  std::filesystem::remove(cfg.dump_trials_path);
}

TEST_CASE("doubling the trial count moves no mean by more than three standard errors") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kSumRateVsN;
  cfg.base.K = 6;
  cfg.base.L = 3;
  cfg.base.M = 6;
  cfg.base.N = 2;
  cfg.sweep = {2, 3, 5};
  cfg.methods = {"cklt", "antred", "dcklt"};
  cfg.seed = 33;
  cfg.trials = 300;
  const auto small = drmimo::run_experiment(cfg);
  cfg.trials = 600;
  const auto big = drmimo::run_experiment(cfg);
  int cells = 0;
  for (const auto& r : small) {
    if (r.metric != "sum_rate") {
      continue;
    }
    const auto& other = find_row(big, r.method, r.param, r.metric);
    REQUIRE(r.std_error > 0.0);
    CHECK(std::abs(other.mean - r.mean) < 3.0 * r.std_error);
    ++cells;
  }
  CHECK(cells == 9);
}

TEST_SUITE_END();

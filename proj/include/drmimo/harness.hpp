// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drmimo/channel.hpp"
#include "drmimo/common.hpp"

namespace drmimo {

enum class Scenario {
  kMiVsSnr,         // joint information vs SNR, fixed N
  kSumRateVsN,      // MMSE-SIC sum rate vs reduced dimension
  kSumRateVsM,      // sum rate vs antennas per RRH, fixed N
  kUserRateVsN,     // linear-MMSE mean user rate vs N
  kOutageVsN,       // per-user outage probability vs N
  kDensityScaling,  // per-user rate vs network density (K, L = K/2)
  kCsiSweep,        // whitened-system sum rate vs pilot SNR
  kDownlinkVsN,     // two-stage ZF max-min user rate vs N
  kFronthaulVsT,    // per-RRH fronthaul load vs coherence length
};

std::string to_string(Scenario s);

struct ExperimentConfig {
  Scenario scenario = Scenario::kSumRateVsN;
  SystemConfig base;
  std::vector<double> sweep;         // values of the scenario's swept axis
  std::vector<std::string> methods;  // method tags, scenario-appropriate
  int trials = 1000;
  std::uint64_t seed = 1;
  std::string out_path;
  double outage_threshold_bits = 4.0;
  std::string dump_trials_path;  // empty = no per-trial dump

  void validate() const;
};

struct ResultRow {
  std::string scenario;
  std::string method;
  double param = 0.0;
  std::string metric;
  double mean = 0.0;
  double std_error = 0.0;  // sample stddev / sqrt(trials)
  long trials = 0;
  std::uint64_t seed = 0;
};

// Runs the Monte Carlo experiment. Trials map to deterministic RNG
// substreams keyed by (seed, trial, lane) and results are aggregated in
// trial order, so the rows are bit-identical for any DIMRED_THREADS value.
// Configurations that cannot be evaluated (ZF with N L < K) yield rows with
// metric "infeasible" instead of failing.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

// Header `scenario,method,param,metric,mean,stderr,trials,seed`; rows sorted
// by (scenario, method, param, metric); doubles at full round-trip precision.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

// Exit code 0 on success, 1 on validation/usage errors, 2 on I/O errors.
int cli_main(int argc, char** argv);

}  // namespace drmimo

// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "drmimo/harness.hpp"

namespace drmimo {
namespace {

struct CliValues {
  int users = 8;
  int rrhs = 4;
  std::vector<int> antennas = {8};
  std::vector<int> dims;
  std::vector<double> snr_db = {5.0};
  double power_dbm = 9.0;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::vector<std::string> methods;
  std::vector<int> coherence = {200};
  std::vector<double> csi_snr_db;
  double threshold = 4.0;
  std::string out = "results.csv";
  std::string config_path;
  std::string dump_trials;
  double fc_ghz = 3.5;
  double pathloss_exponent = 2.7;
  double shadow_variance = 5.7;
  double area_m = 200.0;
  double user_height_m = 1.0;
  double rrh_height_m = 6.0;
};

void add_common(CLI::App* sub, CliValues& v) {
  sub->add_option("--users", v.users, "number of users K");
  sub->add_option("--rrhs", v.rrhs, "number of radio heads L");
  sub->add_option("--antennas", v.antennas,
                  "antennas per RRH M; a list is the sweep for sumrate-vs-m")
      ->delimiter(',');
  sub->add_option("--dims", v.dims, "reduced dimensions N1,N2,...")->delimiter(',');
  sub->add_option("--snr-db", v.snr_db,
                  "uplink SNR in dB; a list is the sweep for mi-vs-snr")
      ->delimiter(',');
  sub->add_option("--power-dbm", v.power_dbm, "per-RRH downlink power, dB over unit noise");
  sub->add_option("--trials", v.trials, "Monte Carlo trials");
  sub->add_option("--seed", v.seed, "master RNG seed");
  sub->add_option("--methods", v.methods, "method tags, comma separated")->delimiter(',');
  sub->add_option("--coherence", v.coherence,
                  "coherence block length; a list is the sweep for fronthaul")
      ->delimiter(',');
  sub->add_option("--csi-snr-db", v.csi_snr_db, "pilot SNR sweep in dB for csi-sweep")
      ->delimiter(',');
  sub->add_option("--threshold", v.threshold, "outage rate threshold, bits per channel use");
  sub->add_option("--out", v.out, "output CSV path");
  sub->add_option("--config", v.config_path, "JSON config file supplying defaults");
  sub->add_option("--dump-trials", v.dump_trials, "per-trial dump CSV path");
}

std::vector<std::string> default_methods(Scenario s) {
  switch (s) {
    case Scenario::kMiVsSnr:
      return {"cklt", "antred"};
    case Scenario::kSumRateVsN:
    case Scenario::kDownlinkVsN:
      return {"cklt", "dcklt", "antsel", "antred"};
    case Scenario::kSumRateVsM:
      return {"cklt"};
    case Scenario::kUserRateVsN:
    case Scenario::kDensityScaling:
    case Scenario::kCsiSweep:
      return {"cklt", "dcklt", "full"};
    case Scenario::kOutageVsN:
      return {"cklt", "dcklt", "antred"};
    case Scenario::kFronthaulVsT:
      return {"standard", "centralised-dr", "decentralised-dr"};
  }
  return {};
}

std::vector<double> default_axis(Scenario s, int m) {
  switch (s) {
    case Scenario::kMiVsSnr:
      return {-10, -5, 0, 5, 10, 15, 20, 25, 30};
    case Scenario::kSumRateVsN:
    case Scenario::kUserRateVsN:
    case Scenario::kOutageVsN:
    case Scenario::kDownlinkVsN: {
      std::vector<double> out;
      for (int n = 1; n <= m; ++n) out.push_back(n);
      return out;
    }
    case Scenario::kSumRateVsM:
      return {3, 4, 6, 8, 12};
    case Scenario::kDensityScaling:
      return {8, 16, 32};
    case Scenario::kCsiSweep:
      return {-10, -5, 0, 5, 10, 15, 20};
    case Scenario::kFronthaulVsT:
      return {10, 20, 50, 100, 200, 500, 1000, 2000};
  }
  return {};
}

template <typename T>
void take(const nlohmann::json& j, const char* key, CLI::App* sub, const std::string& flag,
          T& dst) {
  if (!j.contains(key)) return;
  if (!flag.empty() && sub->count(flag) > 0) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const std::exception& e) {
    throw ValidationError("config key '" + std::string(key) + "': " + e.what());
  }
}

// Scalars in the config's "base" object feed the same slots as their flags,
// so a flag on the command line still wins.
template <typename T>
void take_as_list(const nlohmann::json& j, const char* key, CLI::App* sub,
                  const std::string& flag, std::vector<T>& dst) {
  if (!j.contains(key) || sub->count(flag) > 0) return;
  try {
    dst = {j.at(key).get<T>()};
  } catch (const std::exception& e) {
    throw ValidationError("config key '" + std::string(key) + "': " + e.what());
  }
}

void apply_json(const nlohmann::json& j, Scenario scen, CLI::App* sub, CliValues& v,
                std::optional<std::vector<double>>& json_sweep) {
  if (!j.is_object()) throw ValidationError("config root must be a JSON object");
  if (j.contains("scenario")) {
    const auto name = j.at("scenario").get<std::string>();
    if (name != to_string(scen))
      throw ValidationError("config scenario '" + name + "' does not match subcommand '" +
                            to_string(scen) + "'");
  }
  take(j, "trials", sub, "--trials", v.trials);
  take(j, "seed", sub, "--seed", v.seed);
  take(j, "out_path", sub, "--out", v.out);
  take(j, "methods", sub, "--methods", v.methods);
  take(j, "outage_threshold", sub, "--threshold", v.threshold);
  take(j, "dump_trials", sub, "--dump-trials", v.dump_trials);
  if (j.contains("sweep")) {
    try {
      json_sweep = j.at("sweep").get<std::vector<double>>();
    } catch (const std::exception& e) {
      throw ValidationError(std::string("config key 'sweep': ") + e.what());
    }
  }
  if (!j.contains("base")) return;
  const nlohmann::json& b = j.at("base");
  if (!b.is_object()) throw ValidationError("config key 'base' must be an object");
  take(b, "users", sub, "--users", v.users);
  take(b, "rrhs", sub, "--rrhs", v.rrhs);
  take_as_list(b, "antennas", sub, "--antennas", v.antennas);
  take_as_list(b, "dims", sub, "--dims", v.dims);
  take_as_list(b, "snr_db", sub, "--snr-db", v.snr_db);
  take(b, "power_dbm", sub, "--power-dbm", v.power_dbm);
  take_as_list(b, "coherence", sub, "--coherence", v.coherence);
  take(b, "fc_ghz", sub, "", v.fc_ghz);
  take(b, "pathloss_exponent", sub, "", v.pathloss_exponent);
  take(b, "shadow_variance", sub, "", v.shadow_variance);
  take(b, "area_m", sub, "", v.area_m);
  take(b, "user_height_m", sub, "", v.user_height_m);
  take(b, "rrh_height_m", sub, "", v.rrh_height_m);
}

std::vector<double> to_doubles(const std::vector<int>& in) {
  return {in.begin(), in.end()};
}

ExperimentConfig build_config(Scenario scen, CLI::App* sub, const CliValues& v,
                              const std::optional<std::vector<double>>& json_sweep) {
  ExperimentConfig cfg;
  cfg.scenario = scen;

  // Sweep axis: explicit flag, then config "sweep", then scenario default.
  const auto axis_flag_set = [&](const std::string& flag) { return sub->count(flag) > 0; };
  std::vector<double> axis;
  switch (scen) {
    case Scenario::kMiVsSnr:
      if (axis_flag_set("--snr-db")) axis = v.snr_db;
      break;
    case Scenario::kSumRateVsN:
    case Scenario::kUserRateVsN:
    case Scenario::kOutageVsN:
    case Scenario::kDownlinkVsN:
      if (axis_flag_set("--dims")) axis = to_doubles(v.dims);
      break;
    case Scenario::kSumRateVsM:
      if (axis_flag_set("--antennas")) axis = to_doubles(v.antennas);
      break;
    case Scenario::kDensityScaling:
      break;  // density pairs come from "sweep" or the default
    case Scenario::kCsiSweep:
      if (axis_flag_set("--csi-snr-db")) axis = v.csi_snr_db;
      break;
    case Scenario::kFronthaulVsT:
      if (axis_flag_set("--coherence")) axis = to_doubles(v.coherence);
      break;
  }
  if (axis.empty() && json_sweep) axis = *json_sweep;

  if (v.antennas.empty()) throw ValidationError("--antennas needs at least one value");
  if (v.snr_db.empty()) throw ValidationError("--snr-db needs at least one value");
  if (v.coherence.empty()) throw ValidationError("--coherence needs at least one value");

  SystemConfig& base = cfg.base;
  base.K = v.users;
  base.L = v.rrhs;
  base.M = v.antennas[0];
  if (axis.empty()) axis = default_axis(scen, base.M);
  cfg.sweep = axis;

  if (scen == Scenario::kSumRateVsM)
    base.M = static_cast<int>(*std::max_element(axis.begin(), axis.end()));

  const bool n_is_swept =
      scen == Scenario::kSumRateVsN || scen == Scenario::kUserRateVsN ||
      scen == Scenario::kOutageVsN || scen == Scenario::kDownlinkVsN;
  if (n_is_swept)
    base.N = static_cast<int>(axis[0]);
  else if (!v.dims.empty())
    base.N = v.dims[0];
  else
    base.N = std::min(3, base.M);

  base.rho = std::pow(10.0, (scen == Scenario::kMiVsSnr ? axis[0] : v.snr_db[0]) / 10.0);
  base.P = std::pow(10.0, v.power_dbm / 10.0);
  base.T_coh = scen == Scenario::kFronthaulVsT ? std::max(base.K, v.coherence[0])
                                               : v.coherence[0];
  base.fc_ghz = v.fc_ghz;
  base.gamma = v.pathloss_exponent;
  base.sigma_psi_sq = v.shadow_variance;
  base.area_m = v.area_m;
  base.user_height_m = v.user_height_m;
  base.rrh_height_m = v.rrh_height_m;

  cfg.methods = v.methods.empty() ? default_methods(scen) : v.methods;
  cfg.trials = v.trials;
  cfg.seed = v.seed;
  cfg.out_path = v.out;
  cfg.outage_threshold_bits = v.threshold;
  cfg.dump_trials_path = v.dump_trials;
  return cfg;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Distributed dimension reduction simulator for massive MIMO C-RAN"};
  app.require_subcommand(1);
  CliValues v;
  const std::vector<std::pair<std::string, Scenario>> scenarios = {
      {"mi-vs-snr", Scenario::kMiVsSnr},       {"sumrate-vs-n", Scenario::kSumRateVsN},
      {"sumrate-vs-m", Scenario::kSumRateVsM}, {"userrate-vs-n", Scenario::kUserRateVsN},
      {"outage", Scenario::kOutageVsN},        {"density", Scenario::kDensityScaling},
      {"csi-sweep", Scenario::kCsiSweep},      {"downlink", Scenario::kDownlinkVsN},
      {"fronthaul", Scenario::kFronthaulVsT},
  };
  for (const auto& [name, scen] : scenarios) {
    CLI::App* sub = app.add_subcommand(name, "emit CSV for the " + name + " experiment");
    add_common(sub, v);
    (void)scen;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  Scenario scen = Scenario::kSumRateVsN;
  for (const auto& [name, s] : scenarios)
    if (name == sub->get_name()) scen = s;

  try {
    std::optional<std::vector<double>> json_sweep;
    if (sub->count("--config") > 0) {
      std::ifstream in(v.config_path);
      if (!in) throw IoError("cannot open config file: " + v.config_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const std::exception& e) {
        throw ValidationError("invalid JSON config: " + std::string(e.what()));
      }
      apply_json(j, scen, sub, v, json_sweep);
    }
    const ExperimentConfig cfg = build_config(scen, sub, v, json_sweep);
    const std::vector<ResultRow> rows = run_experiment(cfg);
    emit_csv(rows, cfg.out_path);
    std::cout << "wrote " << rows.size() << " rows to " << cfg.out_path << "\n";
    return 0;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace drmimo

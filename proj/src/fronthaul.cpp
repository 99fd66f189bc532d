// SPDX-License-Identifier: Apache-2.0
#include "drmimo/fronthaul.hpp"

namespace drmimo {

std::string to_string(FronthaulMethod method) {
  switch (method) {
    case FronthaulMethod::kStandard:
      return "standard";
    case FronthaulMethod::kCentralisedDR:
      return "centralised-dr";
    case FronthaulMethod::kDecentralisedDR:
      return "decentralised-dr";
  }
  throw ArgumentError("to_string: unknown fronthaul method");
}

namespace {

void check_dims(int k, int m, int n) {
  if (k < 1 || m < 1 || n < 1 || n > m)
    throw ArgumentError("fronthaul: require K,M >= 1 and 1 <= N <= M");
}

// Payload dimension per channel use: raw antennas or reduced streams.
double data_dim(FronthaulMethod method, int m, int n) {
  return method == FronthaulMethod::kStandard ? static_cast<double>(m)
                                              : static_cast<double>(n);
}

}  // namespace

CsiOverhead csi_overhead(FronthaulMethod method, int k, int m, int n) {
  check_dims(k, m, n);
  CsiOverhead oh;
  switch (method) {
    case FronthaulMethod::kStandard:
      oh.pilot_symbols = static_cast<double>(m) * k;
      break;
    case FronthaulMethod::kCentralisedDR:
      oh.pilot_symbols = static_cast<double>(m) * k;
      oh.filter_symbols = static_cast<double>(m) * n;
      break;
    case FronthaulMethod::kDecentralisedDR:
      oh.pilot_symbols = static_cast<double>(n) * k;
      break;
  }
  return oh;
}

FronthaulLoad mean_fronthaul_load(FronthaulMethod method, int k, int m, int n, int t_coh) {
  check_dims(k, m, n);
  if (t_coh < k)
    throw ArgumentError("mean_fronthaul_load: coherence block shorter than pilot phase");
  const CsiOverhead oh = csi_overhead(method, k, m, n);
  FronthaulLoad load;
  load.data_symbols_per_use = data_dim(method, m, n);
  load.overhead_per_block = oh.pilot_symbols + oh.filter_symbols;
  load.mean_per_use =
      (load.data_symbols_per_use * (t_coh - k) + load.overhead_per_block) / t_coh;
  return load;
}

double reduction_ratio(FronthaulMethod method, int m, int n) {
  check_dims(1, m, n);
  return data_dim(method, m, n) / static_cast<double>(m);
}

}  // namespace drmimo

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "drmimo/common.hpp"

namespace drmimo {

// Where channel estimation and filter design happen, which fixes the
// per-coherence-block fronthaul traffic.
enum class FronthaulMethod {
  kStandard,         // raw M-dim samples forwarded, no filter traffic
  kCentralisedDR,    // pilots forwarded raw, filters shipped back to RRHs
  kDecentralisedDR,  // RRHs estimate and reduce locally, N-dim samples only
};

std::string to_string(FronthaulMethod method);

// Per-block CSI-related overhead, in complex symbols per RRH:
// pilot forwarding plus any filter download.
struct CsiOverhead {
  double pilot_symbols = 0.0;   // forwarded pilot symbols per block, K uses
  double filter_symbols = 0.0;  // filter coefficients sent back per block
};

CsiOverhead csi_overhead(FronthaulMethod method, int k, int m, int n);

struct FronthaulLoad {
  double data_symbols_per_use = 0.0;  // payload dimension per channel use
  double overhead_per_block = 0.0;    // total CSI symbols per coherence block
  double mean_per_use = 0.0;          // blended load per channel use
};

// K of the T_coh uses carry pilots; the rest carry payload. The mean load is
// (data_dim (T_coh - K) + overhead) / T_coh.
FronthaulLoad mean_fronthaul_load(FronthaulMethod method, int k, int m, int n, int t_coh);

// Asymptotic (T_coh -> inf) load of `method` relative to kStandard.
double reduction_ratio(FronthaulMethod method, int m, int n);

}  // namespace drmimo

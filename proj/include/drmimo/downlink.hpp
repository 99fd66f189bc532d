// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "drmimo/common.hpp"
#include "drmimo/dimred.hpp"

namespace drmimo {

// Two-stage precoders: outer B_l (re-used uplink filters) and inner
// F_l = U_l diag(sqrt(gamma)). The composite channel sum_l H_bar' B_l F_l
// equals diag(sqrt(gamma)).
struct DownlinkPrecoders {
  std::vector<ComplexMatrix> B;  // L matrices, M x N, semi-orthogonal
  std::vector<ComplexMatrix> U;  // L matrices, N x K, unnormalized directions
  std::vector<ComplexMatrix> F;  // L matrices, N x K
  RealVector gamma;              // per-user effective SNR, linear
};

std::vector<ComplexMatrix> outer_from_uplink(const FilterBank& fb);

// Minimum-norm right inverse of the stacked effective channel
// G = [H_bar_1'B_1 ... H_bar_L'B_L], split per RRH so that
// sum_l H_bar_l' B_l U_l = I_K. Throws InfeasibleZfError if rank(G) < K.
std::vector<ComplexMatrix> zf_directions(const std::vector<ComplexMatrix>& h_bar,
                                         const std::vector<ComplexMatrix>& b);

// Max-min rate allocation under per-RRH powers sum_k gamma_k [U_l'U_l]_{k,k}
// <= P; the optimum is uniform, gamma_k = P / max_l sum_k [U_l'U_l]_{k,k}.
RealVector maxmin_power_allocation(const std::vector<ComplexMatrix>& u, double P);

RealVector downlink_rates(const RealVector& gamma);

struct RrhPowerReport {
  RealVector power;             // tr(F_l' F_l) per RRH
  double limit = 0.0;           // configured P
  std::vector<int> violations;  // RRHs exceeding the limit beyond 1e-9 relative
};

RrhPowerReport verify_transmit_power(const std::vector<ComplexMatrix>& f, double P);

// Full pipeline: outer precoders from the uplink bank, ZF directions on the
// raw channels, max-min allocation, inner precoders.
DownlinkPrecoders design_downlink(const FilterBank& fb, const std::vector<ComplexMatrix>& h_bar,
                                  double P);

}  // namespace drmimo

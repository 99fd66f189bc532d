// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "drmimo/common.hpp"
#include "drmimo/dimred.hpp"

namespace drmimo {

struct RateReport {
  double sum_rate_bits = 0.0;   // joint information / MMSE-SIC sum rate
  RealVector user_sinr;         // linear, per user
  RealVector user_rate_bits;    // log2(1 + SINR)
  double delta_bits = 0.0;      // information lost to reduction
  int gram_rank = 0;            // rank of sum_l H_rd' H_rd
};

// log2 det(I_K + rho sum_l H_rd[l]' H_rd[l]); the sum rate achievable with
// joint detection and successive cancellation.
double joint_mutual_information(const ReducedChannelSet& rd, double rho);

/// Per-user linear-MMSE SINRs and rates:
// SINR_k = 1 / [(I_K + rho sum H_rd' H_rd)^{-1}]_{k,k} - 1.
std::pair<RealVector, RealVector> mmse_user_metrics(const ReducedChannelSet& rd, double rho);

// Joint information of the unreduced signals minus that of the reduced
// signals; nonnegative for any semi-orthogonal filter bank.
double information_loss(const std::vector<ComplexMatrix>& h, const FilterBank& fb, double rho);

// High-SNR limit of the loss, log2[det(sum H'H) / det(sum H_rd'H_rd)].
// Throws RankDeficientError when the reduced Gram is not full rank.
double high_snr_loss_limit(const std::vector<ComplexMatrix>& h, const FilterBank& fb);

// Fraction of (user, trial) rate samples falling below the threshold.
double outage_stats(const std::vector<RealVector>& user_rates_per_trial, double threshold_bits);

// Eigenvalue count above kGramRankRel times the largest one.
int gram_rank(const ReducedChannelSet& rd);

// Full uplink report for one channel realization and filter bank.
RateReport evaluate_uplink(const std::vector<ComplexMatrix>& h, const FilterBank& fb, double rho);

}  // namespace drmimo

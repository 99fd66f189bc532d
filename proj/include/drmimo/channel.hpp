// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <random>
#include <vector>

#include "drmimo/common.hpp"
#include "drmimo/numerics.hpp"

namespace drmimo {

// Scalar system parameters. SNR-like quantities are linear (unit noise
// power); heights and the coverage square are in metres.
struct SystemConfig {
  int K = 8;   // users
  int L = 4;   // radio heads
  int M = 8;   // antennas per radio head
  int N = 3;   // reduced signal dimension
  double rho = 3.1622776601683795;  // uplink SNR, linear (5 dB)
  double P = 7.943282347242816;     // per-RRH downlink power, linear (9 dB)
  double fc_ghz = 3.5;
  double gamma = 2.7;
  double sigma_psi_sq = 5.7;  // shadow-fading variance, dB^2
  double area_m = 200.0;
  double user_height_m = 1.0;
  double rrh_height_m = 6.0;
  int T_coh = 200;  // coherence block length, channel uses
  std::optional<double> rho_csi;  // pilot SNR, linear; empty = perfect CSI

  void validate() const;
};

struct Geometry {
  RealMatrix user_xy;  // K x 2
  RealMatrix rrh_xy;   // L x 2
  RealMatrix dist;     // L x K, includes the height difference
};

struct SlowFading {
  RealMatrix beta;        // L x K, linear
  RealMatrix beta_db;     // L x K
  RealMatrix psi_shadow;  // L x K, dB
  RealVector p;           // K power-control coefficients, linear
};

// Per-RRH channels. H[l] = H_bar[l] * diag(sqrt(p)) by construction; all
// rate computations operate on the power-adjusted H.
struct ChannelSet {
  std::vector<ComplexMatrix> H;      // L matrices, M x K
  std::vector<ComplexMatrix> H_bar;  // raw channels
};

// MMSE channel estimates with per-(RRH, user) scalar error covariance
// c(l,k) * I_M. The whitening matrices are assembled on demand from C.
struct CsiModel {
  std::vector<ComplexMatrix> H_hat;  // estimated power-adjusted channels
  RealMatrix C;                      // L x K error covariance scalars
};

// 3-D distances between planar positions with an antenna-height offset.
RealMatrix pairwise_distances(const RealMatrix& user_xy, const RealMatrix& rrh_xy,
                              double user_height_m, double rrh_height_m);

Geometry sample_geometry(const SystemConfig& cfg, std::mt19937_64& rng);

// Log-distance model with shadow term, in dB. The positive intercept is
// cancelled by power control everywhere it matters.
double pathloss_db(double d_m, const SystemConfig& cfg, double psi_db);

// p_k = L / sum_l beta(l,k), so each user's mean power-adjusted gain is one.
RealVector power_control(const RealMatrix& beta);

// Pathloss + shadow fading + power control for a sampled geometry.
SlowFading make_slow_fading(const Geometry& geo, const SystemConfig& cfg, std::mt19937_64& rng);

// Independent Rayleigh fading: entry (i,k) of H_bar[l] ~ CN(0, beta(l,k)).
ChannelSet sample_channels(const SlowFading& sf, const SystemConfig& cfg, std::mt19937_64& rng);

// MMSE estimation from orthogonal pilots at SNR rho_csi. Estimates and
// errors are statistically orthogonal; c(l,k) = q/(1 + rho_csi q) with
// q = p_k beta(l,k).
CsiModel estimate_csi(const ChannelSet& ch, const SlowFading& sf, double rho_csi,
                      std::mt19937_64& rng);

/// Equivalent system with unit-covariance noise: H_check[l] =
// (I + rho sum_k c(l,k) I)^{-1/2} H_hat[l]. The returned set absorbs power
// control, so H_bar == H.
ChannelSet whiten(const CsiModel& csi, double rho);

}  // namespace drmimo

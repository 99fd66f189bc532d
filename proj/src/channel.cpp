// SPDX-License-Identifier: Apache-2.0
#include "drmimo/channel.hpp"

#include <cmath>

#include "drmimo/rng.hpp"

namespace drmimo {

void SystemConfig::validate() const {
  if (K < 1 || L < 1 || M < 1 || N < 1) {
    throw ArgumentError("SystemConfig: K, L, M, N must be >= 1");
  }
  if (N > M) {
    throw ArgumentError("SystemConfig: N must not exceed M");
  }
  if (!(rho > 0.0) || !(P > 0.0)) {
    throw ArgumentError("SystemConfig: rho and P must be positive");
  }
  if (T_coh < K) {
    throw ArgumentError("SystemConfig: coherence block must cover the K pilot uses");
  }
  if (!(area_m > 0.0) || !(fc_ghz > 0.0)) {
    throw ArgumentError("SystemConfig: area and carrier frequency must be positive");
  }
  if (rho_csi && !(*rho_csi > 0.0)) {
    throw ArgumentError("SystemConfig: rho_csi must be positive when set");
  }
}

RealMatrix pairwise_distances(const RealMatrix& user_xy, const RealMatrix& rrh_xy,
                              double user_height_m, double rrh_height_m) {
  if (user_xy.cols() != 2 || rrh_xy.cols() != 2) {
    throw ArgumentError("pairwise_distances: positions must be (count x 2)");
  }
  const double dh = rrh_height_m - user_height_m;
  RealMatrix dist(rrh_xy.rows(), user_xy.rows());
  for (Eigen::Index l = 0; l < rrh_xy.rows(); ++l) {
    for (Eigen::Index k = 0; k < user_xy.rows(); ++k) {
      const double dx = rrh_xy(l, 0) - user_xy(k, 0);
      const double dy = rrh_xy(l, 1) - user_xy(k, 1);
      dist(l, k) = std::sqrt(dx * dx + dy * dy + dh * dh);
    }
  }
  return dist;
}

Geometry sample_geometry(const SystemConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  Geometry geo;
  geo.user_xy.resize(cfg.K, 2);
  geo.rrh_xy.resize(cfg.L, 2);
  for (int k = 0; k < cfg.K; ++k) {
    geo.user_xy(k, 0) = uniform01(rng) * cfg.area_m;
    geo.user_xy(k, 1) = uniform01(rng) * cfg.area_m;
  }
  for (int l = 0; l < cfg.L; ++l) {
    geo.rrh_xy(l, 0) = uniform01(rng) * cfg.area_m;
    geo.rrh_xy(l, 1) = uniform01(rng) * cfg.area_m;
  }
  geo.dist = pairwise_distances(geo.user_xy, geo.rrh_xy, cfg.user_height_m, cfg.rrh_height_m);
  return geo;
}

double pathloss_db(double d_m, const SystemConfig& cfg, double psi_db) {
  if (!(d_m > 0.0)) {
    throw ArgumentError("pathloss_db: distance must be positive");
  }
  return 147.5 - 20.0 * std::log10(cfg.fc_ghz) - 10.0 * cfg.gamma * std::log10(d_m) + psi_db;
}

RealVector power_control(const RealMatrix& beta) {
  ensure_finite(beta, "power_control beta");
  const Eigen::Index L = beta.rows();
  const Eigen::Index K = beta.cols();
  RealVector p(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double s = beta.col(k).sum();
    if (!(s > 0.0)) {
      throw DegenerateInputError("power_control: nonpositive gain sum for a user");
    }
    p(k) = static_cast<double>(L) / s;
  }
  return p;
}

SlowFading make_slow_fading(const Geometry& geo, const SystemConfig& cfg, std::mt19937_64& rng) {
  SlowFading sf;
  const Eigen::Index L = geo.dist.rows();
  const Eigen::Index K = geo.dist.cols();
  sf.psi_shadow.resize(L, K);
  sf.beta_db.resize(L, K);
  sf.beta.resize(L, K);
  const double psi_std = std::sqrt(cfg.sigma_psi_sq);
  for (Eigen::Index l = 0; l < L; ++l) {
    for (Eigen::Index k = 0; k < K; ++k) {
      sf.psi_shadow(l, k) = psi_std * normal(rng);
      sf.beta_db(l, k) = pathloss_db(geo.dist(l, k), cfg, sf.psi_shadow(l, k));
      sf.beta(l, k) = std::pow(10.0, sf.beta_db(l, k) / 10.0);
    }
  }
  sf.p = power_control(sf.beta);
  return sf;
}

ChannelSet sample_channels(const SlowFading& sf, const SystemConfig& cfg, std::mt19937_64& rng) {
  const Eigen::Index L = sf.beta.rows();
  const Eigen::Index K = sf.beta.cols();
  ChannelSet ch;
  ch.H_bar.reserve(L);
  ch.H.reserve(L);
  for (Eigen::Index l = 0; l < L; ++l) {
    ComplexMatrix h_bar(cfg.M, K);
    for (Eigen::Index k = 0; k < K; ++k) {
      const double sd = std::sqrt(sf.beta(l, k));
      for (int i = 0; i < cfg.M; ++i) {
        h_bar(i, k) = sd * complex_normal(rng);
      }
    }
    ComplexMatrix h = h_bar;
    for (Eigen::Index k = 0; k < K; ++k) {
      h.col(k) *= std::sqrt(sf.p(k));
    }
    ch.H_bar.push_back(std::move(h_bar));
    ch.H.push_back(std::move(h));
  }
  return ch;
}

CsiModel estimate_csi(const ChannelSet& ch, const SlowFading& sf, double rho_csi,
                      std::mt19937_64& rng) {
  if (!(rho_csi > 0.0)) {
    throw ArgumentError("estimate_csi: rho_csi must be positive");
  }
  const Eigen::Index L = sf.beta.rows();
  const Eigen::Index K = sf.beta.cols();
  CsiModel csi;
  csi.C.resize(L, K);
  csi.H_hat.reserve(L);
  for (Eigen::Index l = 0; l < L; ++l) {
    const Eigen::Index M = ch.H[static_cast<std::size_t>(l)].rows();
    ComplexMatrix h_hat(M, K);
    for (Eigen::Index k = 0; k < K; ++k) {
      const double q = sf.p(k) * sf.beta(l, k);  // prior variance per antenna
      const double denom = 1.0 + rho_csi * q;
      csi.C(l, k) = q / denom;
      // h_hat = a * (sqrt(rho_csi) h + pilot noise), the MMSE estimate given
      // the already-drawn channel.
      const double a = std::sqrt(rho_csi) * q / denom;
      const double gain = rho_csi * q / denom;
      for (Eigen::Index i = 0; i < M; ++i) {
        h_hat(i, k) = gain * ch.H[static_cast<std::size_t>(l)](i, k) + a * complex_normal(rng);
      }
    }
    csi.H_hat.push_back(std::move(h_hat));
  }
  return csi;
}

ChannelSet whiten(const CsiModel& csi, double rho) {
  if (!(rho > 0.0)) {
    throw ArgumentError("whiten: rho must be positive");
  }
  ChannelSet out;
  const auto L = csi.H_hat.size();
  out.H.reserve(L);
  out.H_bar.reserve(L);
  for (std::size_t l = 0; l < L; ++l) {
    const Eigen::Index M = csi.H_hat[l].rows();
    ComplexMatrix omega = ComplexMatrix::Identity(M, M);
    omega *= 1.0 + rho * csi.C.row(static_cast<Eigen::Index>(l)).sum();
    const HermitianMatrix s = inv_sqrt_hpd(HermitianMatrix(omega));
    ComplexMatrix h_check = s.matrix() * csi.H_hat[l];
    out.H.push_back(h_check);
    out.H_bar.push_back(std::move(h_check));
  }
  return out;
}

}  // namespace drmimo

// SPDX-License-Identifier: Apache-2.0
#include "drmimo/rates.hpp"

#include <algorithm>
#include <cmath>

namespace drmimo {

namespace {

ComplexMatrix reduced_gram(const ReducedChannelSet& rd) {
  if (rd.H_rd.empty()) {
    throw ArgumentError("reduced Gram: empty channel set");
  }
  const Eigen::Index k = rd.H_rd.front().cols();
  ComplexMatrix gram = ComplexMatrix::Zero(k, k);
  for (const auto& h : rd.H_rd) {
    if (h.cols() != k) {
      throw ArgumentError("reduced Gram: user-count mismatch");
    }
    gram.noalias() += h.adjoint() * h;
  }
  return 0.5 * (gram + gram.adjoint().eval());
}

double logdet2_psd(const ComplexMatrix& gram) {
  // log2 det of a PSD Gram in the log domain via its eigenvalues.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("logdet2_psd: eigendecomposition failed");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    acc += std::log2(es.eigenvalues()(i));
  }
  return acc;
}

int rank_of(const ComplexMatrix& gram) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("gram_rank: eigendecomposition failed");
  }
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(lmax > 0.0)) {
    return 0;
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    if (es.eigenvalues()(i) > kGramRankRel * lmax) {
      ++rank;
    }
  }
  return rank;
}

}  // namespace

double joint_mutual_information(const ReducedChannelSet& rd, double rho) {
  return logdet2_id_plus(HermitianMatrix(rho * reduced_gram(rd)));
}

std::pair<RealVector, RealVector> mmse_user_metrics(const ReducedChannelSet& rd, double rho) {
  const ComplexMatrix gram = reduced_gram(rd);
  const Eigen::Index k = gram.rows();
  ComplexMatrix a = ComplexMatrix::Identity(k, k) + rho * gram;
  const ComplexMatrix inv =
      solve_hpd(HermitianMatrix(0.5 * (a + a.adjoint().eval())), ComplexMatrix::Identity(k, k));
  RealVector sinr(k);
  RealVector rate(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    sinr(i) = std::max(1.0 / std::real(inv(i, i)) - 1.0, 0.0);
    rate(i) = std::log2(1.0 + sinr(i));
  }
  return {std::move(sinr), std::move(rate)};
}

double information_loss(const std::vector<ComplexMatrix>& h, const FilterBank& fb, double rho) {
  FilterBank identity;
  identity.A.reserve(h.size());
  for (const auto& h_l : h) {
    identity.A.push_back(ComplexMatrix::Identity(h_l.rows(), h_l.rows()));
  }
  const double full = joint_mutual_information(reduce(h, identity), rho);
  const double reduced = joint_mutual_information(reduce(h, fb), rho);
  return full - reduced;
}

double high_snr_loss_limit(const std::vector<ComplexMatrix>& h, const FilterBank& fb) {
  FilterBank identity;
  identity.A.reserve(h.size());
  for (const auto& h_l : h) {
    identity.A.push_back(ComplexMatrix::Identity(h_l.rows(), h_l.rows()));
  }
  const ComplexMatrix full_gram = reduced_gram(reduce(h, identity));
  const ComplexMatrix red_gram = reduced_gram(reduce(h, fb));
  const Eigen::Index k = red_gram.rows();
  if (rank_of(red_gram) < k) {
    throw RankDeficientError("high_snr_loss_limit: reduced Gram is rank deficient");
  }
  return logdet2_psd(full_gram) - logdet2_psd(red_gram);
}

double outage_stats(const std::vector<RealVector>& user_rates_per_trial, double threshold_bits) {
  if (!(threshold_bits > 0.0)) {
    throw ArgumentError("outage_stats: threshold must be positive");
  }
  long total = 0;
  long below = 0;
  for (const auto& rates : user_rates_per_trial) {
    total += rates.size();
    below += (rates.array() < threshold_bits).count();
  }
  if (total == 0) {
    throw ArgumentError("outage_stats: no rate samples");
  }
  return static_cast<double>(below) / static_cast<double>(total);
}

int gram_rank(const ReducedChannelSet& rd) { return rank_of(reduced_gram(rd)); }

RateReport evaluate_uplink(const std::vector<ComplexMatrix>& h, const FilterBank& fb, double rho) {
  const ReducedChannelSet rd = reduce(h, fb);
  RateReport report;
  report.sum_rate_bits = joint_mutual_information(rd, rho);
  std::tie(report.user_sinr, report.user_rate_bits) = mmse_user_metrics(rd, rho);
  report.delta_bits = information_loss(h, fb, rho);
  report.gram_rank = gram_rank(rd);
  return report;
}

}  // namespace drmimo

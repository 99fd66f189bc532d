// SPDX-License-Identifier: Apache-2.0
#include "drmimo/downlink.hpp"

#include <cmath>
#include <string>

#include "drmimo/numerics.hpp"

namespace drmimo {

std::vector<ComplexMatrix> outer_from_uplink(const FilterBank& fb) {
  if (fb.A.empty()) throw ArgumentError("outer_from_uplink: empty filter bank");
  return fb.A;
}

std::vector<ComplexMatrix> zf_directions(const std::vector<ComplexMatrix>& h_bar,
                                         const std::vector<ComplexMatrix>& b) {
  if (h_bar.empty() || h_bar.size() != b.size())
    throw ArgumentError("zf_directions: channel/filter count mismatch");
  const Eigen::Index l_count = static_cast<Eigen::Index>(h_bar.size());
  const Eigen::Index k = h_bar[0].cols();
  const Eigen::Index n = b[0].cols();

  // G = [H_bar_1'B_1 ... H_bar_L'B_L], K x (N L).
  ComplexMatrix g(k, n * l_count);
  for (Eigen::Index l = 0; l < l_count; ++l) {
    if (h_bar[l].cols() != k || b[l].cols() != n || h_bar[l].rows() != b[l].rows())
      throw ArgumentError("zf_directions: inconsistent shapes at RRH " + std::to_string(l));
    g.block(0, l * n, k, n) = h_bar[l].adjoint() * b[l];
  }
  ensure_finite(g, "zf_directions: effective channel");

  ComplexMatrix gram = g * g.adjoint();
  gram = ComplexMatrix(0.5 * (gram + gram.adjoint()));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("zf_directions: eigensolver failed on G G'");
  const double lmax = es.eigenvalues().maxCoeff();
  if (lmax <= 0.0 || es.eigenvalues().minCoeff() < 1e-10 * lmax)
    throw InfeasibleZfError("zf_directions: stacked effective channel is rank deficient");

  // Minimum-norm right inverse U_stack = G' (G G')^{-1}.
  const ComplexMatrix u_stack = solve_hpd(HermitianMatrix(gram), g).adjoint();
  std::vector<ComplexMatrix> u(static_cast<std::size_t>(l_count));
  for (Eigen::Index l = 0; l < l_count; ++l)
    u[static_cast<std::size_t>(l)] = u_stack.block(l * n, 0, n, k);
  return u;
}

RealVector maxmin_power_allocation(const std::vector<ComplexMatrix>& u, double P) {
  if (u.empty()) throw ArgumentError("maxmin_power_allocation: empty direction set");
  if (!(P > 0.0)) throw ArgumentError("maxmin_power_allocation: power budget must be positive");
  const Eigen::Index k = u[0].cols();
  double worst = 0.0;
  for (const auto& ul : u) {
    if (ul.cols() != k)
      throw ArgumentError("maxmin_power_allocation: inconsistent user counts");
    worst = std::max(worst, ul.squaredNorm());
  }
  if (worst <= 0.0)
    throw DegenerateInputError("maxmin_power_allocation: all directions are zero");
  return RealVector::Constant(k, P / worst);
}

RealVector downlink_rates(const RealVector& gamma) {
  RealVector rates(gamma.size());
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    if (!(gamma[i] >= 0.0) || !std::isfinite(gamma[i]))
      throw ArgumentError("downlink_rates: SNRs must be finite and nonnegative");
    rates[i] = std::log2(1.0 + gamma[i]);
  }
  return rates;
}

RrhPowerReport verify_transmit_power(const std::vector<ComplexMatrix>& f, double P) {
  if (f.empty()) throw ArgumentError("verify_transmit_power: empty precoder set");
  if (!(P > 0.0)) throw ArgumentError("verify_transmit_power: power budget must be positive");
  RrhPowerReport rep;
  rep.limit = P;
  rep.power.resize(static_cast<Eigen::Index>(f.size()));
  for (std::size_t l = 0; l < f.size(); ++l) {
    const double p = f[l].squaredNorm();
    rep.power[static_cast<Eigen::Index>(l)] = p;
    if (p > P * (1.0 + 1e-9)) rep.violations.push_back(static_cast<int>(l));
  }
  return rep;
}

DownlinkPrecoders design_downlink(const FilterBank& fb, const std::vector<ComplexMatrix>& h_bar,
                                  double P) {
  DownlinkPrecoders pre;
  pre.B = outer_from_uplink(fb);
  pre.U = zf_directions(h_bar, pre.B);
  pre.gamma = maxmin_power_allocation(pre.U, P);
  const double scale = std::sqrt(pre.gamma[0]);
  pre.F.reserve(pre.U.size());
  for (const auto& ul : pre.U) pre.F.push_back(ul * scale);
  return pre;
}

}  // namespace drmimo

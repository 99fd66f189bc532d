// SPDX-License-Identifier: Apache-2.0
#include "drmimo/dimred.hpp"

#include <algorithm>
#include <cmath>

#include "drmimo/rng.hpp"

namespace drmimo {

namespace {

HermitianMatrix symmetrized(const ComplexMatrix& m) {
  return HermitianMatrix(0.5 * (m + m.adjoint().eval()));
}

// Joint information objective log2 det(I_K + rho sum_l H_l' A_l A_l' H_l).
double joint_objective(const std::vector<ComplexMatrix>& h, const std::vector<ComplexMatrix>& a,
                       double rho) {
  const Eigen::Index k = h.front().cols();
  ComplexMatrix gram = ComplexMatrix::Zero(k, k);
  for (std::size_t l = 0; l < h.size(); ++l) {
    const ComplexMatrix rd = a[l].adjoint() * h[l];
    gram.noalias() += rd.adjoint() * rd;
  }
  return logdet2_id_plus(symmetrized(rho * gram));
}

}  // namespace

ComplexMatrix klt_filter(const ComplexMatrix& h_l, double /*rho*/, int n) {
  ensure_finite(h_l, "klt_filter channel");
  return hermitian_top_eigvecs(symmetrized(h_l * h_l.adjoint()), n);
}

HermitianMatrix compute_Q(const std::vector<ComplexMatrix>& h, const std::vector<ComplexMatrix>& a,
                          int l, double rho) {
  if (h.size() != a.size() || l < 0 || static_cast<std::size_t>(l) >= h.size()) {
    throw ArgumentError("compute_Q: inconsistent sizes or RRH index");
  }
  const Eigen::Index k = h.front().cols();
  ComplexMatrix gram = ComplexMatrix::Identity(k, k);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (static_cast<int>(j) == l) continue;
    const ComplexMatrix rd = a[j].adjoint() * h[j];
    gram.noalias() += rho * (rd.adjoint() * rd);
  }
  const ComplexMatrix q = solve_hpd(symmetrized(gram), ComplexMatrix::Identity(k, k));
  return symmetrized(q);
}

ComplexMatrix cklt_filter(const ComplexMatrix& h_l, const HermitianMatrix& q_l, double /*rho*/,
                          int n) {
  ensure_finite(h_l, "cklt_filter channel");
  if (q_l.dim() != h_l.cols()) {
    throw ArgumentError("cklt_filter: Q dimension must match the user count");
  }
  return hermitian_top_eigvecs(symmetrized(h_l * q_l.matrix() * h_l.adjoint()), n);
}

BcaResult bca_joint_design(const std::vector<ComplexMatrix>& h, double rho, int n, int max_sweeps,
                           double rel_tol) {
  if (h.empty()) {
    throw ArgumentError("bca_joint_design: empty channel set");
  }
  if (max_sweeps < 1) {
    throw ArgumentError("bca_joint_design: max_sweeps must be >= 1");
  }
  const int big_l = static_cast<int>(h.size());
  BcaResult res;
  res.filters.method_tag = FilterMethod::CKLT;
  res.filters.A.reserve(h.size());
  for (const auto& h_l : h) {
    res.filters.A.push_back(klt_filter(h_l, rho, n));
  }
  res.objective_trace.push_back(joint_objective(h, res.filters.A, rho));

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double sweep_start = res.objective_trace.back();
    for (int l = 0; l < big_l; ++l) {
      const HermitianMatrix q = compute_Q(h, res.filters.A, l, rho);
      res.filters.A[static_cast<std::size_t>(l)] = cklt_filter(h[static_cast<std::size_t>(l)], q, rho, n);
      res.objective_trace.push_back(joint_objective(h, res.filters.A, rho));
    }
    res.sweeps_run = sweep + 1;
    const double now = res.objective_trace.back();
    const double denom = std::max(std::abs(sweep_start), 1e-12);
    if ((now - sweep_start) / denom < rel_tol) {
      break;
    }
  }
  return res;
}

PsiSet psi_set(const SlowFading& sf, int m) {
  if (m < 1) {
    throw ArgumentError("psi_set: antenna count must be >= 1");
  }
  PsiSet out;
  const Eigen::Index big_l = sf.beta.rows();
  out.psi.reserve(static_cast<std::size_t>(big_l));
  for (Eigen::Index j = 0; j < big_l; ++j) {
    out.psi.push_back(sf.p.cwiseProduct(sf.beta.row(j).transpose()) * static_cast<double>(m));
  }
  return out;
}

ComplexMatrix dcklt_filter(const ComplexMatrix& h_l, const PsiSet& psi, int l, double rho, int n) {
  if (l < 0 || static_cast<std::size_t>(l) >= psi.psi.size()) {
    throw ArgumentError("dcklt_filter: RRH index out of range");
  }
  const Eigen::Index k = h_l.cols();
  RealVector diag = RealVector::Ones(k);
  for (std::size_t j = 0; j < psi.psi.size(); ++j) {
    if (static_cast<int>(j) == l) continue;
    if (psi.psi[j].size() != k) {
      throw ArgumentError("dcklt_filter: Psi dimension mismatch");
    }
    if ((psi.psi[j].array() < 0.0).any()) {
      throw ValidationError("dcklt_filter: Psi entries must be nonnegative");
    }
    diag += rho * psi.psi[j];
  }
  const ComplexMatrix t = h_l * diag.cwiseInverse().asDiagonal() * h_l.adjoint();
  return hermitian_top_eigvecs(symmetrized(t), n);
}

FilterBank antenna_selection_filters(const std::vector<ComplexMatrix>& h, double rho, int n) {
  if (h.empty()) {
    throw ArgumentError("antenna_selection_filters: empty channel set");
  }
  const int big_l = static_cast<int>(h.size());
  const Eigen::Index m = h.front().rows();
  const Eigen::Index k = h.front().cols();
  if (n < 1 || n > m) {
    throw ArgumentError("antenna_selection_filters: need 1 <= N <= M");
  }
  for (const auto& h_l : h) {
    if (h_l.rows() != m || h_l.cols() != k) {
      throw ArgumentError("antenna_selection_filters: channel shape mismatch");
    }
  }

  std::vector<std::vector<bool>> active(static_cast<std::size_t>(big_l),
                                        std::vector<bool>(static_cast<std::size_t>(m), true));
  std::vector<int> count(static_cast<std::size_t>(big_l), static_cast<int>(m));

  ComplexMatrix gram = ComplexMatrix::Identity(k, k);
  for (int l = 0; l < big_l; ++l) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const ComplexVector g = h[static_cast<std::size_t>(l)].row(i).adjoint();
      gram.noalias() += rho * (g * g.adjoint());
    }
  }

  int removals = big_l * (static_cast<int>(m) - n);
  while (removals-- > 0) {
    gram = 0.5 * (gram + gram.adjoint().eval());
    Eigen::LLT<ComplexMatrix> llt(gram);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("antenna_selection_filters: Gram factorization failed");
    }
    double best = -1.0;
    int best_l = -1;
    Eigen::Index best_i = -1;
    for (int l = 0; l < big_l; ++l) {
      if (count[static_cast<std::size_t>(l)] <= n) continue;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (!active[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)]) continue;
        const ComplexVector g = h[static_cast<std::size_t>(l)].row(i).adjoint();
        // Determinant-lemma downdate: removing row g scales det by
        // 1 - rho g' G^{-1} g, which stays positive while I_K remains.
        const double delta = 1.0 - rho * std::real(g.dot(llt.solve(g)));
        if (delta > best) {
          best = delta;
          best_l = l;
          best_i = i;
        }
      }
    }
    const ComplexVector g = h[static_cast<std::size_t>(best_l)].row(best_i).adjoint();
    gram.noalias() -= rho * (g * g.adjoint());
    active[static_cast<std::size_t>(best_l)][static_cast<std::size_t>(best_i)] = false;
    --count[static_cast<std::size_t>(best_l)];
  }

  FilterBank fb;
  fb.method_tag = FilterMethod::AntSel;
  fb.A.reserve(static_cast<std::size_t>(big_l));
  for (int l = 0; l < big_l; ++l) {
    ComplexMatrix a = ComplexMatrix::Zero(m, n);
    int col = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (active[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)]) {
        a(i, col++) = 1.0;
      }
    }
    fb.A.push_back(std::move(a));
  }
  return fb;
}

FilterBank antenna_reduction_filters(int m, int n, int l) {
  if (n < 1 || n > m || l < 1) {
    throw ArgumentError("antenna_reduction_filters: need 1 <= N <= M and L >= 1");
  }
  FilterBank fb;
  fb.method_tag = FilterMethod::AntRed;
  fb.A.assign(static_cast<std::size_t>(l), ComplexMatrix::Identity(m, n));
  return fb;
}

FilterBank random_filters(int m, int n, int l, std::mt19937_64& rng) {
  if (n < 1 || n > m || l < 1) {
    throw ArgumentError("random_filters: need 1 <= N <= M and L >= 1");
  }
  FilterBank fb;
  fb.method_tag = FilterMethod::Random;
  fb.A.reserve(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) {
    ComplexMatrix raw(m, n);
    for (int c = 0; c < n; ++c) {
      for (int r = 0; r < m; ++r) {
        raw(r, c) = complex_normal(rng);
      }
    }
    fb.A.push_back(orthonormalize(raw));
  }
  return fb;
}

ReducedChannelSet reduce(const std::vector<ComplexMatrix>& h, const FilterBank& fb) {
  if (h.size() != fb.A.size()) {
    throw ArgumentError("reduce: channel and filter counts differ");
  }
  ReducedChannelSet rd;
  rd.H_rd.reserve(h.size());
  for (std::size_t l = 0; l < h.size(); ++l) {
    if (fb.A[l].rows() != h[l].rows()) {
      throw ArgumentError("reduce: filter and channel row counts differ");
    }
    rd.H_rd.push_back(fb.A[l].adjoint() * h[l]);
  }
  return rd;
}

}  // namespace drmimo

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <vector>

#include "drmimo/channel.hpp"
#include "drmimo/common.hpp"
#include "drmimo/numerics.hpp"

namespace drmimo {

enum class FilterMethod { KLT, CKLT, DCKLT, AntSel, AntRed, Random };

// Per-RRH semi-orthogonal reduction filters. Every A[l] satisfies
// A'A = I_N; the antenna-based methods use standard basis columns.
struct FilterBank {
  std::vector<ComplexMatrix> A;  // L matrices, M x N
  FilterMethod method_tag = FilterMethod::KLT;
};

struct ReducedChannelSet {
  std::vector<ComplexMatrix> H_rd;  // L matrices, N x K
};

// Diagonal slow-fading second moments per RRH: psi[j](k) = p_k beta(j,k) M.
struct PsiSet {
  std::vector<RealVector> psi;
};

// Top-N eigenvectors of H_l H_l'. The SNR does not change the eigenvector
// ranking; the parameter is kept for interface symmetry with the
// conditional variants.
ComplexMatrix klt_filter(const ComplexMatrix& h_l, double rho, int n);

// Q_l = (I_K + rho sum_{j != l} H_j' A_j A_j' H_j)^{-1}; Hermitian positive
// definite with eigenvalues in (0, 1].
HermitianMatrix compute_Q(const std::vector<ComplexMatrix>& h, const std::vector<ComplexMatrix>& a,
                          int l, double rho);

// Top-N eigenvectors of H_l Q_l H_l' -- the filter that maximizes the
// conditional information contribution of RRH l given the others' filters.
ComplexMatrix cklt_filter(const ComplexMatrix& h_l, const HermitianMatrix& q_l, double rho, int n);

struct BcaResult {
  FilterBank filters;
  // Joint information objective: entry 0 is the initialization, then one
  // entry per coordinate update; non-decreasing throughout.
  std::vector<double> objective_trace;
  int sweeps_run = 0;
};

// Coordinate ascent over the per-RRH filters, initialized with the marginal
// transforms and updated in round-robin order l = 0..L-1. Stops after
// `max_sweeps` or once a full sweep improves the objective by less than
// `rel_tol` (relative).
BcaResult bca_joint_design(const std::vector<ComplexMatrix>& h, double rho, int n,
                           int max_sweeps = 10, double rel_tol = 1e-6);

PsiSet psi_set(const SlowFading& sf, int m);

// Decentralized filter for RRH l: top-N eigenvectors of
// H_l (I_K + rho sum_{j != l} Psi_j)^{-1} H_l'. Needs only the local channel
// and network slow-fading statistics.
ComplexMatrix dcklt_filter(const ComplexMatrix& h_l, const PsiSet& psi, int l, double rho, int n);

// Greedy joint antenna selection: starting from all rows active, repeatedly
// drop the row whose removal costs the least joint information, never taking
// an RRH below N rows, until each RRH keeps exactly N.
FilterBank antenna_selection_filters(const std::vector<ComplexMatrix>& h, double rho, int n);

// First N standard basis columns at every RRH.
FilterBank antenna_reduction_filters(int m, int n, int l);

// Orthonormalized i.i.d. complex Gaussian filters (uniform column span).
FilterBank random_filters(int m, int n, int l, std::mt19937_64& rng);

// H_rd[l] = A[l]' H[l].
ReducedChannelSet reduce(const std::vector<ComplexMatrix>& h, const FilterBank& fb);

}  // namespace drmimo

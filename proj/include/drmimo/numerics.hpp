// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "drmimo/common.hpp"

namespace drmimo {

// Square complex matrix checked (and stored exactly symmetrized) as Hermitian.
// The check is relative to the largest entry magnitude.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(ComplexMatrix m, double tol = kHermitianTol);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

struct TopEig {
  ComplexMatrix vectors;  // dim x n, orthonormal columns
  RealVector values;      // descending
};

// Eigenvectors of the n largest eigenvalues of a Hermitian matrix, ordered by
// descending eigenvalue. Exact ties keep the ascending index order of the
// underlying full decomposition. Each column is rotated so that its first
// entry with magnitude above `kPhaseTol` is real and nonnegative, making the
// output reproducible bit-for-bit across runs.
TopEig hermitian_top_eig(const HermitianMatrix& g, Eigen::Index n);
ComplexMatrix hermitian_top_eigvecs(const HermitianMatrix& g, Eigen::Index n);

// Semi-orthogonal basis with the same column span as `a_raw` (thin QR).
// Throws DegenerateInputError when a pivot falls below `rank_tol`.
ComplexMatrix orthonormalize(const ComplexMatrix& a_raw, double rank_tol = kRankTol);

// log2 det(I + G) for positive semidefinite G, evaluated in the log domain
// through a Cholesky factorization so large-scale inputs do not overflow.
double logdet2_id_plus(const HermitianMatrix& g);

// X with G X = RHS for Hermitian positive definite G (Cholesky solve with one
// refinement step).
ComplexMatrix solve_hpd(const HermitianMatrix& g, const ComplexMatrix& rhs);

// Hermitian S with S G S = I (principal inverse square root). Throws
// NumericalError when an eigenvalue falls below kEigFloorRel times the
// largest one.
HermitianMatrix inv_sqrt_hpd(const HermitianMatrix& g);

}  // namespace drmimo

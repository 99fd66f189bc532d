// SPDX-License-Identifier: Apache-2.0
#include "drmimo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace drmimo {

void ensure_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": non-finite entries");
  }
}

void ensure_finite(const RealMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": non-finite entries");
  }
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m, double tol) {
  if (m.rows() != m.cols()) {
    throw ValidationError("HermitianMatrix: matrix is not square");
  }
  ensure_finite(m, "HermitianMatrix");
  const double scale = m.cwiseAbs().maxCoeff();
  const double dev = (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
  if (dev > tol * std::max(scale, 1.0)) {
    throw ValidationError("HermitianMatrix: deviation from Hermitian symmetry " +
                          std::to_string(dev) + " exceeds tolerance");
  }
  m_ = 0.5 * (m + m.adjoint().eval());
}

TopEig hermitian_top_eig(const HermitianMatrix& g, Eigen::Index n) {
  const Eigen::Index m = g.dim();
  if (n < 1 || n > m) {
    throw ArgumentError("hermitian_top_eig: n must satisfy 1 <= n <= dim");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("hermitian_top_eig: eigendecomposition failed");
  }
  // Eigen reports eigenvalues in ascending order; re-rank descending while a
  // stable sort keeps ascending decomposition index among exact ties.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });

  TopEig out;
  out.vectors.resize(m, n);
  out.values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    ComplexVector col = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double mag = std::abs(col(i));
      if (mag > kPhaseTol) {
        col *= std::conj(col(i)) / mag;
        break;
      }
    }
    out.vectors.col(k) = col;
    out.values(k) = es.eigenvalues()(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

ComplexMatrix hermitian_top_eigvecs(const HermitianMatrix& g, Eigen::Index n) {
  return hermitian_top_eig(g, n).vectors;
}

ComplexMatrix orthonormalize(const ComplexMatrix& a_raw, double rank_tol) {
  ensure_finite(a_raw, "orthonormalize");
  const Eigen::Index m = a_raw.rows();
  const Eigen::Index n = a_raw.cols();
  if (n < 1 || n > m) {
    throw ArgumentError("orthonormalize: need 1 <= cols <= rows");
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(a_raw);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(qr.matrixQR()(j, j)) < rank_tol) {
      throw DegenerateInputError("orthonormalize: rank-deficient input");
    }
  }
  return qr.householderQ() * ComplexMatrix::Identity(m, n);
}

double logdet2_id_plus(const HermitianMatrix& g) {
  ComplexMatrix a = g.matrix();
  a.diagonal().array() += 1.0;
  Eigen::LLT<ComplexMatrix> llt(a);
  double acc = 0.0;
  if (llt.info() == Eigen::Success) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      acc += std::log2(std::real(llt.matrixLLT()(i, i)));
    }
    acc *= 2.0;
  } else {
    // A semidefinite input can fail Cholesky only marginally; fall back to
    // eigenvalues of G itself.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw NumericalError("logdet2_id_plus: eigendecomposition failed");
    }
    for (Eigen::Index i = 0; i < g.dim(); ++i) {
      acc += std::log2(std::max(1.0 + es.eigenvalues()(i), std::numeric_limits<double>::min()));
    }
  }
  // det(I + G) >= 1 for semidefinite G; round tiny negative noise away.
  if (acc < 0.0 && acc > -1e-9) {
    acc = 0.0;
  }
  return acc;
}

ComplexMatrix solve_hpd(const HermitianMatrix& g, const ComplexMatrix& rhs) {
  if (rhs.rows() != g.dim()) {
    throw ArgumentError("solve_hpd: dimension mismatch");
  }
  ensure_finite(rhs, "solve_hpd rhs");
  Eigen::LLT<ComplexMatrix> llt(g.matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("solve_hpd: matrix is not positive definite");
  }
  ComplexMatrix x = llt.solve(rhs);
  x += llt.solve(rhs - g.matrix() * x);
  return x;
}

HermitianMatrix inv_sqrt_hpd(const HermitianMatrix& g) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("inv_sqrt_hpd: eigendecomposition failed");
  }
  const double lmax = es.eigenvalues().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  if (lmax <= 0.0 || lmin <= kEigFloorRel * lmax) {
    throw NumericalError("inv_sqrt_hpd: matrix is numerically singular or indefinite");
  }
  const RealVector inv_sqrt = es.eigenvalues().array().rsqrt();
  ComplexMatrix s = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
  return HermitianMatrix(0.5 * (s + s.adjoint().eval()));
}

}  // namespace drmimo

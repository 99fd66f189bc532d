// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace drmimo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Shared numerical tolerances. Operations that need a tolerance accept it as
// a defaulted parameter so tests can tighten or loosen individual checks.
inline constexpr double kHermitianTol = 1e-12;  // relative Hermitian-symmetry deviation
inline constexpr double kOrthonormTol = 1e-10;  // allowed deviation of A'A from I
inline constexpr double kRankTol = 1e-12;       // column-norm floor during QR
inline constexpr double kPhaseTol = 1e-9;       // entry magnitude used to anchor eigenvector phase
inline constexpr double kEigFloorRel = 1e-14;   // relative eigenvalue floor for inverse square roots
inline constexpr double kGramRankRel = 1e-10;   // relative eigenvalue threshold when counting rank

// Structured input fails a type invariant (e.g. a matrix that should be
// Hermitian is not).
class ValidationError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A plain argument is out of range or shapes disagree.
class ArgumentError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input is structurally valid but degenerate (rank deficient, zero sums).
class DegenerateInputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A factorization or eigensolve could not be completed.
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quantity is undefined because a Gram matrix lost rank.
class RankDeficientError : public std::domain_error {
  using std::domain_error::domain_error;
};

// Zero-forcing is impossible for the given effective channel.
class InfeasibleZfError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void ensure_finite(const ComplexMatrix& m, const char* what);
void ensure_finite(const RealMatrix& m, const char* what);

}  // namespace drmimo

// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <random>

#include <Eigen/Dense>

namespace tripent {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Eigenvalues of density matrices below this are exactly zero.
inline constexpr double kEigenvalueFloor = 1e-12;

/// Eigenpairs in ascending eigenvalue order.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

struct SymmetricEigen {
  RVector values;
  RMatrix vectors;
};

// LAPACK divide-and-conquer drivers. Only the lower triangle is read.
RVector hermitian_eigenvalues(const CMatrix& m);
RVector symmetric_eigenvalues(const RMatrix& m);
HermitianEigen hermitian_eigh(const CMatrix& m);
SymmetricEigen symmetric_eigh(const RMatrix& m);

/// -sum p ln p over entries above kEigenvalueFloor.
double entropy_from_spectrum(const RVector& probabilities);

/// Nonzero spectrum of X X^dagger, computed from whichever Gram matrix is
/// smaller. Uses the real driver when X has no imaginary part.
RVector gram_spectrum(const CMatrix& x);
RVector gram_spectrum(const RMatrix& x);

bool is_real(const CMatrix& m, double tol = 0.0);
bool is_real(const CVector& v, double tol = 0.0);
bool is_hermitian(const CMatrix& m, double tol);

double hermitian_distance(const CMatrix& m);

CMatrix haar_unitary(std::size_t n, Rng& rng);
/// Haar-random isometry with orthonormal columns (rows >= cols).
CMatrix haar_isometry(std::size_t rows, std::size_t cols, Rng& rng);
CMatrix random_hermitian(std::size_t n, Rng& rng);
CVector random_state_vector(std::size_t n, Rng& rng);

/// Closest unitary (or isometry, for tall input) in Frobenius norm.
CMatrix polar_unitary(const CMatrix& m);

/// exp(i t H) for Hermitian H with known eigendecomposition.
CMatrix expi_hermitian(const HermitianEigen& h, double t);

}  // namespace tripent

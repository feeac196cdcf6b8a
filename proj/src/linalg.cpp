// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

#include "tripent/linalg.hpp"

#include <cmath>
#include <string>

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

#include "tripent/error.hpp"

namespace tripent {

namespace {

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw DomainError(std::string(routine) + " failed with info=" +
                      std::to_string(info));
  }
}

void require_square(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) throw DomainError("eigensolver: matrix is not square");
}

}  // namespace

RVector hermitian_eigenvalues(const CMatrix& m) {
  require_square(m.rows(), m.cols());
  const auto n = static_cast<lapack_int>(m.rows());
  RVector w(n);
  if (n == 0) return w;
  CMatrix work = m;
  check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n,
                            w.data()),
             "zheevd");
  return w;
}

RVector symmetric_eigenvalues(const RMatrix& m) {
  require_square(m.rows(), m.cols());
  const auto n = static_cast<lapack_int>(m.rows());
  RVector w(n);
  if (n == 0) return w;
  RMatrix work = m;
  check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n,
                            w.data()),
             "dsyevd");
  return w;
}

HermitianEigen hermitian_eigh(const CMatrix& m) {
  require_square(m.rows(), m.cols());
  const auto n = static_cast<lapack_int>(m.rows());
  HermitianEigen out{RVector(n), m};
  if (n == 0) return out;
  check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(),
                            n, out.values.data()),
             "zheevd");
  return out;
}

SymmetricEigen symmetric_eigh(const RMatrix& m) {
  require_square(m.rows(), m.cols());
  const auto n = static_cast<lapack_int>(m.rows());
  SymmetricEigen out{RVector(n), m};
  if (n == 0) return out;
  check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(),
                            n, out.values.data()),
             "dsyevd");
  return out;
}

double entropy_from_spectrum(const RVector& probabilities) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    if (p > kEigenvalueFloor) s -= p * std::log(p);
  }
  return s;
}

RVector gram_spectrum(const RMatrix& x) {
  if (x.rows() <= x.cols()) {
    RMatrix g = RMatrix::Zero(x.rows(), x.rows());
    g.selfadjointView<Eigen::Lower>().rankUpdate(x);
    return symmetric_eigenvalues(g);
  }
  RMatrix g = RMatrix::Zero(x.cols(), x.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  return symmetric_eigenvalues(g);
}

RVector gram_spectrum(const CMatrix& x) {
  if (is_real(x)) return gram_spectrum(RMatrix(x.real()));
  if (x.rows() <= x.cols()) {
    CMatrix g = CMatrix::Zero(x.rows(), x.rows());
    g.selfadjointView<Eigen::Lower>().rankUpdate(x);
    return hermitian_eigenvalues(g);
  }
  CMatrix g = CMatrix::Zero(x.cols(), x.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(x.adjoint());
  return hermitian_eigenvalues(g);
}

bool is_real(const CMatrix& m, double tol) {
  const Complex* p = m.data();
  const Eigen::Index n = m.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(p[i].imag()) > tol) return false;
  }
  return true;
}

bool is_real(const CVector& v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i].imag()) > tol) return false;
  }
  return true;
}

double hermitian_distance(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return hermitian_distance(m) <= tol;
}

CMatrix haar_unitary(std::size_t n, Rng& rng) {
  return haar_isometry(n, n, rng);
}

CMatrix haar_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols > rows) throw DomainError("haar_isometry: cols exceeds rows");
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(rows, cols);
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }
  // QR with the R-diagonal phases absorbed gives the Haar measure.
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  const CMatrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

CMatrix random_hermitian(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix a(n, n);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = Complex(re, im);
    }
  }
  return 0.5 * (a + a.adjoint());
}

CVector random_state_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(n);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = Complex(re, im);
  }
  v.normalize();
  return v;
}

CMatrix polar_unitary(const CMatrix& m) {
  if (m.rows() == m.cols() && m.size() > 0) {
    // M (M^dagger M)^(-1/2); cheaper than an SVD when M is well conditioned.
    CMatrix mm = m.adjoint() * m;
    const HermitianEigen e = hermitian_eigh(0.5 * (mm + mm.adjoint()));
    if (e.values.minCoeff() > 1e-8 * e.values.maxCoeff()) {
      const RVector inv_root = e.values.cwiseSqrt().cwiseInverse();
      return m * (e.vectors * inv_root.asDiagonal() * e.vectors.adjoint());
    }
  }
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix expi_hermitian(const HermitianEigen& h, double t) {
  const Eigen::Index n = h.values.size();
  CVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phases[i] = std::polar(1.0, t * h.values[i]);
  }
  return h.vectors * phases.asDiagonal() * h.vectors.adjoint();
}

}  // namespace tripent

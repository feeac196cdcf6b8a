// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

// Slow, independent reference implementations used only by the tests. They
// deliberately avoid the library's LAPACK path and index tricks.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline std::vector<std::size_t> digits_of(std::size_t index,
                                          const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

// rho[keep-index, keep-index'] summed over equal traced-out digits. The kept
// subsystems appear in the order given by `keep`.
inline CMatrix partial_trace(const CVector& psi,
                             const std::vector<std::size_t>& dims,
                             const std::vector<std::size_t>& keep) {
  std::size_t dk = 1;
  for (auto p : keep) dk *= dims[p];
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(dk),
                              static_cast<Eigen::Index>(dk));
  std::vector<bool> kept(dims.size(), false);
  for (auto p : keep) kept[p] = true;
  const auto total = static_cast<std::size_t>(psi.size());
  for (std::size_t i = 0; i < total; ++i) {
    const auto di = digits_of(i, dims);
    for (std::size_t j = 0; j < total; ++j) {
      const auto dj = digits_of(j, dims);
      bool same = true;
      for (std::size_t p = 0; p < dims.size(); ++p) {
        if (!kept[p] && di[p] != dj[p]) {
          same = false;
          break;
        }
      }
      if (!same) continue;
      std::size_t r = 0, c = 0;
      for (auto p : keep) {
        r = r * dims[p] + di[p];
        c = c * dims[p] + dj[p];
      }
      rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
          psi[static_cast<Eigen::Index>(i)] *
          std::conj(psi[static_cast<Eigen::Index>(j)]);
    }
  }
  return rho;
}

inline double entropy(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()[i];
    if (p > 1e-12) s -= p * std::log(p);
  }
  return s;
}

inline double entropy_of(const CVector& psi, const std::vector<std::size_t>& dims,
                         const std::vector<std::size_t>& keep) {
  if (keep.empty() || keep.size() == dims.size()) return 0.0;
  return entropy(partial_trace(psi, dims, keep));
}

inline CMatrix psd_sqrt(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  Eigen::VectorXd w = es.eigenvalues();
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = w[i] > 1e-12 ? std::sqrt(w[i]) : 0.0;
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

// Reflected entropy from its definition: build |sqrt(rho)> on (A, B, A*, B*)
// with plain loops and trace out (B, B*).
inline double reflected_entropy(const CMatrix& rho_ab, std::size_t da,
                                std::size_t db) {
  const CMatrix root = psd_sqrt(rho_ab);
  const std::size_t n = da * db;
  CVector psi(static_cast<Eigen::Index>(n * n));
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t a2 = 0; a2 < da; ++a2)
        for (std::size_t b2 = 0; b2 < db; ++b2) {
          const std::size_t idx = ((a * db + b) * da + a2) * db + b2;
          psi[static_cast<Eigen::Index>(idx)] =
              root(static_cast<Eigen::Index>(a * db + b),
                   static_cast<Eigen::Index>(a2 * db + b2));
        }
  return entropy_of(psi, {da, db, da, db}, {0, 2});
}

}  // namespace oracle

#include "tripent/ep.hpp"

namespace oracle {

// Central finite difference of S(A C_L) along exp(i t theta) U.
inline double directional_fd(const tripent::PurificationProblem& p,
                             const CMatrix& theta, double h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(theta);
  auto expi = [&](double t) {
    CVector ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, t * es.eigenvalues()[i]);
    return CMatrix(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
  };
  return (p.objective(expi(h) * p.unitary) - p.objective(expi(-h) * p.unitary)) / (2 * h);
}

}  // namespace oracle

// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

// Periodic uniform MPS, transfer matrices and the blocking chain that turns
// a ring of N sites into a three-site MPS with truncated physical legs.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tripent/linalg.hpp"
#include "tripent/qstate.hpp"

namespace tripent {

struct LocalHamiltonian;

/// N copies of one d x D x D tensor traced around a ring. tensors[s] is the
/// D x D matrix M_s.
class UniformMPS {
 public:
  UniformMPS(std::vector<CMatrix> tensors, std::size_t n_sites);

  const std::vector<CMatrix>& tensors() const noexcept { return tensors_; }
  std::size_t d() const noexcept { return tensors_.size(); }
  std::size_t D() const noexcept { return static_cast<std::size_t>(tensors_[0].rows()); }
  std::size_t n_sites() const noexcept { return n_sites_; }

 private:
  std::vector<CMatrix> tensors_;
  std::size_t n_sites_;
};

/// T[(a,c),(b,d)] = sum_s M_s[a,b] conj(M_s[c,d]).
struct TransferMatrix {
  CMatrix t;
  std::size_t D = 0;
  /// Ring length of the source MPS; 0 when unknown.
  std::size_t n_sites = 0;
};

/// Blocked tensor for n consecutive sites, physical index S in the
/// orthonormal eigenbasis of the blocked transfer matrix.
struct CoarseTensor {
  std::vector<CMatrix> tensors;
  std::size_t n = 0;
  /// Ring length of the source MPS; 0 when unknown.
  std::size_t ring_sites = 0;
  /// Eigenvalues lambda_S of the regrouped T^n, descending.
  RVector weights;
  /// Squared Schmidt weight removed by truncation.
  double discarded_weight = 0;

  std::size_t d() const noexcept { return tensors.size(); }
  std::size_t D() const noexcept {
    return tensors.empty() ? 0 : static_cast<std::size_t>(tensors[0].rows());
  }
};

struct SchmidtResult {
  /// Singular values, descending, normalized so their squares sum to 1.
  RVector values;
  /// Left singular vectors, columns indexed like `values`.
  CMatrix left;
  double entropy = 0;
};

/// Keep at most `cap` Schmidt vectors and only those with value > epsilon.
/// Values whose square is below the eigenvalue floor are always dropped.
struct TruncationRule {
  std::optional<std::size_t> cap;
  double epsilon = 0;
};

struct CoarseTripartite {
  CoarseTensor a, b, c;
  TruncationRule rule;
};

TransferMatrix transfer_matrix(const UniformMPS& mps);

/// Matrix power by repeated squaring.
CMatrix matrix_power(const CMatrix& m, std::size_t n);

CoarseTensor coarse_grain(const TransferMatrix& t, std::size_t n);

/// sum_S M_S (x) conj(M_S) in the transfer-matrix grouping.
CMatrix reconstruct_transfer(const CoarseTensor& m);

/// Schmidt decomposition of the ring cut into the two blocks.
SchmidtResult schmidt_bipartite(const CoarseTensor& ma, const CoarseTensor& mb);

/// M~_k = sum_S conj(U[S,k]) M_S over the retained columns k of U.
CoarseTensor truncate_physical(const CoarseTensor& m, const SchmidtResult& schmidt,
                               const TruncationRule& rule);

/// Number of Schmidt vectors kept by `rule`.
std::size_t retained_rank(const RVector& values, const TruncationRule& rule);

/// Blocks the ring into [0, nA), [nA, nA+nB), rest and truncates each
/// block against its complement.
CoarseTripartite assemble_tripartite(const UniformMPS& mps, std::size_t n_a,
                                     std::size_t n_b, const TruncationRule& rule);

/// Same from already truncated blocks.
CoarseTripartite assemble_tripartite(CoarseTensor a, CoarseTensor b, CoarseTensor c);

/// psi[a,b,c] = tr(MA_a MB_b MC_c), renormalized.
PureState dense_export(const CoarseTripartite& t);

/// Full 2^N-style amplitude vector of the ring (d^N entries), renormalized.
PureState mps_to_dense(const UniformMPS& mps);

/// <H> / <psi|psi> by transfer-matrix contraction. H must be translation
/// invariant on the same ring.
double pumps_energy(const UniformMPS& mps, const LocalHamiltonian& h);

/// Wirtinger gradient dE/d conj(M_s) of pumps_energy.
std::vector<CMatrix> pumps_gradient(const UniformMPS& mps, const LocalHamiltonian& h);

struct PumpsOptions {
  int max_iterations = 3000;
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
  std::optional<UniformMPS> initial;
};

struct PumpsResult {
  UniformMPS mps;
  double energy;
  int iterations;
  bool converged;
  std::vector<double> history;
};

/// Variational energy minimization over the uniform tensor.
PumpsResult pumps_optimize(const LocalHamiltonian& h, std::size_t bond_dim,
                           const PumpsOptions& opts = {});

/// Default bond dimension for a ring of n sites.
std::size_t default_bond_dimension(std::size_t n_sites);

// Tensor and vector artifacts. The binary form is the 8-byte magic, a
// little-endian uint64 header length, a JSON header, then little-endian
// (re, im) double pairs in row-major order.
void write_mps(const std::string& path, const UniformMPS& mps, bool binary);
UniformMPS read_mps(const std::string& path);
void write_state(const std::string& path, const PureState& state, bool binary);
PureState read_state(const std::string& path);

}  // namespace tripent

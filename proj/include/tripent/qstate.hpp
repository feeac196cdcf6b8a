// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

// Dense pure states, reduced density matrices and the entropic quantities
// built from them. All entropies are in nats.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tripent/linalg.hpp"

namespace tripent {

using PartySet = std::vector<std::size_t>;

/// State vector over an ordered list of subsystems. The first subsystem is
/// the most significant index of the flat amplitude vector.
class PureState {
 public:
  /// Validates that prod(dims) matches the vector length and the norm is 1
  /// within 1e-12.
  PureState(CVector amplitudes, std::vector<std::size_t> dims,
            std::vector<std::string> labels = {});

  /// Rescales to unit norm before validating. Throws on a zero vector.
  static PureState normalized(CVector amplitudes, std::vector<std::size_t> dims,
                              std::vector<std::string> labels = {});

  /// Computational basis product state |i_0 i_1 ...>.
  static PureState basis(std::vector<std::size_t> dims,
                         const std::vector<std::size_t>& digits);

  const CVector& amplitudes() const noexcept { return amplitudes_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t num_parties() const noexcept { return dims_.size(); }
  std::size_t dim(std::size_t party) const { return dims_.at(party); }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(amplitudes_.size());
  }
  bool is_real() const;

  /// Matrix whose rows run over `row_parties` (in the given order) and
  /// whose columns run over the remaining parties in ascending order.
  CMatrix bipartite_matrix(std::span<const std::size_t> row_parties) const;

  /// Reorders subsystems: new party k is old party order[k].
  PureState permuted(std::span<const std::size_t> order) const;

  /// Merges subsystems. Each group becomes one party (in the listed order);
  /// the groups must cover every party exactly once.
  PureState grouped(const std::vector<PartySet>& groups) const;

  /// Applies a dim(party) x dim(party) operator, or an isometry with
  /// cols == dim(party), to one party. The result is not renormalized.
  CVector apply_local(std::size_t party, const CMatrix& op) const;

 private:
  CVector amplitudes_;
  std::vector<std::size_t> dims_;
  std::vector<std::string> labels_;
};

/// Hermitian, unit-trace operator on the listed subsystem dimensions.
class DensityMatrix {
 public:
  DensityMatrix(CMatrix matrix, std::vector<std::size_t> dims);

  const CMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(matrix_.rows());
  }

  /// Ascending spectrum; throws DomainError below -1e-10.
  RVector spectrum() const;

 private:
  CMatrix matrix_;
  std::vector<std::size_t> dims_;
};

enum class Party { A = 0, B = 1, C = 2 };

/// Assignment of every subsystem to one of A, B, C.
class Tripartition {
 public:
  /// When `ring` is set each party must occupy a cyclically contiguous
  /// block of sites.
  explicit Tripartition(std::vector<Party> assignment, bool ring = false);

  /// Sites [0, nA) -> A, [nA, nA+nB) -> B, remainder -> C.
  static Tripartition contiguous(std::size_t n, std::size_t n_a,
                                 std::size_t n_b);

  const std::vector<Party>& assignment() const noexcept { return assignment_; }
  std::size_t size() const noexcept { return assignment_.size(); }
  PartySet indices(Party p) const;
  PartySet union_of(Party p, Party q) const;

 private:
  std::vector<Party> assignment_;
};

struct EntropyReport {
  double S_A = 0;
  double S_B = 0;
  double S_C = 0;
  double S_AB = 0;
  double I_AB = 0;
};

/// Partial trace onto `keep`; the result's subsystem order follows `keep`.
DensityMatrix reduced_density(const PureState& state,
                              std::span<const std::size_t> keep);

double von_neumann_entropy(const DensityMatrix& rho);
/// Same, for a raw matrix; rejects non-Hermitian input.
double von_neumann_entropy(const CMatrix& rho);

/// Entanglement entropy of a subset of parties. Empty and full sets give 0.
double subsystem_entropy(const PureState& state,
                         std::span<const std::size_t> parties);

EntropyReport entropy_report(const PureState& state, const Tripartition& part);

double mutual_information(const PureState& state, const Tripartition& part);

/// I(X:Z|Y) = S_XY + S_YZ - S_XYZ - S_Y. Sets must be pairwise disjoint.
double conditional_mutual_information(const PureState& state,
                                      std::span<const std::size_t> x,
                                      std::span<const std::size_t> y,
                                      std::span<const std::size_t> z);

/// |sqrt(rho)> on (S_1..S_k, S_k*..S_1*): a two-party rho on (A, B) yields
/// the order (A, B, B*, A*). Mirrored factors are complex conjugated in the
/// computational basis.
PureState canonical_purification(const DensityMatrix& rho);

/// S(A A*) of the canonical purification of a two-party rho_AB.
double reflected_entropy(const DensityMatrix& rho_ab);

/// Reflected entropy of the A:B reduced state of a pure state, computed
/// through the purifying system instead of the full rho_AB eigenproblem.
double reflected_entropy(const PureState& state, const Tripartition& part);

/// h(A:B) = S_R(A:B) - I(A:B).
double h_measure(const PureState& state, const Tripartition& part);

struct HReport {
  double h = 0;
  double reflected = 0;
  double mutual = 0;
  /// I(A*:B|A), I(A:B*|B), I(B:A*|A), I(B*:A|A*) on the canonical
  /// purification.
  std::array<double, 4> cmi{};
};

/// h evaluated both from its definition and as the four conditional mutual
/// informations of the canonical purification.
HReport h_report(const PureState& state, const Tripartition& part);

}  // namespace tripent

// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

// Entanglement of purification E_P(A:B) as min over unitaries U on C of
// S(A C_L) for (1_AB x U)|psi>, with C = C_L x C_R.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tripent/linalg.hpp"
#include "tripent/qstate.hpp"

namespace tripent {

using SplitDims = std::pair<std::size_t, std::size_t>;

/// Balanced: ceil(sqrt(d_C)) on each side. Saturating: C is first restricted
/// to the support of rho_C (rank r = rank rho_AB) and split r x r, which is
/// always large enough to reach the minimum. Factored: C restricted to its
/// support, every split (p, ceil(r/p)) tried, lowest value kept.
enum class SplitPolicy { Balanced, Saturating, Factored };

struct EpOptions {
  double eta = 1e-4;
  /// Per start.
  int max_iterations = 10000;
  /// Random starts on top of the identity start.
  int restarts = 3;
  /// Iterations every start gets before all but the lowest one are dropped;
  /// 0 runs every start to the end.
  int screen_iterations = 300;
  std::uint64_t seed = 0;
  /// Overrides the policy when set.
  std::optional<SplitDims> split_dims;
  SplitPolicy split_policy = SplitPolicy::Balanced;
};

struct EpResult {
  double ep = 0;
  int iterations = 0;
  double final_gradient_norm = 0;
  int restarts = 0;
  SplitDims split_dims{1, 1};
  bool converged = false;
  /// Accepted objective values of the winning start.
  std::vector<double> history;
  /// Acts on the purifier after any support restriction.
  CMatrix unitary;
};

/// Three-party state (A, B, C) with C embedded into C_L x C_R, plus the
/// optimizer state.
class PurificationProblem {
 public:
  /// `state` must have exactly three parties. When dcl * dcr exceeds d_C the
  /// purifier is zero-padded.
  PurificationProblem(const PureState& state, SplitDims split);

  std::size_t dim_a() const noexcept { return da_; }
  std::size_t dim_b() const noexcept { return db_; }
  std::size_t dim_cl() const noexcept { return dcl_; }
  std::size_t dim_cr() const noexcept { return dcr_; }
  std::size_t dim_c() const noexcept { return dcl_ * dcr_; }

  /// S(A C_L) after applying `u` to the purifier.
  double objective(const CMatrix& u) const;
  double objective() const { return objective(unitary); }

  /// E = -i (X - X^dagger) with X_cc' = sum_ab phi_abc conj((ln rho_ACL phi)_abc').
  /// The directional derivative along exp(i t Theta) U is Re tr(Theta E).
  CMatrix gradient(const CMatrix& u) const;
  /// Objective and gradient from one eigendecomposition.
  std::pair<double, CMatrix> value_and_gradient(const CMatrix& u) const;

  /// Purified state on (A, B, C_L, C_R) at `u`.
  PureState purified(const CMatrix& u) const;

  CMatrix unitary;
  CMatrix search_direction;
  double step_size = 0;
  double gradient_norm = 0;

 private:
  // Rows (a, b), columns (cl, cr).
  CMatrix psi_;
  std::size_t da_, db_, dcl_, dcr_;

  CMatrix rotated(const CMatrix& u) const;
  CMatrix to_cut(const CMatrix& m) const;
  CMatrix from_cut(const CMatrix& x) const;
};

SplitDims balanced_split(std::size_t dc);

/// Replaces party C by the support of rho_C (an isometry, so E_P, g and h are
/// unchanged).
PureState restrict_to_support(const PureState& state, std::size_t party);

/// Gradient at the problem's current unitary.
CMatrix ep_gradient(const PurificationProblem& problem);

/// Multi-start nonlinear conjugate gradient. `state` has parties (A, B, C).
EpResult minimize_ep(const PureState& state, const EpOptions& opts = {});

/// Derivative-free reference: compass search over unitaries from many Haar
/// random starts. Requires dcl * dcr <= 8.
double ep_bruteforce(const PureState& state, SplitDims split,
                     std::uint64_t seed = 0, int starts = 200);

/// g(A:B) = 2 E_P - I(A:B) for a general tripartition.
double g_measure(const PureState& state, const Tripartition& part,
                 const EpOptions& opts = {});

struct GDecomposition {
  double g = 0;
  /// I(C_L:B C_R|A), I(C_R:A|B), I(C_R:A C_L|B), I(C_L:B|A).
  std::array<double, 4> cmi{};
  double residual_first = 0;
  double residual_second = 0;
};

/// Both CMI decompositions of 2 S(A C_L) - I(A:B) for the purification at
/// the problem's current unitary.
GDecomposition g_decomposition(const PurificationProblem& problem);

/// (|g - I(C_L:BC_R|A) - I(C_R:A|B)|, |g - I(C_R:AC_L|B) - I(C_L:B|A)|).
std::pair<double, double> g_decomposition_residual(
    const PurificationProblem& problem);

/// Groups a state into (A, B, C) following the tripartition.
PureState group_tripartite(const PureState& state, const Tripartition& part);

}  // namespace tripent

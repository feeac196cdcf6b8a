// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

// Generators for triangle states, orthogonal superpositions of triangle
// states, GHZ/W, and zero-correlation-length uniform MPS.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tripent/linalg.hpp"
#include "tripent/mps.hpp"
#include "tripent/qstate.hpp"

namespace tripent {

/// sum_i sqrt(p_i) |i>|i> on left_dim x right_dim.
struct BipartiteFactor {
  RVector spectrum;
  std::size_t left_dim = 1;
  std::size_t right_dim = 1;
};

/// Party A = (A_L, A_R), B = (B_L, B_R), C = (C_L, C_R) with factors on
/// A_R-B_L, B_R-C_L and C_R-A_L.
struct TriangleSpec {
  BipartiteFactor ab;
  BipartiteFactor bc;
  BipartiteFactor ca;
  /// Apply a Haar random unitary to each party.
  bool scramble = true;

  std::array<std::size_t, 3> party_dims() const;
};

struct SotsSpec {
  std::vector<double> weights;
  std::vector<TriangleSpec> blocks;
  /// Per block, the offset of its subspace inside A, B and C. Empty means
  /// blocks are stacked one after another.
  std::vector<std::array<std::size_t, 3>> offsets;
  /// Total party dimensions; zero entries mean "just large enough".
  std::array<std::size_t, 3> dims{0, 0, 0};
  /// Haar random unitary on each party after embedding.
  bool scramble = true;
};

struct FixedPointSpec {
  /// One bond spectrum per block; the number of blocks is m.
  std::vector<RVector> spectra;
  /// Block weights; empty means equal weights.
  std::vector<double> weights;
};

PureState make_triangle(const TriangleSpec& spec, std::uint64_t seed);
PureState make_sots(const SotsSpec& spec, std::uint64_t seed);
PureState make_ghz(std::size_t d);
PureState make_w();

UniformMPS make_fixed_point_mps(const FixedPointSpec& spec, std::size_t n_sites);

/// I(i-1 : i+1 | i) for every party i, cyclically.
std::vector<double> markov_residuals(const PureState& state);

/// Random spectra and leg dimensions in [1, max_leg].
TriangleSpec random_triangle_spec(Rng& rng, std::size_t max_leg = 4);
SotsSpec random_sots_spec(Rng& rng, std::size_t blocks, std::size_t max_leg = 3);

/// Random probability vector of length n.
RVector random_spectrum(std::size_t n, Rng& rng);

/// Applies a Haar random isometry d -> growth * d to every party.
PureState apply_random_isometries(const PureState& state, std::size_t growth,
                                  Rng& rng);

}  // namespace tripent

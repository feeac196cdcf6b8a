// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

// Periodic qubit chains and their ground states by Lanczos. Site 0 is the
// most significant bit of a basis index; Z = diag(1, -1).

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tripent/linalg.hpp"
#include "tripent/qstate.hpp"

namespace tripent {

/// A term acting on sites j+offset .. j+offset+support-1 (mod N), repeated
/// for every site j of the ring.
struct LocalTerm {
  std::size_t offset = 0;
  std::size_t support = 1;
  RMatrix matrix;
};

enum class Symmetry { Parity, Magnetization };

struct LocalHamiltonian {
  std::size_t n_sites = 0;
  std::vector<LocalTerm> terms;
  std::vector<Symmetry> symmetries;
  std::string name;

  /// Dense 2^N x 2^N matrix; only for small N.
  RMatrix dense() const;
  /// Upper bound on the operator norm.
  double norm_bound() const;
};

LocalHamiltonian build_obrien_fendley(std::size_t n, double lambda);
LocalHamiltonian build_xxz(std::size_t n, double delta);
/// Sum of -Z_j; used in tests and as a trivial model.
LocalHamiltonian build_field(std::size_t n);

/// Compactification radius sqrt(2 pi / arccos(-delta)), -1 <= delta < 1.
double radius(double delta);

enum class Sector { Auto, Full, ParityEven, ParityOdd, ZeroMagnetization };

struct LanczosOptions {
  Sector sector = Sector::Auto;
  double tolerance = 1e-8;
  int max_restarts = 60;
  std::size_t max_krylov = 100;
  std::size_t memory_budget_bytes = std::size_t{1} << 30;
  std::uint64_t seed = 0;
};

struct GroundStateResult {
  PureState state;
  double energy = 0;
  double residual_norm = 0;
  std::string sector;
  /// Next Ritz value, or the lowest energy of the other sector searched.
  double next_energy = 0;
  bool degenerate = false;
  int matvecs = 0;
  /// Lowest Ritz value after each Lanczos step.
  std::vector<double> ritz_history;
};

GroundStateResult ground_state(const LocalHamiltonian& h,
                               const LanczosOptions& opts = {});

/// Ground energy of -sum X_j X_{j+1} - sum Z_j on a ring of n sites, from
/// free fermions in the even-parity sector.
double free_fermion_ising_oracle(std::size_t n);

/// Cyclic shift of sites by one: new site j holds old site j-1.
CVector translate_sites(const CVector& amplitudes, std::size_t n_sites);

}  // namespace tripent

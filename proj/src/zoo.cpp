// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

#include "tripent/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tripent/error.hpp"

namespace tripent {

namespace {

RMatrix factor_matrix(const BipartiteFactor& f, const char* name) {
  const auto k = static_cast<std::size_t>(f.spectrum.size());
  if (k == 0 || k > f.left_dim || k > f.right_dim) {
    throw DomainError(std::string("triangle factor ") + name +
                      ": spectrum length must fit both leg dimensions");
  }
  if (f.spectrum.minCoeff() < 0 || std::abs(f.spectrum.sum() - 1.0) > 1e-12) {
    throw DomainError(std::string("triangle factor ") + name +
                      ": spectrum is not a probability vector");
  }
  RMatrix m = RMatrix::Zero(static_cast<Eigen::Index>(f.left_dim),
                            static_cast<Eigen::Index>(f.right_dim));
  for (Eigen::Index i = 0; i < f.spectrum.size(); ++i) m(i, i) = std::sqrt(f.spectrum[i]);
  return m;
}

// Unscrambled triangle amplitudes on (A, B, C).
CVector triangle_amplitudes(const TriangleSpec& spec) {
  const RMatrix ab = factor_matrix(spec.ab, "A-B");
  const RMatrix bc = factor_matrix(spec.bc, "B-C");
  const RMatrix ca = factor_matrix(spec.ca, "C-A");
  const std::size_t al = spec.ca.right_dim, ar = spec.ab.left_dim;
  const std::size_t bl = spec.ab.right_dim, br = spec.bc.left_dim;
  const std::size_t cl = spec.bc.right_dim, cr = spec.ca.left_dim;
  const std::size_t db = bl * br, dc = cl * cr;
  CVector v = CVector::Zero(static_cast<Eigen::Index>(al * ar * db * dc));
  for (std::size_t a1 = 0; a1 < al; ++a1)
    for (std::size_t a2 = 0; a2 < ar; ++a2)
      for (std::size_t b1 = 0; b1 < bl; ++b1) {
        const double x = ab(static_cast<Eigen::Index>(a2), static_cast<Eigen::Index>(b1));
        if (x == 0) continue;
        for (std::size_t b2 = 0; b2 < br; ++b2)
          for (std::size_t c1 = 0; c1 < cl; ++c1) {
            const double y = bc(static_cast<Eigen::Index>(b2), static_cast<Eigen::Index>(c1));
            if (y == 0) continue;
            for (std::size_t c2 = 0; c2 < cr; ++c2) {
              const double z = ca(static_cast<Eigen::Index>(c2), static_cast<Eigen::Index>(a1));
              const std::size_t ia = a1 * ar + a2, ib = b1 * br + b2, ic = c1 * cr + c2;
              v[static_cast<Eigen::Index>((ia * db + ib) * dc + ic)] = x * y * z;
            }
          }
      }
  return v;
}

CVector scramble_parties(CVector v, const std::array<std::size_t, 3>& dims, Rng& rng) {
  PureState s = PureState::normalized(std::move(v), {dims[0], dims[1], dims[2]});
  for (std::size_t p = 0; p < 3; ++p) {
    s = PureState::normalized(s.apply_local(p, haar_unitary(dims[p], rng)), s.dims());
  }
  return s.amplitudes();
}

}  // namespace

std::array<std::size_t, 3> TriangleSpec::party_dims() const {
  return {ca.right_dim * ab.left_dim, ab.right_dim * bc.left_dim,
          bc.right_dim * ca.left_dim};
}

PureState make_triangle(const TriangleSpec& spec, std::uint64_t seed) {
  const auto dims = spec.party_dims();
  CVector v = triangle_amplitudes(spec);
  if (spec.scramble) {
    Rng rng(seed);
    v = scramble_parties(std::move(v), dims, rng);
  }
  return PureState::normalized(std::move(v), {dims[0], dims[1], dims[2]},
                               {"A", "B", "C"});
}

PureState make_sots(const SotsSpec& spec, std::uint64_t seed) {
  const std::size_t m = spec.blocks.size();
  if (m == 0 || spec.weights.size() != m) {
    throw DomainError("make_sots: need one weight per block");
  }
  double total = 0;
  for (double w : spec.weights) {
    if (!(w >= 0)) throw DomainError("make_sots: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("make_sots: weights must sum to 1");

  std::vector<std::array<std::size_t, 3>> offsets = spec.offsets;
  if (offsets.empty()) {
    std::array<std::size_t, 3> at{0, 0, 0};
    for (const auto& b : spec.blocks) {
      offsets.push_back(at);
      const auto d = b.party_dims();
      for (int p = 0; p < 3; ++p) at[p] += d[p];
    }
  }
  if (offsets.size() != m) throw DomainError("make_sots: need one offset per block");

  std::array<std::size_t, 3> dims = spec.dims;
  for (int p = 0; p < 3; ++p) {
    std::size_t need = 0;
    for (std::size_t j = 0; j < m; ++j) {
      need = std::max(need, offsets[j][p] + spec.blocks[j].party_dims()[p]);
    }
    if (dims[p] == 0) dims[p] = need;
    if (dims[p] < need) throw DomainError("make_sots: block exceeds party dimension");
    // Blocks must occupy disjoint index ranges of every party.
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        const std::size_t s1 = offsets[j][p], e1 = s1 + spec.blocks[j].party_dims()[p];
        const std::size_t s2 = offsets[k][p], e2 = s2 + spec.blocks[k].party_dims()[p];
        if (s1 < e2 && s2 < e1) {
          throw DomainError("make_sots: non-orthogonal block embedding");
        }
      }
  }

  Rng rng(seed);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dims[0] * dims[1] * dims[2]));
  for (std::size_t j = 0; j < m; ++j) {
    const TriangleSpec& t = spec.blocks[j];
    const auto bd = t.party_dims();
    CVector block = triangle_amplitudes(t);
    if (t.scramble) block = scramble_parties(std::move(block), bd, rng);
    block.normalize();
    const double amp = std::sqrt(spec.weights[j]);
    for (std::size_t a = 0; a < bd[0]; ++a)
      for (std::size_t b = 0; b < bd[1]; ++b)
        for (std::size_t c = 0; c < bd[2]; ++c) {
          const std::size_t ia = offsets[j][0] + a, ib = offsets[j][1] + b,
                            ic = offsets[j][2] + c;
          v[static_cast<Eigen::Index>((ia * dims[1] + ib) * dims[2] + ic)] +=
              amp * block[static_cast<Eigen::Index>((a * bd[1] + b) * bd[2] + c)];
        }
  }
  if (spec.scramble) v = scramble_parties(std::move(v), dims, rng);
  return PureState::normalized(std::move(v), {dims[0], dims[1], dims[2]},
                               {"A", "B", "C"});
}

PureState make_ghz(std::size_t d) {
  if (d < 1) throw DomainError("make_ghz: d must be positive");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d * d * d));
  for (std::size_t j = 0; j < d; ++j) v[static_cast<Eigen::Index>((j * d + j) * d + j)] = 1;
  return PureState::normalized(std::move(v), {d, d, d}, {"A", "B", "C"});
}

PureState make_w() {
  CVector v = CVector::Zero(8);
  v[4] = v[2] = v[1] = 1;
  return PureState::normalized(std::move(v), {2, 2, 2}, {"A", "B", "C"});
}

UniformMPS make_fixed_point_mps(const FixedPointSpec& spec, std::size_t n_sites) {
  const std::size_t m = spec.spectra.size();
  if (m == 0) throw DomainError("make_fixed_point_mps: need at least one block");
  std::vector<double> w = spec.weights;
  if (w.empty()) w.assign(m, 1.0 / static_cast<double>(m));
  if (w.size() != m) throw DomainError("make_fixed_point_mps: one weight per block");
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0)) throw DomainError("make_fixed_point_mps: weights must be positive");

  std::size_t bond = 0;
  for (const auto& s : spec.spectra) {
    if (s.size() == 0 || s.minCoeff() < 0 || std::abs(s.sum() - 1.0) > 1e-12) {
      throw DomainError("make_fixed_point_mps: spectra must be probability vectors");
    }
    bond += static_cast<std::size_t>(s.size());
  }
  const auto D = static_cast<Eigen::Index>(bond);
  std::vector<CMatrix> tensors;
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const RVector& lam = spec.spectra[i];
    const double scale =
        std::pow(w[i] / total, 1.0 / (2.0 * static_cast<double>(n_sites)));
    const Eigen::Index k = lam.size();
    // Physical index (jL, jR) inside block i: M = sqrt(lambda_jL) |jL><jR|.
    for (Eigen::Index jl = 0; jl < k; ++jl)
      for (Eigen::Index jr = 0; jr < k; ++jr) {
        CMatrix t = CMatrix::Zero(D, D);
        t(offset + jl, offset + jr) = scale * std::sqrt(lam[jl]);
        tensors.push_back(std::move(t));
      }
    offset += k;
  }
  return UniformMPS(std::move(tensors), n_sites);
}

std::vector<double> markov_residuals(const PureState& state) {
  const std::size_t n = state.num_parties();
  if (n < 3) throw DomainError("markov_residuals: need at least three parties");
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    const PartySet x{(i + n - 1) % n}, y{i}, z{(i + 1) % n};
    out.push_back(conditional_mutual_information(state, x, y, z));
  }
  return out;
}

RVector random_spectrum(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  RVector p(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = e(rng) + 1e-3;
  return p / p.sum();
}

TriangleSpec random_triangle_spec(Rng& rng, std::size_t max_leg) {
  std::uniform_int_distribution<std::size_t> leg(1, max_leg);
  auto factor = [&] {
    BipartiteFactor f;
    f.left_dim = leg(rng);
    f.right_dim = leg(rng);
    std::uniform_int_distribution<std::size_t> rank(1, std::min(f.left_dim, f.right_dim));
    f.spectrum = random_spectrum(rank(rng), rng);
    return f;
  };
  TriangleSpec s;
  s.ab = factor();
  s.bc = factor();
  s.ca = factor();
  return s;
}

SotsSpec random_sots_spec(Rng& rng, std::size_t blocks, std::size_t max_leg) {
  SotsSpec s;
  const RVector p = random_spectrum(blocks, rng);
  for (std::size_t j = 0; j < blocks; ++j) {
    s.weights.push_back(p[static_cast<Eigen::Index>(j)]);
    s.blocks.push_back(random_triangle_spec(rng, max_leg));
  }
  // Renormalize in double to meet the 1e-12 sum check exactly.
  const double total = std::accumulate(s.weights.begin(), s.weights.end(), 0.0);
  for (double& w : s.weights) w /= total;
  return s;
}

PureState apply_random_isometries(const PureState& state, std::size_t growth,
                                  Rng& rng) {
  if (growth < 1) throw DomainError("apply_random_isometries: growth must be >= 1");
  PureState s = state;
  for (std::size_t p = 0; p < s.num_parties(); ++p) {
    const std::size_t d = s.dim(p);
    std::vector<std::size_t> dims = s.dims();
    dims[p] = d * growth;
    s = PureState::normalized(s.apply_local(p, haar_isometry(d * growth, d, rng)),
                              dims);
  }
  return s;
}

}  // namespace tripent

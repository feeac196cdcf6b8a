// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

#include "tripent/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

#include "tripent/error.hpp"

namespace tripent {

namespace {

RMatrix pauli_x() {
  RMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

RMatrix pauli_z() {
  RMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

RMatrix kron(const RMatrix& a, const RMatrix& b) {
  RMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Computational basis of one symmetry sector.
class SectorBasis {
 public:
  SectorBasis(std::size_t n, Sector sector) : n_(n), sector_(sector) {
    switch (sector) {
      case Sector::Full:
        size_ = std::size_t{1} << n;
        break;
      case Sector::ParityEven:
      case Sector::ParityOdd:
        size_ = std::size_t{1} << (n - 1);
        parity_ = sector == Sector::ParityOdd ? 1 : 0;
        break;
      case Sector::ZeroMagnetization: {
        if (n % 2 != 0) throw DomainError("zero magnetization needs even N");
        lookup_.assign(std::size_t{1} << n, 0);
        for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s) {
          if (static_cast<std::size_t>(std::popcount(s)) == n / 2) {
            lookup_[s] = static_cast<std::uint32_t>(states_.size());
            states_.push_back(s);
          }
        }
        size_ = states_.size();
        break;
      }
      case Sector::Auto:
        throw DomainError("SectorBasis: sector must be resolved");
    }
  }

  std::size_t size() const { return size_; }

  std::uint32_t state(std::size_t i) const {
    switch (sector_) {
      case Sector::Full:
        return static_cast<std::uint32_t>(i);
      case Sector::ZeroMagnetization:
        return states_[i];
      default: {
        const auto hi = static_cast<std::uint32_t>(i);
        const std::uint32_t low = (static_cast<std::uint32_t>(std::popcount(hi)) + parity_) & 1u;
        return (hi << 1) | low;
      }
    }
  }

  std::size_t index(std::uint32_t s) const {
    switch (sector_) {
      case Sector::Full:
        return s;
      case Sector::ZeroMagnetization:
        return lookup_[s];
      default:
        return s >> 1;
    }
  }

 private:
  std::size_t n_;
  Sector sector_;
  std::size_t size_ = 0;
  std::uint32_t parity_ = 0;
  std::vector<std::uint32_t> states_;
  std::vector<std::uint32_t> lookup_;
};

// One placed copy of a local term.
struct PlacedTerm {
  std::vector<int> bits;  // bit position of each site, most significant first
  const LocalTerm* term;
};

struct OffDiagonal {
  std::uint32_t to;
  double value;
};

class Operator {
 public:
  Operator(const LocalHamiltonian& h, const SectorBasis& basis) : basis_(basis) {
    const std::size_t n = h.n_sites;
    for (const LocalTerm& t : h.terms) {
      const std::size_t dim = std::size_t{1} << t.support;
      std::vector<std::vector<OffDiagonal>> rows(dim);
      std::vector<double> diag(dim);
      for (std::size_t l = 0; l < dim; ++l) {
        diag[l] = t.matrix(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l));
        for (std::size_t m = 0; m < dim; ++m) {
          const double v = t.matrix(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m));
          if (m != l && v != 0) rows[l].push_back({static_cast<std::uint32_t>(m), v});
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        PlacedTerm p{{}, &t};
        for (std::size_t k = 0; k < t.support; ++k) {
          p.bits.push_back(static_cast<int>(n - 1 - (j + t.offset + k) % n));
        }
        // Off-diagonal targets are stored already spread onto the ring bits.
        std::vector<std::vector<OffDiagonal>> spread_rows = rows;
        for (auto& row : spread_rows)
          for (OffDiagonal& e : row) e.to = spread(e.to, p.bits);
        std::uint32_t mask = 0;
        for (int b : p.bits) mask |= std::uint32_t{1} << b;
        masks_.push_back(mask);
        placed_.push_back(std::move(p));
        rows_.push_back(std::move(spread_rows));
        diags_.push_back(diag);
      }
    }
    diagonal_ = RVector::Zero(static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const std::uint32_t s = basis_.state(i);
      double acc = 0;
      for (std::size_t p = 0; p < placed_.size(); ++p) acc += diags_[p][local(s, p)];
      diagonal_[static_cast<Eigen::Index>(i)] = acc;
    }
  }

  void apply(const RVector& x, RVector& y) const {
    const std::size_t size = basis_.size();
    y.resize(static_cast<Eigen::Index>(size));
    for (std::size_t i = 0; i < size; ++i) {
      const std::uint32_t s = basis_.state(i);
      double acc = diagonal_[static_cast<Eigen::Index>(i)] * x[static_cast<Eigen::Index>(i)];
      for (std::size_t p = 0; p < placed_.size(); ++p) {
        const std::uint32_t rest = s & ~masks_[p];
        for (const OffDiagonal& e : rows_[p][local(s, p)]) {
          acc += e.value * x[static_cast<Eigen::Index>(basis_.index(rest | e.to))];
        }
      }
      y[static_cast<Eigen::Index>(i)] = acc;
    }
  }

 private:
  std::uint32_t local(std::uint32_t s, std::size_t p) const {
    std::uint32_t l = 0;
    for (int b : placed_[p].bits) l = (l << 1) | ((s >> b) & 1u);
    return l;
  }

  static std::uint32_t spread(std::uint32_t l, const std::vector<int>& bits) {
    std::uint32_t s = 0;
    const std::size_t k = bits.size();
    for (std::size_t t = 0; t < k; ++t) {
      s |= ((l >> (k - 1 - t)) & 1u) << bits[t];
    }
    return s;
  }

  const SectorBasis& basis_;
  std::vector<PlacedTerm> placed_;
  std::vector<std::vector<std::vector<OffDiagonal>>> rows_;
  std::vector<std::uint32_t> masks_;
  std::vector<std::vector<double>> diags_;
  RVector diagonal_;
};

struct SectorResult {
  double energy = 0;
  double next = 0;
  double residual = 0;
  RVector vector;
  int matvecs = 0;
  std::vector<double> history;
};

SectorResult lanczos(const Operator& op, std::size_t dim, double norm_h,
                     const LanczosOptions& opts) {
  SectorResult out;
  if (dim == 1) {
    RVector x = RVector::Ones(1), y;
    op.apply(x, y);
    out.energy = out.next = y[0];
    out.vector = x;
    out.matvecs = 1;
    out.history.push_back(out.energy);
    return out;
  }
  const std::size_t by_memory =
      std::max<std::size_t>(8, opts.memory_budget_bytes / (sizeof(double) * dim));
  const std::size_t m = std::min({opts.max_krylov, by_memory, dim});
  const double tol = opts.tolerance * norm_h;

  Rng rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RVector start(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < start.size(); ++i) start[i] = normal(rng);
  start.normalize();

  double best_residual = std::numeric_limits<double>::infinity();
  RVector w, hx;
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    std::vector<RVector> v{start};
    std::vector<double> alpha, beta;
    RVector y0;
    double theta0 = 0, theta1 = 0;
    for (std::size_t j = 0; j < m; ++j) {
      op.apply(v[j], w);
      ++out.matvecs;
      alpha.push_back(v[j].dot(w));
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        for (const RVector& q : v) w -= q.dot(w) * q;
      }
      const double b = w.norm();
      const auto k = static_cast<Eigen::Index>(alpha.size());
      Eigen::SelfAdjointEigenSolver<RMatrix> tri;
      RVector d = Eigen::Map<RVector>(alpha.data(), k);
      RVector e = k > 1 ? RVector(Eigen::Map<RVector>(beta.data(), k - 1)) : RVector(0);
      tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
      theta0 = tri.eigenvalues()[0];
      theta1 = k > 1 ? tri.eigenvalues()[1] : theta0;
      y0 = tri.eigenvectors().col(0);
      out.history.push_back(theta0);
      const double estimate = b * std::abs(y0[k - 1]);
      if (estimate <= 0.1 * tol || b <= 1e-14 * norm_h || j + 1 == m) break;
      beta.push_back(b);
      v.push_back(w / b);
    }
    RVector x = RVector::Zero(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < y0.size(); ++i) x += y0[i] * v[static_cast<std::size_t>(i)];
    x.normalize();
    op.apply(x, hx);
    ++out.matvecs;
    const double energy = x.dot(hx);
    const double residual = (hx - energy * x).norm();
    best_residual = std::min(best_residual, residual);
    out.energy = energy;
    out.next = theta1;
    out.residual = residual;
    out.vector = x;
    if (residual <= tol) return out;
    start = x;
  }
  throw ConvergenceError("Lanczos did not reach the residual tolerance",
                         best_residual);
}

const char* sector_name(Sector s) {
  switch (s) {
    case Sector::Full:
      return "full";
    case Sector::ParityEven:
      return "parity+";
    case Sector::ParityOdd:
      return "parity-";
    case Sector::ZeroMagnetization:
      return "sz=0";
    default:
      return "auto";
  }
}

CVector embed(const RVector& x, const SectorBasis& basis, std::size_t n) {
  CVector full = CVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  // Fix the sign so the largest component is positive.
  Eigen::Index arg = 0;
  x.cwiseAbs().maxCoeff(&arg);
  const double sign = x[arg] < 0 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    full[static_cast<Eigen::Index>(basis.state(i))] = sign * x[static_cast<Eigen::Index>(i)];
  }
  return full;
}

}  // namespace

RMatrix LocalHamiltonian::dense() const {
  if (n_sites > 14) throw DomainError("dense: N too large");
  const std::size_t dim = std::size_t{1} << n_sites;
  RMatrix h = RMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const SectorBasis basis(n_sites, Sector::Full);
  const Operator op(*this, basis);
  RVector e = RVector::Zero(static_cast<Eigen::Index>(dim)), col;
  for (std::size_t j = 0; j < dim; ++j) {
    e.setZero();
    e[static_cast<Eigen::Index>(j)] = 1;
    op.apply(e, col);
    h.col(static_cast<Eigen::Index>(j)) = col;
  }
  return h;
}

double LocalHamiltonian::norm_bound() const {
  double total = 0;
  for (const LocalTerm& t : terms) {
    total += symmetric_eigenvalues(t.matrix).cwiseAbs().maxCoeff();
  }
  return total * static_cast<double>(n_sites);
}

LocalHamiltonian build_obrien_fendley(std::size_t n, double lambda) {
  if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
  const std::size_t min_sites = lambda != 0 ? 3 : 2;
  if (n < min_sites || n > 30) {
    throw DomainError("O'Brien-Fendley chain needs " + std::to_string(min_sites) +
                      " <= N <= 30");
  }
  const RMatrix x = pauli_x(), z = pauli_z(), id = RMatrix::Identity(2, 2);
  LocalHamiltonian h;
  h.n_sites = n;
  h.name = "obf";
  h.terms.push_back({0, 2, -kron(x, x)});
  h.terms.push_back({0, 1, -z});
  if (lambda != 0) {
    h.terms.push_back({0, 3, lambda * (kron(kron(x, x), z) + kron(kron(z, x), x))});
  }
  h.symmetries = {Symmetry::Parity};
  return h;
}

LocalHamiltonian build_xxz(std::size_t n, double delta) {
  if (!(delta >= -1.0 && delta < 1.0)) {
    throw DomainError("XXZ anisotropy must satisfy -1 <= delta < 1");
  }
  if (n < 2 || n > 30) throw DomainError("XXZ chain needs 2 <= N <= 30");
  const RMatrix x = pauli_x(), z = pauli_z();
  // Y (x) Y is real: -(|00><11| + |11><00|) + |01><10| + |10><01|.
  RMatrix yy = RMatrix::Zero(4, 4);
  yy(0, 3) = yy(3, 0) = -1;
  yy(1, 2) = yy(2, 1) = 1;
  LocalHamiltonian h;
  h.n_sites = n;
  h.name = "xxz";
  h.terms.push_back({0, 2, kron(x, x) + yy + delta * kron(z, z)});
  h.symmetries = {Symmetry::Parity, Symmetry::Magnetization};
  return h;
}

LocalHamiltonian build_field(std::size_t n) {
  if (n < 1 || n > 30) throw DomainError("field model needs 1 <= N <= 30");
  LocalHamiltonian h;
  h.n_sites = n;
  h.name = "field";
  h.terms.push_back({0, 1, -pauli_z()});
  h.symmetries = {Symmetry::Parity};
  return h;
}

double radius(double delta) {
  if (!(delta >= -1.0 && delta < 1.0)) {
    throw DomainError("radius: delta must satisfy -1 <= delta < 1");
  }
  return std::sqrt(2 * std::numbers::pi / std::acos(-delta));
}

GroundStateResult ground_state(const LocalHamiltonian& h, const LanczosOptions& opts) {
  const std::size_t n = h.n_sites;
  if (n < 1 || n > 24) throw DomainError("ground_state: need 1 <= N <= 24");
  for (const LocalTerm& t : h.terms) {
    if (t.support > 3 || t.support > n ||
        t.matrix.rows() != (Eigen::Index{1} << t.support) ||
        t.matrix.cols() != t.matrix.rows()) {
      throw DomainError("ground_state: malformed local term");
    }
    if ((t.matrix - t.matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw DomainError("ground_state: local term is not Hermitian");
    }
  }
  auto has = [&](Symmetry s) {
    return std::find(h.symmetries.begin(), h.symmetries.end(), s) != h.symmetries.end();
  };
  std::vector<Sector> sectors;
  if (opts.sector != Sector::Auto) {
    sectors.push_back(opts.sector);
  } else if (has(Symmetry::Magnetization) && n % 2 == 0) {
    sectors.push_back(Sector::ZeroMagnetization);
  } else if (has(Symmetry::Parity) && n >= 2) {
    sectors = {Sector::ParityEven, Sector::ParityOdd};
  } else {
    sectors.push_back(Sector::Full);
  }
  if ((opts.sector == Sector::ParityEven || opts.sector == Sector::ParityOdd) && n < 2) {
    throw DomainError("ground_state: parity sectors need N >= 2");
  }
  if ((opts.sector == Sector::ParityEven || opts.sector == Sector::ParityOdd) &&
      !has(Symmetry::Parity)) {
    throw DomainError("ground_state: Hamiltonian does not conserve parity");
  }
  if (opts.sector == Sector::ZeroMagnetization &&
      (!has(Symmetry::Magnetization) || n % 2 != 0)) {
    throw DomainError("ground_state: zero magnetization needs a conserving even ring");
  }

  const double norm_h = std::max(h.norm_bound(), 1e-300);
  std::optional<GroundStateResult> best;
  std::vector<double> energies;
  for (Sector s : sectors) {
    const SectorBasis basis(n, s);
    const Operator op(h, basis);
    SectorResult r = lanczos(op, basis.size(), norm_h, opts);
    energies.push_back(r.energy);
    if (!best || r.energy < best->energy) {
      const double next = best ? best->energy : r.next;
      best = GroundStateResult{
          PureState::normalized(embed(r.vector, basis, n), std::vector<std::size_t>(n, 2)),
          r.energy,
          r.residual,
          sector_name(s),
          next,
          false,
          (best ? best->matvecs : 0) + r.matvecs,
          std::move(r.history)};
    } else {
      best->next_energy = std::min(best->next_energy, r.energy);
      best->matvecs += r.matvecs;
    }
  }
  if (sectors.size() > 1) {
    std::sort(energies.begin(), energies.end());
    best->next_energy = energies[1];
  }
  best->degenerate = std::abs(best->next_energy - best->energy) < 1e-10;
  return std::move(*best);
}

double free_fermion_ising_oracle(std::size_t n) {
  if (n < 2) throw DomainError("free_fermion_ising_oracle: need N >= 2");
  // Even fermion parity: antiperiodic momenta k = 2 pi (m + 1/2) / N with
  // mode energies 4 |sin(k/2)|; E = -(1/2) sum_k 4 |sin(k/2)|.
  double e = 0;
  for (std::size_t m = 0; m < n; ++m) {
    e -= 2 * std::abs(std::sin(std::numbers::pi * (static_cast<double>(m) + 0.5) /
                               static_cast<double>(n)));
  }
  return e;
}

CVector translate_sites(const CVector& amplitudes, std::size_t n_sites) {
  const std::size_t dim = std::size_t{1} << n_sites;
  if (static_cast<std::size_t>(amplitudes.size()) != dim) {
    throw DomainError("translate_sites: vector length is not 2^N");
  }
  CVector out(amplitudes.size());
  for (std::size_t s = 0; s < dim; ++s) {
    const std::size_t t = (s >> 1) | ((s & 1u) << (n_sites - 1));
    out[static_cast<Eigen::Index>(t)] = amplitudes[static_cast<Eigen::Index>(s)];
  }
  return out;
}

}  // namespace tripent

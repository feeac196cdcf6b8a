// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

#include "tripent/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tripent/error.hpp"

namespace tripent {

namespace {

using RowMajorC =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

void validate_party_set(std::span<const std::size_t> set, std::size_t n,
                        const char* what) {
  std::vector<bool> seen(n, false);
  for (auto p : set) {
    if (p >= n) {
      throw DomainError(std::string(what) + ": subsystem index " +
                        std::to_string(p) + " out of range");
    }
    if (seen[p]) {
      throw DomainError(std::string(what) + ": duplicate subsystem index " +
                        std::to_string(p));
    }
    seen[p] = true;
  }
}

// Amplitudes reordered so that new party k is old party order[k].
CVector permute_amplitudes(const CVector& amps,
                           const std::vector<std::size_t>& dims,
                           std::span<const std::size_t> order) {
  const std::size_t n = dims.size();
  std::vector<std::size_t> new_dims(n);
  for (std::size_t k = 0; k < n; ++k) new_dims[k] = dims[order[k]];
  std::vector<std::size_t> new_strides(n, 1);
  for (std::size_t k = n; k-- > 1;) {
    new_strides[k - 1] = new_strides[k] * new_dims[k];
  }
  // Output stride seen by each input party.
  std::vector<std::size_t> out_stride(n);
  for (std::size_t k = 0; k < n; ++k) out_stride[order[k]] = new_strides[k];

  CVector out(amps.size());
  std::vector<std::size_t> digit(n, 0);
  std::size_t offset = 0;
  const std::size_t total = static_cast<std::size_t>(amps.size());
  const std::size_t last = n - 1;
  const std::size_t inner = dims[last];
  const std::size_t inner_stride = out_stride[last];
  for (std::size_t i = 0; i < total; i += inner) {
    for (std::size_t j = 0; j < inner; ++j) {
      out[static_cast<Eigen::Index>(offset + j * inner_stride)] =
          amps[static_cast<Eigen::Index>(i + j)];
    }
    // Advance the odometer over all but the innermost party.
    for (std::size_t k = last; k-- > 0;) {
      ++digit[k];
      offset += out_stride[k];
      if (digit[k] < dims[k]) break;
      offset -= digit[k] * out_stride[k];
      digit[k] = 0;
    }
  }
  return out;
}

bool is_identity(std::span<const std::size_t> order) {
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] != k) return false;
  }
  return true;
}

template <class Mat>
struct EigOf;
template <>
struct EigOf<RMatrix> {
  static SymmetricEigen run(const RMatrix& m) { return symmetric_eigh(m); }
};
template <>
struct EigOf<CMatrix> {
  static HermitianEigen run(const CMatrix& m) { return hermitian_eigh(m); }
};

// Principal square root of M M^dagger, via the smaller Gram matrix.
template <class Mat>
Mat sqrt_of_gram(const Mat& m) {
  if (m.cols() < m.rows()) {
    Mat k = m.adjoint() * m;
    auto eig = EigOf<Mat>::run(0.5 * (k + Mat(k.adjoint())));
    RVector inv_sqrt = RVector::Zero(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      if (eig.values[i] > kEigenvalueFloor) {
        inv_sqrt[i] = 1.0 / std::sqrt(eig.values[i]);
      }
    }
    Mat left = m * eig.vectors;
    Mat core = left * inv_sqrt.asDiagonal();
    return core * left.adjoint();
  }
  Mat rho = m * m.adjoint();
  auto eig = EigOf<Mat>::run(0.5 * (rho + Mat(rho.adjoint())));
  RVector sq = RVector::Zero(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] > kEigenvalueFloor) sq[i] = std::sqrt(eig.values[i]);
  }
  return eig.vectors * sq.asDiagonal() * eig.vectors.adjoint();
}

// S(A A*) of |sqrt(rho_AB)> given the dA*dB square root.
template <class Mat>
double reflected_from_sqrt(const Mat& sq, std::size_t da, std::size_t db) {
  const auto dA = static_cast<Eigen::Index>(da);
  const auto dB = static_cast<Eigen::Index>(db);
  Mat x(dA * dA, dB * dB);
  for (Eigen::Index a = 0; a < dA; ++a) {
    for (Eigen::Index ap = 0; ap < dA; ++ap) {
      for (Eigen::Index b = 0; b < dB; ++b) {
        for (Eigen::Index bp = 0; bp < dB; ++bp) {
          x(a * dA + ap, b * dB + bp) = sq(a * dB + b, ap * dB + bp);
        }
      }
    }
  }
  return entropy_from_spectrum(gram_spectrum(x));
}

std::size_t product_of(const PureState& s, const PartySet& parties) {
  std::size_t p = 1;
  for (auto k : parties) p *= s.dim(k);
  return p;
}

}  // namespace

// ---------------------------------------------------------------- PureState

PureState::PureState(CVector amplitudes, std::vector<std::size_t> dims,
                     std::vector<std::string> labels)
    : amplitudes_(std::move(amplitudes)),
      dims_(std::move(dims)),
      labels_(std::move(labels)) {
  if (dims_.empty()) throw DomainError("PureState: no subsystems");
  for (auto d : dims_) {
    if (d == 0) throw DomainError("PureState: zero subsystem dimension");
  }
  if (product(dims_) != static_cast<std::size_t>(amplitudes_.size())) {
    throw DomainError("PureState: product of dims (" +
                      std::to_string(product(dims_)) +
                      ") does not match amplitude count (" +
                      std::to_string(amplitudes_.size()) + ")");
  }
  if (!labels_.empty() && labels_.size() != dims_.size()) {
    throw DomainError("PureState: label count does not match subsystems");
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (!(std::abs(norm2 - 1.0) <= 1e-12)) {
    throw DomainError("PureState: squared norm " + std::to_string(norm2) +
                      " is not 1");
  }
}

PureState PureState::normalized(CVector amplitudes,
                                std::vector<std::size_t> dims,
                                std::vector<std::string> labels) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("PureState: cannot normalize a zero or non-finite vector");
  }
  amplitudes /= norm;
  return PureState(std::move(amplitudes), std::move(dims), std::move(labels));
}

PureState PureState::basis(std::vector<std::size_t> dims,
                           const std::vector<std::size_t>& digits) {
  if (digits.size() != dims.size()) {
    throw DomainError("PureState::basis: digit count does not match dims");
  }
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (digits[k] >= dims[k]) throw DomainError("PureState::basis: bad digit");
    index = index * dims[k] + digits[k];
  }
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(product(dims)));
  amps[static_cast<Eigen::Index>(index)] = 1.0;
  return PureState(std::move(amps), std::move(dims));
}

bool PureState::is_real() const { return tripent::is_real(amplitudes_); }

CMatrix PureState::bipartite_matrix(
    std::span<const std::size_t> row_parties) const {
  validate_party_set(row_parties, dims_.size(), "bipartite_matrix");
  std::vector<std::size_t> order(row_parties.begin(), row_parties.end());
  std::vector<bool> in_rows(dims_.size(), false);
  for (auto p : row_parties) in_rows[p] = true;
  std::size_t rows = 1;
  for (auto p : row_parties) rows *= dims_[p];
  for (std::size_t p = 0; p < dims_.size(); ++p) {
    if (!in_rows[p]) order.push_back(p);
  }
  const auto r = static_cast<Eigen::Index>(rows);
  const auto c = static_cast<Eigen::Index>(size() / rows);
  if (is_identity(order)) {
    return Eigen::Map<const RowMajorC>(amplitudes_.data(), r, c);
  }
  const CVector permuted = permute_amplitudes(amplitudes_, dims_, order);
  return Eigen::Map<const RowMajorC>(permuted.data(), r, c);
}

PureState PureState::permuted(std::span<const std::size_t> order) const {
  if (order.size() != dims_.size()) {
    throw DomainError("permuted: order must list every subsystem");
  }
  validate_party_set(order, dims_.size(), "permuted");
  std::vector<std::size_t> new_dims(order.size());
  std::vector<std::string> new_labels;
  for (std::size_t k = 0; k < order.size(); ++k) {
    new_dims[k] = dims_[order[k]];
    if (!labels_.empty()) new_labels.push_back(labels_[order[k]]);
  }
  CVector amps = is_identity(order)
                     ? amplitudes_
                     : permute_amplitudes(amplitudes_, dims_, order);
  return PureState(std::move(amps), std::move(new_dims), std::move(new_labels));
}

PureState PureState::grouped(const std::vector<PartySet>& groups) const {
  std::vector<std::size_t> order;
  for (const auto& g : groups) {
    if (g.empty()) throw DomainError("grouped: empty group");
    order.insert(order.end(), g.begin(), g.end());
  }
  if (order.size() != dims_.size()) {
    throw DomainError("grouped: groups must cover every subsystem");
  }
  validate_party_set(order, dims_.size(), "grouped");
  std::vector<std::size_t> new_dims;
  for (const auto& g : groups) new_dims.push_back(product_of(*this, g));
  CVector amps = is_identity(order)
                     ? amplitudes_
                     : permute_amplitudes(amplitudes_, dims_, order);
  return PureState(std::move(amps), std::move(new_dims));
}

CVector PureState::apply_local(std::size_t party, const CMatrix& op) const {
  if (party >= dims_.size()) throw DomainError("apply_local: bad party index");
  const auto d = static_cast<Eigen::Index>(dims_[party]);
  if (op.cols() != d) {
    throw DomainError("apply_local: operator does not match party dimension");
  }
  Eigen::Index left = 1;
  for (std::size_t k = 0; k < party; ++k) {
    left *= static_cast<Eigen::Index>(dims_[k]);
  }
  const Eigen::Index right = static_cast<Eigen::Index>(size()) / (left * d);
  const Eigen::Index r = op.rows();
  CVector out(left * r * right);
  for (Eigen::Index l = 0; l < left; ++l) {
    Eigen::Map<const RowMajorC> in(amplitudes_.data() + l * d * right, d, right);
    Eigen::Map<RowMajorC> dst(out.data() + l * r * right, r, right);
    dst.noalias() = op * in;
  }
  return out;
}

// ------------------------------------------------------------ DensityMatrix

DensityMatrix::DensityMatrix(CMatrix matrix, std::vector<std::size_t> dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw DomainError("DensityMatrix: matrix is not square");
  }
  if (dims_.empty() ||
      product(dims_) != static_cast<std::size_t>(matrix_.rows())) {
    throw DomainError("DensityMatrix: dims do not match matrix size");
  }
  if (!is_hermitian(matrix_, 1e-12)) {
    throw DomainError("DensityMatrix: matrix is not Hermitian");
  }
  const double tr = matrix_.trace().real();
  if (!(std::abs(tr - 1.0) <= 1e-12)) {
    throw DomainError("DensityMatrix: trace " + std::to_string(tr) +
                      " is not 1");
  }
}

RVector DensityMatrix::spectrum() const {
  RVector w = tripent::is_real(matrix_) ? symmetric_eigenvalues(matrix_.real())
                                        : hermitian_eigenvalues(matrix_);
  if (w.size() > 0 && w.minCoeff() < -1e-10) {
    throw DomainError("DensityMatrix: negative eigenvalue " +
                      std::to_string(w.minCoeff()));
  }
  return w;
}

// ------------------------------------------------------------- Tripartition

Tripartition::Tripartition(std::vector<Party> assignment, bool ring)
    : assignment_(std::move(assignment)) {
  for (Party p : {Party::A, Party::B, Party::C}) {
    if (std::find(assignment_.begin(), assignment_.end(), p) ==
        assignment_.end()) {
      throw DomainError("Tripartition: parties A, B and C must be nonempty");
    }
  }
  if (ring) {
    const std::size_t n = assignment_.size();
    for (Party p : {Party::A, Party::B, Party::C}) {
      std::size_t starts = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (assignment_[i] == p && assignment_[(i + n - 1) % n] != p) ++starts;
      }
      if (starts > 1) {
        throw DomainError("Tripartition: parties must be contiguous on a ring");
      }
    }
  }
}

Tripartition Tripartition::contiguous(std::size_t n, std::size_t n_a,
                                      std::size_t n_b) {
  if (n_a == 0 || n_b == 0 || n_a + n_b >= n) {
    throw DomainError("Tripartition::contiguous: need 1 <= nA, nB and nA+nB < N");
  }
  std::vector<Party> a(n, Party::C);
  for (std::size_t i = 0; i < n_a; ++i) a[i] = Party::A;
  for (std::size_t i = n_a; i < n_a + n_b; ++i) a[i] = Party::B;
  return Tripartition(std::move(a), true);
}

PartySet Tripartition::indices(Party p) const {
  PartySet out;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] == p) out.push_back(i);
  }
  return out;
}

PartySet Tripartition::union_of(Party p, Party q) const {
  PartySet out = indices(p);
  const PartySet second = indices(q);
  out.insert(out.end(), second.begin(), second.end());
  return out;
}

// ------------------------------------------------------------------ entropy

DensityMatrix reduced_density(const PureState& state,
                              std::span<const std::size_t> keep) {
  if (keep.empty()) throw DomainError("reduced_density: empty keep set");
  validate_party_set(keep, state.num_parties(), "reduced_density");
  const CMatrix m = state.bipartite_matrix(keep);
  CMatrix rho = m * m.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  std::vector<std::size_t> dims;
  for (auto p : keep) dims.push_back(state.dim(p));
  return DensityMatrix(std::move(rho), std::move(dims));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_from_spectrum(rho.spectrum());
}

double von_neumann_entropy(const CMatrix& rho) {
  if (!is_hermitian(rho, 1e-12)) {
    throw DomainError("von_neumann_entropy: matrix is not Hermitian");
  }
  const RVector w = hermitian_eigenvalues(rho);
  if (w.size() > 0 && w.minCoeff() < -1e-10) {
    throw DomainError("von_neumann_entropy: negative eigenvalue");
  }
  return entropy_from_spectrum(w);
}

double subsystem_entropy(const PureState& state,
                         std::span<const std::size_t> parties) {
  validate_party_set(parties, state.num_parties(), "subsystem_entropy");
  if (parties.empty() || parties.size() == state.num_parties()) return 0.0;
  return entropy_from_spectrum(gram_spectrum(state.bipartite_matrix(parties)));
}

EntropyReport entropy_report(const PureState& state, const Tripartition& part) {
  if (part.size() != state.num_parties()) {
    throw DomainError("tripartition size does not match the state");
  }
  EntropyReport r;
  r.S_A = subsystem_entropy(state, part.indices(Party::A));
  r.S_B = subsystem_entropy(state, part.indices(Party::B));
  r.S_C = subsystem_entropy(state, part.indices(Party::C));
  r.S_AB = subsystem_entropy(state, part.union_of(Party::A, Party::B));
  r.I_AB = r.S_A + r.S_B - r.S_AB;
  return r;
}

double mutual_information(const PureState& state, const Tripartition& part) {
  return entropy_report(state, part).I_AB;
}

double conditional_mutual_information(const PureState& state,
                                      std::span<const std::size_t> x,
                                      std::span<const std::size_t> y,
                                      std::span<const std::size_t> z) {
  PartySet all(x.begin(), x.end());
  all.insert(all.end(), y.begin(), y.end());
  all.insert(all.end(), z.begin(), z.end());
  // Rejects overlaps between the three sets as duplicates.
  try {
    validate_party_set(all, state.num_parties(), "conditional_mutual_information");
  } catch (const DomainError&) {
    throw DomainError("conditional_mutual_information: sets must be disjoint "
                      "and in range");
  }
  PartySet xy(x.begin(), x.end());
  xy.insert(xy.end(), y.begin(), y.end());
  PartySet yz(y.begin(), y.end());
  yz.insert(yz.end(), z.begin(), z.end());
  return subsystem_entropy(state, xy) + subsystem_entropy(state, yz) -
         subsystem_entropy(state, all) - subsystem_entropy(state, y);
}

PureState canonical_purification(const DensityMatrix& rho) {
  const CMatrix& m = rho.matrix();
  const HermitianEigen eig = hermitian_eigh(m);
  if (eig.values.size() > 0 && eig.values.minCoeff() < -1e-8) {
    throw DomainError("canonical_purification: not a density matrix "
                      "(eigenvalue " + std::to_string(eig.values.minCoeff()) +
                      ")");
  }
  RVector sq = RVector::Zero(eig.values.size());
  for (Eigen::Index i = 0; i < sq.size(); ++i) {
    if (eig.values[i] > kEigenvalueFloor) sq[i] = std::sqrt(eig.values[i]);
  }
  const CMatrix root = eig.vectors * sq.asDiagonal() * eig.vectors.adjoint();

  const std::vector<std::size_t>& dims = rho.dims();
  const std::size_t k = dims.size();
  const auto total = static_cast<Eigen::Index>(rho.size());
  // Position of each column multi-index once its digits are reversed.
  std::vector<std::size_t> mirrored(static_cast<std::size_t>(total));
  for (std::size_t j = 0; j < mirrored.size(); ++j) {
    std::size_t rest = j;
    std::vector<std::size_t> digit(k);
    for (std::size_t p = k; p-- > 0;) {
      digit[p] = rest % dims[p];
      rest /= dims[p];
    }
    std::size_t r = 0;
    for (std::size_t p = k; p-- > 0;) r = r * dims[p] + digit[p];
    mirrored[j] = r;
  }
  CVector amps(total * total);
  for (Eigen::Index i = 0; i < total; ++i) {
    for (Eigen::Index j = 0; j < total; ++j) {
      amps[i * total + static_cast<Eigen::Index>(mirrored[j])] = root(i, j);
    }
  }
  std::vector<std::size_t> out_dims(dims);
  out_dims.insert(out_dims.end(), dims.rbegin(), dims.rend());
  return PureState::normalized(std::move(amps), std::move(out_dims));
}

double reflected_entropy(const DensityMatrix& rho_ab) {
  if (rho_ab.dims().size() != 2) {
    throw DomainError("reflected_entropy: rho must have exactly two subsystems");
  }
  const CMatrix& m = rho_ab.matrix();
  const std::size_t da = rho_ab.dims()[0];
  const std::size_t db = rho_ab.dims()[1];
  const auto check = [](const RVector& w) {
    if (w.size() > 0 && w.minCoeff() < -1e-8) {
      throw DomainError("reflected_entropy: not a density matrix");
    }
  };
  if (is_real(m)) {
    const SymmetricEigen eig = symmetric_eigh(m.real());
    check(eig.values);
    RVector sq = eig.values.unaryExpr(
        [](double v) { return v > kEigenvalueFloor ? std::sqrt(v) : 0.0; });
    const RMatrix root = eig.vectors * sq.asDiagonal() * eig.vectors.transpose();
    return reflected_from_sqrt(root, da, db);
  }
  const HermitianEigen eig = hermitian_eigh(m);
  check(eig.values);
  RVector sq = eig.values.unaryExpr(
      [](double v) { return v > kEigenvalueFloor ? std::sqrt(v) : 0.0; });
  const CMatrix root = eig.vectors * sq.asDiagonal() * eig.vectors.adjoint();
  return reflected_from_sqrt(root, da, db);
}

double reflected_entropy(const PureState& state, const Tripartition& part) {
  if (part.size() != state.num_parties()) {
    throw DomainError("tripartition size does not match the state");
  }
  const PartySet a = part.indices(Party::A);
  const PartySet b = part.indices(Party::B);
  const PartySet ab = part.union_of(Party::A, Party::B);
  const std::size_t da = product_of(state, a);
  const std::size_t db = product_of(state, b);
  const CMatrix m = state.bipartite_matrix(ab);
  if (is_real(m)) {
    return reflected_from_sqrt(sqrt_of_gram<RMatrix>(m.real()), da, db);
  }
  return reflected_from_sqrt(sqrt_of_gram<CMatrix>(m), da, db);
}

double h_measure(const PureState& state, const Tripartition& part) {
  return reflected_entropy(state, part) - mutual_information(state, part);
}

HReport h_report(const PureState& state, const Tripartition& part) {
  HReport r;
  r.reflected = reflected_entropy(state, part);
  r.mutual = mutual_information(state, part);
  r.h = r.reflected - r.mutual;

  const PartySet a = part.indices(Party::A);
  const PartySet b = part.indices(Party::B);
  const DensityMatrix full = reduced_density(state, part.union_of(Party::A, Party::B));
  const DensityMatrix rho(full.matrix(),
                          {product_of(state, a), product_of(state, b)});
  const PureState pur = canonical_purification(rho);
  // Parties of the purification: 0 = A, 1 = B, 2 = B*, 3 = A*.
  const PartySet A{0}, B{1}, Bs{2}, As{3};
  r.cmi[0] = conditional_mutual_information(pur, As, A, B);
  r.cmi[1] = conditional_mutual_information(pur, A, B, Bs);
  r.cmi[2] = conditional_mutual_information(pur, B, A, As);
  r.cmi[3] = conditional_mutual_information(pur, Bs, As, A);
  return r;
}

}  // namespace tripent

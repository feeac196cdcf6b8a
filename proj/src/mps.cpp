// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

#include "tripent/mps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <nlohmann/json.hpp>

#include "tripent/error.hpp"
#include "tripent/models.hpp"

namespace tripent {

static_assert(std::endian::native == std::endian::little,
              "artifact IO assumes a little-endian host");

namespace {

using json = nlohmann::json;

constexpr char kMagic[8] = {'T', 'R', 'I', 'P', 'E', 'N', 'T', '1'};

CMatrix kron_conj(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index D = a.rows();
  CMatrix t(D * D, D * D);
  for (Eigen::Index i = 0; i < D; ++i)
    for (Eigen::Index j = 0; j < D; ++j)
      t.block(i * D, j * D, D, D) = a(i, j) * b.conjugate();
  return t;
}

// Y(P, X)[c,d] = sum_ab P[a,b] X[(b,d),(a,c)].
CMatrix contract_y(const CMatrix& p, const CMatrix& x, Eigen::Index D) {
  CMatrix y = CMatrix::Zero(D, D);
  for (Eigen::Index a = 0; a < D; ++a)
    for (Eigen::Index b = 0; b < D; ++b) {
      const Complex w = p(a, b);
      if (w == Complex(0)) continue;
      y += w * x.block(b * D, a * D, D, D).transpose();
    }
  return y;
}

// Products M_{s_1} ... M_{s_k} for every local configuration, first site
// most significant.
std::vector<CMatrix> block_products(const std::vector<CMatrix>& m, std::size_t k) {
  std::vector<CMatrix> out{CMatrix::Identity(m[0].rows(), m[0].cols())};
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<CMatrix> next;
    next.reserve(out.size() * m.size());
    for (const CMatrix& p : out)
      for (const CMatrix& ms : m) next.push_back(p * ms);
    out = std::move(next);
  }
  return out;
}

void write_binary(const std::string& path, const json& header,
                  const std::vector<Complex>& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  const std::string h = header.dump();
  const std::uint64_t len = h.size();
  f.write(kMagic, sizeof kMagic);
  f.write(reinterpret_cast<const char*>(&len), sizeof len);
  f.write(h.data(), static_cast<std::streamsize>(h.size()));
  f.write(reinterpret_cast<const char*>(data.data()),
          static_cast<std::streamsize>(data.size() * sizeof(Complex)));
  if (!f) throw IoError("write failed for " + path);
}

void write_json(const std::string& path, json header, const std::vector<Complex>& data) {
  json arr = json::array();
  for (const Complex& z : data) arr.push_back({z.real(), z.imag()});
  header["data"] = std::move(arr);
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << header.dump() << '\n';
  if (!f) throw IoError("write failed for " + path);
}

std::pair<json, std::vector<Complex>> read_artifact(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (bytes.size() >= 16 && std::memcmp(bytes.data(), kMagic, 8) == 0) {
    std::uint64_t len;
    std::memcpy(&len, bytes.data() + 8, sizeof len);
    if (16 + len > bytes.size()) throw IoError(path + ": truncated header");
    json header;
    try {
      header = json::parse(bytes.substr(16, len));
    } catch (const json::exception& e) {
      throw IoError(path + ": bad header: " + e.what());
    }
    const std::size_t payload = bytes.size() - 16 - len;
    if (payload % sizeof(Complex) != 0) throw IoError(path + ": ragged payload");
    std::vector<Complex> data(payload / sizeof(Complex));
    std::memcpy(data.data(), bytes.data() + 16 + len, payload);
    return {header, data};
  }
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw IoError(path + ": neither a binary artifact nor JSON: " + e.what());
  }
  if (!j.contains("data") || !j["data"].is_array()) throw IoError(path + ": missing data");
  std::vector<Complex> data;
  for (const auto& z : j["data"]) {
    if (!z.is_array() || z.size() != 2) throw IoError(path + ": data entries must be [re, im]");
    data.emplace_back(z[0].get<double>(), z[1].get<double>());
  }
  j.erase("data");
  return {j, data};
}

void check_endianness(const json& h, const std::string& path) {
  if (h.value("endianness", "little") != "little") {
    throw IoError(path + ": only little-endian artifacts are supported");
  }
}

}  // namespace

UniformMPS::UniformMPS(std::vector<CMatrix> tensors, std::size_t n_sites)
    : tensors_(std::move(tensors)), n_sites_(n_sites) {
  if (tensors_.empty()) throw DomainError("UniformMPS: no physical states");
  const Eigen::Index D = tensors_[0].rows();
  if (D == 0) throw DomainError("UniformMPS: empty bond");
  for (const CMatrix& m : tensors_) {
    if (m.rows() != D || m.cols() != D) {
      throw DomainError("UniformMPS: tensors must all be D x D");
    }
    if (!m.allFinite()) throw DomainError("UniformMPS: non-finite entries");
  }
  if (n_sites_ < 3) throw DomainError("UniformMPS: need at least three sites");
}

TransferMatrix transfer_matrix(const UniformMPS& mps) {
  const auto D = static_cast<Eigen::Index>(mps.D());
  TransferMatrix t{CMatrix::Zero(D * D, D * D), mps.D(), mps.n_sites()};
  for (const CMatrix& m : mps.tensors()) t.t += kron_conj(m, m);
  return t;
}

CMatrix matrix_power(const CMatrix& m, std::size_t n) {
  CMatrix result = CMatrix::Identity(m.rows(), m.cols());
  CMatrix base = m;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

CoarseTensor coarse_grain(const TransferMatrix& t, std::size_t n) {
  if (n < 1) throw DomainError("coarse_grain: n must be at least 1");
  const auto D = static_cast<Eigen::Index>(t.D);
  const CMatrix tn = matrix_power(t.t, n);
  CMatrix g(D * D, D * D);
  for (Eigen::Index a = 0; a < D; ++a)
    for (Eigen::Index b = 0; b < D; ++b)
      for (Eigen::Index c = 0; c < D; ++c)
        for (Eigen::Index d = 0; d < D; ++d) g(a * D + b, c * D + d) = tn(a * D + c, b * D + d);
  const HermitianEigen eig = hermitian_eigh(0.5 * (g + g.adjoint()));
  const double top = eig.values.maxCoeff();
  if (!(top > 0)) throw DomainError("coarse_grain: transfer matrix has no positive weight");
  if (eig.values.minCoeff() < -1e-10 * top) {
    throw DomainError("coarse_grain: regrouped transfer matrix is not positive "
                      "semidefinite; malformed tensor");
  }
  CoarseTensor out;
  out.n = n;
  out.ring_sites = t.n_sites;
  std::vector<double> kept;
  for (Eigen::Index i = eig.values.size(); i-- > 0;) {
    const double lam = eig.values[i];
    if (lam <= kEigenvalueFloor * top) break;
    CMatrix m(D, D);
    for (Eigen::Index a = 0; a < D; ++a)
      for (Eigen::Index b = 0; b < D; ++b) m(a, b) = std::sqrt(lam) * eig.vectors(a * D + b, i);
    out.tensors.push_back(std::move(m));
    kept.push_back(lam);
  }
  out.weights = Eigen::Map<RVector>(kept.data(), static_cast<Eigen::Index>(kept.size()));
  return out;
}

CMatrix reconstruct_transfer(const CoarseTensor& m) {
  const auto D = static_cast<Eigen::Index>(m.D());
  CMatrix t = CMatrix::Zero(D * D, D * D);
  for (const CMatrix& ms : m.tensors) t += kron_conj(ms, ms);
  return t;
}

SchmidtResult schmidt_bipartite(const CoarseTensor& ma, const CoarseTensor& mb) {
  if (ma.D() != mb.D() || ma.d() == 0 || mb.d() == 0) {
    throw DomainError("schmidt_bipartite: bond dimensions must match");
  }
  if (ma.ring_sites != 0 && ma.ring_sites == mb.ring_sites &&
      ma.n + mb.n != ma.ring_sites) {
    throw DomainError("schmidt_bipartite: blocks must cover the ring");
  }
  const auto D = static_cast<Eigen::Index>(ma.D());
  CMatrix a(static_cast<Eigen::Index>(ma.d()), D * D);
  CMatrix b(D * D, static_cast<Eigen::Index>(mb.d()));
  for (std::size_t s = 0; s < ma.d(); ++s)
    for (Eigen::Index i = 0; i < D; ++i)
      for (Eigen::Index j = 0; j < D; ++j) a(static_cast<Eigen::Index>(s), i * D + j) = ma.tensors[s](i, j);
  for (std::size_t s = 0; s < mb.d(); ++s)
    for (Eigen::Index i = 0; i < D; ++i)
      for (Eigen::Index j = 0; j < D; ++j) b(j * D + i, static_cast<Eigen::Index>(s)) = mb.tensors[s](i, j);
  const CMatrix psi = a * b;
  const double norm = psi.norm();
  if (!(norm > 0)) throw DomainError("schmidt_bipartite: state has zero norm");
  Eigen::BDCSVD<CMatrix> svd(psi / norm, Eigen::ComputeThinU);
  SchmidtResult r;
  r.values = svd.singularValues();
  r.left = svd.matrixU();
  double s = 0;
  for (Eigen::Index i = 0; i < r.values.size(); ++i) {
    const double p = r.values[i] * r.values[i];
    if (p > kEigenvalueFloor) s -= p * std::log(p);
  }
  r.entropy = s;
  return r;
}

std::size_t retained_rank(const RVector& values, const TruncationRule& rule) {
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (v * v > kEigenvalueFloor && v > rule.epsilon) ++k;
  }
  if (rule.cap) k = std::min(k, *rule.cap);
  return std::max<std::size_t>(k, 1);
}

CoarseTensor truncate_physical(const CoarseTensor& m, const SchmidtResult& schmidt,
                               const TruncationRule& rule) {
  if (static_cast<std::size_t>(schmidt.left.rows()) != m.d()) {
    throw DomainError("truncate_physical: Schmidt vectors do not match the tensor");
  }
  const std::size_t keep = retained_rank(schmidt.values, rule);
  CoarseTensor out;
  out.n = m.n;
  out.ring_sites = m.ring_sites;
  out.weights = schmidt.values.head(static_cast<Eigen::Index>(keep)).cwiseAbs2();
  out.discarded_weight = schmidt.values.tail(schmidt.values.size() -
                                             static_cast<Eigen::Index>(keep))
                             .squaredNorm();
  for (std::size_t k = 0; k < keep; ++k) {
    CMatrix t = CMatrix::Zero(static_cast<Eigen::Index>(m.D()), static_cast<Eigen::Index>(m.D()));
    for (std::size_t s = 0; s < m.d(); ++s) {
      t += std::conj(schmidt.left(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k))) *
           m.tensors[s];
    }
    out.tensors.push_back(std::move(t));
  }
  return out;
}

CoarseTripartite assemble_tripartite(const UniformMPS& mps, std::size_t n_a,
                                     std::size_t n_b, const TruncationRule& rule) {
  const std::size_t n = mps.n_sites();
  if (n_a == 0 || n_b == 0 || n_a + n_b >= n) {
    throw DomainError("assemble_tripartite: need 1 <= nA, nB and nA + nB < N");
  }
  const std::size_t n_c = n - n_a - n_b;
  const TransferMatrix t = transfer_matrix(mps);
  auto block = [&](std::size_t k) {
    const CoarseTensor m = coarse_grain(t, k);
    const CoarseTensor rest = coarse_grain(t, n - k);
    return truncate_physical(m, schmidt_bipartite(m, rest), rule);
  };
  CoarseTripartite out{block(n_a), block(n_b), block(n_c), rule};
  return out;
}

CoarseTripartite assemble_tripartite(CoarseTensor a, CoarseTensor b, CoarseTensor c) {
  if (a.D() != b.D() || b.D() != c.D()) {
    throw DomainError("assemble_tripartite: bond dimensions must match");
  }
  return {std::move(a), std::move(b), std::move(c), {}};
}

PureState dense_export(const CoarseTripartite& t) {
  const auto D = static_cast<Eigen::Index>(t.a.D());
  if (t.b.D() != t.a.D() || t.c.D() != t.a.D()) {
    throw DomainError("dense_export: bond dimensions must match");
  }
  const std::size_t da = t.a.d(), db = t.b.d(), dc = t.c.d();
  CMatrix ab(static_cast<Eigen::Index>(da * db), D * D);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b) {
      const CMatrix p = t.a.tensors[a] * t.b.tensors[b];
      for (Eigen::Index i = 0; i < D; ++i)
        for (Eigen::Index j = 0; j < D; ++j) ab(static_cast<Eigen::Index>(a * db + b), i * D + j) = p(i, j);
    }
  CMatrix c(D * D, static_cast<Eigen::Index>(dc));
  for (std::size_t s = 0; s < dc; ++s)
    for (Eigen::Index i = 0; i < D; ++i)
      for (Eigen::Index j = 0; j < D; ++j) c(j * D + i, static_cast<Eigen::Index>(s)) = t.c.tensors[s](i, j);
  const CMatrix psi = ab * c;
  CVector amps(psi.size());
  for (Eigen::Index i = 0; i < psi.rows(); ++i)
    for (Eigen::Index j = 0; j < psi.cols(); ++j) amps[i * psi.cols() + j] = psi(i, j);
  return PureState::normalized(std::move(amps), {da, db, dc}, {"A", "B", "C"});
}

PureState mps_to_dense(const UniformMPS& mps) {
  const double size = std::pow(static_cast<double>(mps.d()), static_cast<double>(mps.n_sites()));
  if (size > static_cast<double>(std::size_t{1} << 22)) {
    throw DomainError("mps_to_dense: state too large");
  }
  const std::size_t half = mps.n_sites() / 2;
  const std::vector<CMatrix> left = block_products(mps.tensors(), half);
  const std::vector<CMatrix> right = block_products(mps.tensors(), mps.n_sites() - half);
  const auto D = static_cast<Eigen::Index>(mps.D());
  CMatrix l(static_cast<Eigen::Index>(left.size()), D * D);
  CMatrix r(D * D, static_cast<Eigen::Index>(right.size()));
  for (std::size_t s = 0; s < left.size(); ++s)
    for (Eigen::Index i = 0; i < D; ++i)
      for (Eigen::Index j = 0; j < D; ++j) l(static_cast<Eigen::Index>(s), i * D + j) = left[s](i, j);
  for (std::size_t s = 0; s < right.size(); ++s)
    for (Eigen::Index i = 0; i < D; ++i)
      for (Eigen::Index j = 0; j < D; ++j) r(j * D + i, static_cast<Eigen::Index>(s)) = right[s](i, j);
  const CMatrix psi = l * r;
  CVector amps(psi.size());
  for (Eigen::Index i = 0; i < psi.rows(); ++i)
    for (Eigen::Index j = 0; j < psi.cols(); ++j) amps[i * psi.cols() + j] = psi(i, j);
  return PureState::normalized(std::move(amps), std::vector<std::size_t>(mps.n_sites(), mps.d()));
}

namespace {

void check_model(const UniformMPS& mps, const LocalHamiltonian& h) {
  if (mps.d() != 2) throw DomainError("pumps: qubit chains need d = 2");
  if (h.n_sites != mps.n_sites()) throw DomainError("pumps: ring sizes differ");
  for (const LocalTerm& t : h.terms) {
    if (t.support >= mps.n_sites()) throw DomainError("pumps: term wider than the ring");
  }
}

// Energy and the Wirtinger gradient dE/d conj(M_s).
double energy_and_gradient(const UniformMPS& mps, const LocalHamiltonian& h,
                           std::vector<CMatrix>* grad) {
  const std::size_t n = mps.n_sites();
  const auto D = static_cast<Eigen::Index>(mps.D());
  const std::vector<CMatrix>& m = mps.tensors();
  const CMatrix t = transfer_matrix(mps).t;
  // Rescale so T^N stays well within range.
  const double scale = std::max(t.cwiseAbs().maxCoeff(), 1e-300);
  const CMatrix ts = t / scale;
  std::vector<CMatrix> powers{CMatrix::Identity(D * D, D * D)};
  for (std::size_t p = 1; p <= n; ++p) powers.push_back(powers.back() * ts);
  const double z = powers[n].trace().real();
  if (!(z > 0)) throw DomainError("pumps: zero-norm state");

  double hval = 0;
  std::vector<CMatrix> gh(m.size(), CMatrix::Zero(D, D));
  for (const LocalTerm& term : h.terms) {
    const std::size_t k = term.support;
    const std::vector<CMatrix> prods = block_products(m, k);
    const double sk = std::pow(scale, static_cast<double>(k));
    CMatrix th = CMatrix::Zero(D * D, D * D);
    for (std::size_t s = 0; s < prods.size(); ++s)
      for (std::size_t s2 = 0; s2 < prods.size(); ++s2) {
        const double v = term.matrix(static_cast<Eigen::Index>(s2), static_cast<Eigen::Index>(s));
        if (v != 0) th += v * kron_conj(prods[s], prods[s2]);
      }
    th /= sk;
    const CMatrix& w = powers[n - k];
    hval += static_cast<double>(n) * (th * w).trace().real();
    if (!grad) continue;
    // Copies of T outside the term.
    CMatrix env = CMatrix::Zero(D * D, D * D);
    for (std::size_t p = 0; p + k < n; ++p) env += powers[n - k - 1 - p] * th * powers[p];
    for (std::size_t s = 0; s < m.size(); ++s) gh[s] += static_cast<double>(n) * contract_y(m[s], env, D);
    // Conjugated slots inside the term.
    for (std::size_t s = 0; s < prods.size(); ++s) {
      const CMatrix y = contract_y(prods[s], w, D);
      for (std::size_t s2 = 0; s2 < prods.size(); ++s2) {
        const double v = term.matrix(static_cast<Eigen::Index>(s2), static_cast<Eigen::Index>(s));
        if (v == 0) continue;
        for (std::size_t slot = 0; slot < k; ++slot) {
          CMatrix l = CMatrix::Identity(D, D), r = CMatrix::Identity(D, D);
          std::size_t phys = 0;
          for (std::size_t q = 0; q < k; ++q) {
            const std::size_t sq = (s2 >> (k - 1 - q)) & 1u;
            if (q < slot) l = l * m[sq];
            if (q == slot) phys = sq;
            if (q > slot) r = r * m[sq];
          }
          gh[phys] += (static_cast<double>(n) * v * scale / sk) * (l.adjoint() * y * r.adjoint());
        }
      }
    }
  }
  const double e = hval / z;
  if (grad) {
    grad->assign(m.size(), CMatrix::Zero(D, D));
    const CMatrix& rest = powers[n - 1];
    for (std::size_t s = 0; s < m.size(); ++s) {
      const CMatrix gz = static_cast<double>(n) * contract_y(m[s], rest, D);
      (*grad)[s] = (gh[s] - e * gz) / (z * scale);
    }
  }
  return e;
}

class PumpsObjective : public ceres::FirstOrderFunction {
 public:
  PumpsObjective(const LocalHamiltonian& h, std::size_t d, std::size_t bond)
      : h_(h), d_(d), bond_(bond) {}

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    const UniformMPS mps = unpack(x);
    std::vector<CMatrix> g;
    try {
      *cost = energy_and_gradient(mps, h_, gradient ? &g : nullptr);
    } catch (const DomainError&) {
      return false;
    }
    if (gradient) {
      std::size_t i = 0;
      for (const CMatrix& gs : g)
        for (Eigen::Index a = 0; a < gs.rows(); ++a)
          for (Eigen::Index b = 0; b < gs.cols(); ++b) {
            gradient[i++] = 2 * gs(a, b).real();
            gradient[i++] = 2 * gs(a, b).imag();
          }
    }
    return std::isfinite(*cost);
  }

  int NumParameters() const override { return static_cast<int>(2 * d_ * bond_ * bond_); }

  UniformMPS unpack(const double* x) const {
    std::vector<CMatrix> t;
    const auto D = static_cast<Eigen::Index>(bond_);
    std::size_t i = 0;
    for (std::size_t s = 0; s < d_; ++s) {
      CMatrix m(D, D);
      for (Eigen::Index a = 0; a < D; ++a)
        for (Eigen::Index b = 0; b < D; ++b) {
          m(a, b) = Complex(x[i], x[i + 1]);
          i += 2;
        }
      t.push_back(std::move(m));
    }
    return UniformMPS(std::move(t), h_.n_sites);
  }

 private:
  const LocalHamiltonian& h_;
  std::size_t d_, bond_;
};

}  // namespace

double pumps_energy(const UniformMPS& mps, const LocalHamiltonian& h) {
  check_model(mps, h);
  return energy_and_gradient(mps, h, nullptr);
}

std::vector<CMatrix> pumps_gradient(const UniformMPS& mps, const LocalHamiltonian& h) {
  check_model(mps, h);
  std::vector<CMatrix> g;
  energy_and_gradient(mps, h, &g);
  return g;
}

PumpsResult pumps_optimize(const LocalHamiltonian& h, std::size_t bond_dim,
                           const PumpsOptions& opts) {
  if (bond_dim < 1) throw DomainError("pumps_optimize: bond dimension must be positive");
  const std::size_t d = 2;
  std::vector<double> x(2 * d * bond_dim * bond_dim);
  if (opts.initial) {
    check_model(*opts.initial, h);
    if (opts.initial->D() != bond_dim) throw DomainError("pumps_optimize: initial D mismatch");
    std::size_t i = 0;
    for (const CMatrix& m : opts.initial->tensors())
      for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
          x[i++] = m(a, b).real();
          x[i++] = m(a, b).imag();
        }
  } else {
    Rng rng(opts.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : x) v = normal(rng);
  }
  auto* objective = new PumpsObjective(h, d, bond_dim);
  ceres::GradientProblem problem(objective);
  ceres::GradientProblemSolver::Options o;
  o.line_search_direction_type = ceres::LBFGS;
  o.max_num_iterations = opts.max_iterations;
  o.function_tolerance = opts.tolerance;
  o.gradient_tolerance = 1e-12;
  o.parameter_tolerance = 1e-14;
  o.logging_type = ceres::SILENT;
  o.minimizer_progress_to_stdout = false;
  std::vector<double> history;
  struct Recorder : ceres::IterationCallback {
    std::vector<double>* h;
    ceres::CallbackReturnType operator()(const ceres::IterationSummary& s) override {
      h->push_back(s.cost);
      return ceres::SOLVER_CONTINUE;
    }
  } recorder;
  recorder.h = &history;
  o.callbacks.push_back(&recorder);
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(o, problem, x.data(), &summary);
  // Rescale so the state has unit norm.
  UniformMPS raw = objective->unpack(x.data());
  const double z = matrix_power(transfer_matrix(raw).t, h.n_sites).trace().real();
  std::vector<CMatrix> tensors = raw.tensors();
  for (CMatrix& m : tensors) m /= std::pow(z, 1.0 / (2.0 * static_cast<double>(h.n_sites)));
  UniformMPS mps(std::move(tensors), h.n_sites);
  const double e = pumps_energy(mps, h);
  const bool converged = summary.termination_type == ceres::CONVERGENCE;
  return PumpsResult{std::move(mps), e, static_cast<int>(summary.iterations.size()),
                     converged, std::move(history)};
}

std::size_t default_bond_dimension(std::size_t n_sites) {
  const double d = 12.0 + (static_cast<double>(n_sites) - 24.0) * (14.0 / 60.0);
  return static_cast<std::size_t>(std::clamp(std::lround(d), 8L, 32L));
}

void write_mps(const std::string& path, const UniformMPS& mps, bool binary) {
  json header = {{"kind", "mps"},
                 {"d", mps.d()},
                 {"D", mps.D()},
                 {"N_sites", mps.n_sites()},
                 {"layout", "s,alpha,beta"},
                 {"endianness", "little"}};
  std::vector<Complex> data;
  for (const CMatrix& m : mps.tensors())
    for (Eigen::Index a = 0; a < m.rows(); ++a)
      for (Eigen::Index b = 0; b < m.cols(); ++b) data.push_back(m(a, b));
  if (binary) {
    write_binary(path, header, data);
  } else {
    write_json(path, header, data);
  }
}

UniformMPS read_mps(const std::string& path) {
  auto [h, data] = read_artifact(path);
  check_endianness(h, path);
  if (h.value("layout", "") != "s,alpha,beta") throw IoError(path + ": unsupported layout");
  std::size_t d, D, n;
  try {
    d = h.at("d").get<std::size_t>();
    D = h.at("D").get<std::size_t>();
    n = h.at("N_sites").get<std::size_t>();
  } catch (const json::exception& e) {
    throw IoError(path + ": header is missing d, D or N_sites");
  }
  if (data.size() != d * D * D) throw IoError(path + ": payload size does not match header");
  std::vector<CMatrix> t;
  std::size_t i = 0;
  for (std::size_t s = 0; s < d; ++s) {
    CMatrix m(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    for (Eigen::Index a = 0; a < m.rows(); ++a)
      for (Eigen::Index b = 0; b < m.cols(); ++b) m(a, b) = data[i++];
    t.push_back(std::move(m));
  }
  return UniformMPS(std::move(t), n);
}

void write_state(const std::string& path, const PureState& state, bool binary) {
  json header = {{"kind", "state"},
                 {"dims", state.dims()},
                 {"layout", "row-major"},
                 {"endianness", "little"}};
  std::vector<Complex> data(state.amplitudes().data(),
                            state.amplitudes().data() + state.amplitudes().size());
  if (binary) {
    write_binary(path, header, data);
  } else {
    write_json(path, header, data);
  }
}

PureState read_state(const std::string& path) {
  auto [h, data] = read_artifact(path);
  check_endianness(h, path);
  std::vector<std::size_t> dims;
  try {
    dims = h.at("dims").get<std::vector<std::size_t>>();
  } catch (const json::exception&) {
    throw IoError(path + ": header is missing dims");
  }
  CVector amps = Eigen::Map<const CVector>(data.data(), static_cast<Eigen::Index>(data.size()));
  try {
    return PureState(std::move(amps), dims);
  } catch (const DomainError& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace tripent

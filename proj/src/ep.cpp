// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

#include "tripent/ep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>

#include "tripent/error.hpp"

namespace tripent {

namespace {

constexpr double kGolden = 1.618033988749895;
constexpr int kRestartPeriod = 50;
constexpr int kMaxBacktracks = 60;
constexpr int kMaxExpansions = 8;

double real_inner(const CMatrix& x, const CMatrix& y) {
  return (x.conjugate().cwiseProduct(y)).sum().real();
}

struct LineResult {
  double t = 0;
  double value = 0;
  bool moved = false;
};

// Step along a descent direction with slope f'(0) = slope < 0. Quadratic
// interpolation from (f0, slope, f(t)) picks the next trial; a step is only
// accepted if it lowers f, so accepted values never increase.
template <class F>
LineResult line_search(F&& f, double f0, double slope, double t1, double tmax) {
  auto parabola_min = [&](double t, double ft) {
    const double curv = (ft - f0 - slope * t) / (t * t);
    return curv > 0 ? -slope / (2 * curv) : std::numeric_limits<double>::infinity();
  };
  double t = std::min(t1, tmax);
  double ft = f(t);
  for (int k = 0; k < kMaxBacktracks && !(ft < f0); ++k) {
    t = std::clamp(parabola_min(t, ft), 0.1 * t, 0.5 * t);
    ft = f(t);
  }
  if (!(ft < f0)) return {0, f0, false};
  LineResult best{t, ft, true};
  // Expand while the model predicts a minimum beyond the current step.
  for (int k = 0; k < kMaxExpansions && best.t < tmax; ++k) {
    const double tn = std::min({parabola_min(best.t, best.value), kGolden * kGolden * best.t, tmax});
    if (!(tn > best.t * (1 + 1e-3))) {
      if (tn < best.t * (1 - 1e-3)) {
        const double fn = f(tn);
        if (fn < best.value) best = {tn, fn, true};
      }
      break;
    }
    const double fn = f(tn);
    if (!(fn < best.value)) {
      const double tm = parabola_min(tn, fn);
      if (tm > best.t * (1 + 1e-3) && tm < tn) {
        const double fm = f(tm);
        if (fm < best.value) best = {tm, fm, true};
      }
      break;
    }
    best = {tn, fn, true};
  }
  return best;
}

// One NLCG trajectory; `advance` can be called repeatedly to extend it.
struct NlcgRun {
  explicit NlcgRun(PurificationProblem problem) : p(std::move(problem)) {
    std::tie(f, grad) = p.value_and_gradient(p.unitary);
    p.gradient_norm = grad.norm();
    dir = -grad;
    history.push_back(f);
  }

  bool converged(const EpOptions& opts, double lower_bound) const {
    return p.gradient_norm <= opts.eta || f <= lower_bound + 1e-12;
  }

  // Iterates until convergence, a failed line search, or `iteration_limit`.
  void advance(const EpOptions& opts, double lower_bound, int iteration_limit) {
    while (!stalled && iterations < iteration_limit && !converged(opts, lower_bound)) {
      step();
    }
  }

  void step() {
    double slope = real_inner(dir, grad);
    if (slope >= 0 || since_restart >= kRestartPeriod) {
      dir = -grad;
      slope = -grad.squaredNorm();
      since_restart = 0;
    }
    HermitianEigen theta = hermitian_eigh(0.5 * (dir + dir.adjoint()));
    const double tmax = M_PI / theta.values.cwiseAbs().maxCoeff();
    const double t1 = prev_step > 0 ? std::min(tmax, 2 * prev_step) : 0.05 * tmax;
    const CMatrix u0 = p.unitary;
    auto eval = [&](double t) { return p.objective(expi_hermitian(theta, t) * u0); };
    LineResult ls = line_search(eval, f, slope, t1, tmax);
    if (!ls.moved && since_restart > 0) {
      // Conjugate direction failed; retry along steepest descent.
      dir = -grad;
      since_restart = 0;
      theta = hermitian_eigh(0.5 * (dir + dir.adjoint()));
      const double tm = M_PI / theta.values.cwiseAbs().maxCoeff();
      ls = line_search(eval, f, -grad.squaredNorm(), 0.05 * tm, tm);
    }
    if (!ls.moved) {
      stalled = true;
      return;
    }
    p.unitary = polar_unitary(expi_hermitian(theta, ls.t) * u0);
    p.step_size = ls.t;
    prev_step = ls.t;
    const CMatrix prev_grad = grad;
    double f_new;
    std::tie(f_new, grad) = p.value_and_gradient(p.unitary);
    f = std::min(ls.value, f_new);
    history.push_back(f);
    ++iterations;
    p.gradient_norm = grad.norm();
    const double beta = std::max(
        0.0, real_inner(grad, grad - prev_grad) / prev_grad.squaredNorm());
    dir = -grad + beta * dir;
    p.search_direction = dir;
    ++since_restart;
  }

  PurificationProblem p;
  double f = 0;
  CMatrix grad, dir;
  double prev_step = 0;
  int since_restart = 0;
  int iterations = 0;
  bool stalled = false;
  std::vector<double> history;
};

double entropy_of_cut(const CMatrix& x) {
  return entropy_from_spectrum(gram_spectrum(x));
}

}  // namespace

PurificationProblem::PurificationProblem(const PureState& state, SplitDims split)
    : dcl_(split.first), dcr_(split.second) {
  if (state.num_parties() != 3) {
    throw DomainError("PurificationProblem: state must have parties (A, B, C)");
  }
  da_ = state.dim(0);
  db_ = state.dim(1);
  const std::size_t dc = state.dim(2);
  if (dcl_ == 0 || dcr_ == 0 || dcl_ * dcr_ < dc) {
    throw DomainError("PurificationProblem: split " + std::to_string(dcl_) + "x" +
                      std::to_string(dcr_) + " cannot hold d_C = " +
                      std::to_string(dc));
  }
  const std::vector<std::size_t> ab{0, 1};
  const CMatrix m = state.bipartite_matrix(ab);
  psi_ = CMatrix::Zero(m.rows(), static_cast<Eigen::Index>(dcl_ * dcr_));
  psi_.leftCols(m.cols()) = m;
  unitary = CMatrix::Identity(psi_.cols(), psi_.cols());
  search_direction = CMatrix::Zero(psi_.cols(), psi_.cols());
}

CMatrix PurificationProblem::rotated(const CMatrix& u) const {
  if (u.rows() != psi_.cols() || u.cols() != psi_.cols()) {
    throw DomainError("PurificationProblem: unitary has the wrong size");
  }
  return psi_ * u.transpose();
}

CMatrix PurificationProblem::to_cut(const CMatrix& m) const {
  const auto dA = static_cast<Eigen::Index>(da_), dB = static_cast<Eigen::Index>(db_);
  const auto dL = static_cast<Eigen::Index>(dcl_), dR = static_cast<Eigen::Index>(dcr_);
  CMatrix x(dA * dL, dB * dR);
  for (Eigen::Index a = 0; a < dA; ++a)
    for (Eigen::Index b = 0; b < dB; ++b)
      for (Eigen::Index l = 0; l < dL; ++l)
        for (Eigen::Index r = 0; r < dR; ++r)
          x(a * dL + l, b * dR + r) = m(a * dB + b, l * dR + r);
  return x;
}

CMatrix PurificationProblem::from_cut(const CMatrix& x) const {
  const auto dA = static_cast<Eigen::Index>(da_), dB = static_cast<Eigen::Index>(db_);
  const auto dL = static_cast<Eigen::Index>(dcl_), dR = static_cast<Eigen::Index>(dcr_);
  CMatrix m(dA * dB, dL * dR);
  for (Eigen::Index a = 0; a < dA; ++a)
    for (Eigen::Index b = 0; b < dB; ++b)
      for (Eigen::Index l = 0; l < dL; ++l)
        for (Eigen::Index r = 0; r < dR; ++r)
          m(a * dB + b, l * dR + r) = x(a * dL + l, b * dR + r);
  return m;
}

double PurificationProblem::objective(const CMatrix& u) const {
  return entropy_of_cut(to_cut(rotated(u)));
}

CMatrix PurificationProblem::gradient(const CMatrix& u) const {
  return value_and_gradient(u).second;
}

std::pair<double, CMatrix> PurificationProblem::value_and_gradient(const CMatrix& u) const {
  const CMatrix m = rotated(u);
  const CMatrix x = to_cut(m);
  // ln(rho_ACL) X equals U_x f U_x^dagger X = X V_x f V_x^dagger, so the
  // smaller Gram matrix suffices. The log is taken on the support only.
  const bool left = x.rows() <= x.cols();
  CMatrix g = left ? CMatrix(x * x.adjoint()) : CMatrix(x.adjoint() * x);
  const HermitianEigen eig = hermitian_eigh(0.5 * (g + g.adjoint()));
  const RVector f = eig.values.unaryExpr(
      [](double v) { return v > kEigenvalueFloor ? std::log(v) : 0.0; });
  const CMatrix lx = left ? CMatrix(eig.vectors * (f.asDiagonal() * (eig.vectors.adjoint() * x)))
                          : CMatrix((x * eig.vectors) * f.asDiagonal() * eig.vectors.adjoint());
  const CMatrix phi = from_cut(lx);
  const CMatrix xm = m.transpose() * phi.conjugate();
  const Complex minus_i(0, -1);
  CMatrix e = minus_i * (xm - xm.adjoint());
  return {entropy_from_spectrum(eig.values), 0.5 * (e + e.adjoint())};
}

PureState PurificationProblem::purified(const CMatrix& u) const {
  const CMatrix m = rotated(u);
  CVector amps(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) amps[i * m.cols() + j] = m(i, j);
  return PureState::normalized(std::move(amps), {da_, db_, dcl_, dcr_});
}

SplitDims balanced_split(std::size_t dc) {
  auto s = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dc))));
  while (s * s < dc) ++s;
  while (s > 1 && (s - 1) * (s - 1) >= dc) --s;
  return {s, s};
}

CMatrix ep_gradient(const PurificationProblem& problem) {
  return problem.gradient(problem.unitary);
}

EpResult minimize_ep(const PureState& state, const EpOptions& opts) {
  if (state.num_parties() != 3) {
    throw DomainError("minimize_ep: state must have parties (A, B, C)");
  }
  if (!(opts.eta > 0)) throw DomainError("minimize_ep: eta must be positive");
  SplitDims split;
  PureState work = state;
  if (!opts.split_dims && opts.split_policy == SplitPolicy::Factored) {
    work = restrict_to_support(state, 2);
    const std::size_t r = work.dim(2);
    const double lower = 0.5 * mutual_information(work, Tripartition({Party::A, Party::B, Party::C}));
    EpOptions fixed = opts;
    EpResult best;
    best.ep = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::size_t last_right = 0;
    for (std::size_t p = 1; p <= r; ++p) {
      const std::size_t q = (r + p - 1) / p;
      if (q == last_right) continue;
      last_right = q;
      fixed.split_dims = SplitDims{p, q};
      EpResult res = minimize_ep(work, fixed);
      iterations += res.iterations;
      if (res.ep < best.ep) best = std::move(res);
      if (best.ep <= lower + 1e-12) break;
    }
    best.iterations = iterations;
    return best;
  }
  if (opts.split_dims) {
    split = *opts.split_dims;
  } else if (opts.split_policy == SplitPolicy::Saturating) {
    work = restrict_to_support(state, 2);
    split = {work.dim(2), work.dim(2)};
  } else {
    split = balanced_split(state.dim(2));
  }
  const Tripartition abc({Party::A, Party::B, Party::C});
  const EntropyReport er = entropy_report(work, abc);
  const double lower = 0.5 * er.I_AB;

  PurificationProblem base(work, split);
  Rng rng(opts.seed);
  const std::size_t dc = base.dim_c();
  // Every start runs for the screening budget; only the best one continues.
  const int budget = opts.screen_iterations > 0
                         ? std::min(opts.screen_iterations, opts.max_iterations)
                         : opts.max_iterations;
  std::optional<NlcgRun> best_run;
  EpResult best;
  best.split_dims = split;
  for (int start = 0; start <= opts.restarts; ++start) {
    PurificationProblem p = base;
    if (start > 0) p.unitary = haar_unitary(dc, rng);
    NlcgRun run(std::move(p));
    run.advance(opts, lower, budget);
    best.iterations += run.iterations;
    best.restarts = start;
    const bool done = run.f <= lower + 1e-12;
    if (!best_run || run.f < best_run->f) best_run = std::move(run);
    if (done) break;
  }
  const int before = best_run->iterations;
  best_run->advance(opts, lower, opts.max_iterations);
  best.iterations += best_run->iterations - before;
  best.ep = best_run->f;
  best.final_gradient_norm = best_run->p.gradient_norm;
  best.converged = best_run->converged(opts, lower);
  best.history = std::move(best_run->history);
  best.unitary = std::move(best_run->p.unitary);
  return best;
}

namespace {

// Everything below is written against Eigen only, as an independent check
// of the LAPACK-based path.
double plain_entropy(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()[i];
    if (p > 1e-12) s -= p * std::log(p);
  }
  return s;
}

CMatrix plain_expi(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector ph(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, t * es.eigenvalues()[i]);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double ep_bruteforce(const PureState& state, SplitDims split, std::uint64_t seed,
                     int starts) {
  if (state.num_parties() != 3) {
    throw DomainError("ep_bruteforce: state must have parties (A, B, C)");
  }
  const std::size_t dl = split.first, dr = split.second;
  const std::size_t dc = dl * dr;
  if (dc > 8) throw DomainError("ep_bruteforce: d_C above 8 is not supported");
  if (dc < state.dim(2)) throw DomainError("ep_bruteforce: split too small");
  const std::size_t da = state.dim(0), db = state.dim(1);
  const auto n = static_cast<Eigen::Index>(dc);

  // psi[a][b][c] with the purifier zero-padded.
  std::vector<Complex> psi(da * db * dc, Complex(0));
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t c = 0; c < state.dim(2); ++c)
        psi[(a * db + b) * dc + c] =
            state.amplitudes()[static_cast<Eigen::Index>((a * db + b) * state.dim(2) + c)];

  auto objective = [&](const CMatrix& u) {
    const auto nl = static_cast<Eigen::Index>(da * dl);
    CMatrix rho = CMatrix::Zero(nl, nl);
    std::vector<Complex> phi(psi.size(), Complex(0));
    for (std::size_t ab = 0; ab < da * db; ++ab)
      for (std::size_t c = 0; c < dc; ++c) {
        Complex acc = 0;
        for (std::size_t c2 = 0; c2 < dc; ++c2)
          acc += u(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c2)) * psi[ab * dc + c2];
        phi[ab * dc + c] = acc;
      }
    for (std::size_t a = 0; a < da; ++a)
      for (std::size_t l = 0; l < dl; ++l)
        for (std::size_t a2 = 0; a2 < da; ++a2)
          for (std::size_t l2 = 0; l2 < dl; ++l2) {
            Complex acc = 0;
            for (std::size_t b = 0; b < db; ++b)
              for (std::size_t r = 0; r < dr; ++r)
                acc += phi[(a * db + b) * dc + l * dr + r] *
                       std::conj(phi[(a2 * db + b) * dc + l2 * dr + r]);
            rho(static_cast<Eigen::Index>(a * dl + l), static_cast<Eigen::Index>(a2 * dl + l2)) = acc;
          }
    return plain_entropy(rho);
  };

  // Hermitian generator basis.
  std::vector<CMatrix> gens;
  for (Eigen::Index j = 0; j < n; ++j) {
    CMatrix g = CMatrix::Zero(n, n);
    g(j, j) = 1;
    gens.push_back(g);
    for (Eigen::Index k = j + 1; k < n; ++k) {
      CMatrix re = CMatrix::Zero(n, n), im = CMatrix::Zero(n, n);
      re(j, k) = re(k, j) = 1 / std::sqrt(2.0);
      im(j, k) = Complex(0, 1 / std::sqrt(2.0));
      im(k, j) = Complex(0, -1 / std::sqrt(2.0));
      gens.push_back(re);
      gens.push_back(im);
    }
  }
  std::vector<double> steps;
  for (double s = 0.5; s > 2e-6; s *= 0.5) steps.push_back(s);
  std::vector<std::vector<CMatrix>> moves(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (const CMatrix& g : gens) {
      moves[i].push_back(plain_expi(g, steps[i]));
      moves[i].push_back(plain_expi(g, -steps[i]));
    }
  }

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    CMatrix z(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) z(i, j) = Complex(normal(rng), normal(rng));
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix u = qr.householderQ();
    double f = objective(u);
    for (std::size_t level = 0; level < steps.size(); ++level) {
      bool improved = true;
      for (int sweep = 0; improved && sweep < 200; ++sweep) {
        improved = false;
        for (const CMatrix& mv : moves[level]) {
          CMatrix cand = mv * u;
          const double fc = objective(cand);
          if (fc < f - 1e-15) {
            f = fc;
            u = cand;
            improved = true;
          }
        }
      }
    }
    best = std::min(best, f);
  }
  return best;
}

PureState restrict_to_support(const PureState& state, std::size_t party) {
  if (party >= state.num_parties()) throw DomainError("restrict_to_support: bad party");
  const std::size_t party_list[] = {party};
  // Rows: the party; columns: everything else.
  const CMatrix m = state.bipartite_matrix(party_list);
  const HermitianEigen eh = hermitian_eigh(m * m.adjoint());
  const double top = eh.values.size() ? eh.values.maxCoeff() : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = eh.values.size() - 1; i >= 0; --i) {
    if (eh.values[i] > kEigenvalueFloor * std::max(top, 1.0)) keep.push_back(i);
  }
  if (keep.empty()) throw DomainError("restrict_to_support: zero state");
  CMatrix v(eh.vectors.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    v.col(static_cast<Eigen::Index>(k)) = eh.vectors.col(keep[k]);
  }
  std::vector<std::size_t> dims = state.dims();
  dims[party] = keep.size();
  return PureState::normalized(state.apply_local(party, v.adjoint()), dims,
                               state.labels());
}

PureState group_tripartite(const PureState& state, const Tripartition& part) {
  if (part.size() != state.num_parties()) {
    throw DomainError("tripartition size does not match the state");
  }
  return state.grouped(
      {part.indices(Party::A), part.indices(Party::B), part.indices(Party::C)});
}

double g_measure(const PureState& state, const Tripartition& part,
                 const EpOptions& opts) {
  const PureState abc = group_tripartite(state, part);
  const EpResult r = minimize_ep(abc, opts);
  const double mi = mutual_information(abc, Tripartition({Party::A, Party::B, Party::C}));
  return 2 * r.ep - mi;
}

GDecomposition g_decomposition(const PurificationProblem& problem) {
  const PureState s = problem.purified(problem.unitary);
  const PartySet A{0}, B{1}, L{2}, R{3}, BR{1, 3}, AL{0, 2};
  GDecomposition d;
  const double s_al = subsystem_entropy(s, AL);
  const double mi = subsystem_entropy(s, A) + subsystem_entropy(s, B) -
                    subsystem_entropy(s, PartySet{0, 1});
  d.g = 2 * s_al - mi;
  d.cmi[0] = conditional_mutual_information(s, L, A, BR);
  d.cmi[1] = conditional_mutual_information(s, R, B, A);
  d.cmi[2] = conditional_mutual_information(s, R, B, AL);
  d.cmi[3] = conditional_mutual_information(s, L, A, B);
  d.residual_first = std::abs(d.g - d.cmi[0] - d.cmi[1]);
  d.residual_second = std::abs(d.g - d.cmi[2] - d.cmi[3]);
  return d;
}

std::pair<double, double> g_decomposition_residual(
    const PurificationProblem& problem) {
  const GDecomposition d = g_decomposition(problem);
  return {d.residual_first, d.residual_second};
}

}  // namespace tripent

// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

// Property suites behind the `check` subcommand. Every check reports the
// measured value next to its threshold.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "tripent/error.hpp"
#include "tripent/experiment.hpp"
#include "tripent/models.hpp"
#include "tripent/mps.hpp"
#include "tripent/zoo.hpp"

namespace tripent {

namespace {

const Tripartition kAbc({Party::A, Party::B, Party::C});

class Suite {
 public:
  Suite(std::string name, std::vector<CheckRecord>& out) : name_(std::move(name)), out_(out) {}

  // value <= threshold passes.
  void at_most(const std::string& check, double value, double threshold) {
    out_.push_back({name_, check, value, threshold, value <= threshold});
  }
  // value >= threshold passes.
  void at_least(const std::string& check, double value, double threshold) {
    out_.push_back({name_, check, value, threshold, value >= threshold});
  }

 private:
  std::string name_;
  std::vector<CheckRecord>& out_;
};

std::vector<Tripartition> pairings() {
  return {Tripartition({Party::A, Party::B, Party::C}),
          Tripartition({Party::B, Party::C, Party::A}),
          Tripartition({Party::A, Party::C, Party::B})};
}

EpOptions factored(std::uint64_t seed) {
  EpOptions o;
  o.seed = seed;
  o.split_policy = SplitPolicy::Factored;
  return o;
}

PureState random_state(std::vector<std::size_t> dims, Rng& rng) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return PureState(random_state_vector(n, rng), std::move(dims));
}

void structure(std::vector<CheckRecord>& out, std::uint64_t seed, std::size_t count) {
  Suite s("structure", out);
  Rng rng(seed);
  double g_max = 0, h_max = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const PureState t = make_triangle(random_triangle_spec(rng, 3), seed + k);
    for (const Tripartition& p : pairings()) {
      h_max = std::max(h_max, h_measure(t, p));
      g_max = std::max(g_max, g_measure(t, p, factored(seed)));
    }
  }
  s.at_most("triangle.g.max", g_max, 1e-5);
  s.at_most("triangle.h.max", h_max, 1e-9);
  double sh_max = 0, sg_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    const PureState t = make_sots(random_sots_spec(rng, 2, 2), seed + k);
    for (const Tripartition& p : pairings()) {
      sh_max = std::max(sh_max, h_measure(t, p));
      sg_min = std::min(sg_min, g_measure(t, p, factored(seed)));
    }
  }
  s.at_most("sots.h.max", sh_max, 1e-9);
  s.at_least("sots.g.min", sg_min, -1e-6);
}

void ghzw(std::vector<CheckRecord>& out, std::uint64_t seed) {
  Suite s("ghzw", out);
  EpOptions o;
  o.seed = seed;
  for (std::size_t d : {2u, 3u}) {
    const PureState g = make_ghz(d);
    const std::string tag = "ghz" + std::to_string(d);
    s.at_most(tag + ".g.error", std::abs(g_measure(g, kAbc, o) - std::log(double(d))), 1e-4);
    s.at_most(tag + ".h", h_measure(g, kAbc), 1e-8);
  }
  const PureState w = make_w();
  const double gw = g_measure(w, kAbc, o);
  s.at_least("w.g", gw, 0.01);
  o.split_dims = SplitDims{2, 2};
  const double ep = minimize_ep(w, o).ep;
  s.at_most("w.ep.vs.bruteforce", std::abs(ep - ep_bruteforce(w, {2, 2}, seed)), 1e-4);
}

void optimizer(std::vector<CheckRecord>& out, std::uint64_t seed, std::size_t count) {
  Suite s("optimizer", out);
  Rng rng(seed);
  double worst = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const PureState st = k % 2 ? random_state({3, 1, 4}, rng) : random_state({2, 2, 4}, rng);
    PurificationProblem p(st, {2, 2});
    p.unitary = haar_unitary(4, rng);
    const CMatrix e = ep_gradient(p);
    for (int j = 0; j < 3; ++j) {
      const HermitianEigen theta = hermitian_eigh(random_hermitian(4, rng));
      const double h = 1e-5;
      const double fd = (p.objective(expi_hermitian(theta, h) * p.unitary) -
                         p.objective(expi_hermitian(theta, -h) * p.unitary)) /
                        (2 * h);
      const CMatrix th = theta.vectors * theta.values.asDiagonal() * theta.vectors.adjoint();
      const double an = (th * e).trace().real();
      worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-3));
    }
  }
  s.at_most("gradient.fd.relative", worst, 1e-5);
  double gap = 0;
  for (std::size_t k = 0; k < std::max<std::size_t>(1, count / 4); ++k) {
    const PureState st = random_state({2, 2, 4}, rng);
    EpOptions o;
    o.seed = seed;
    o.split_dims = SplitDims{2, 2};
    gap = std::max(gap, std::abs(minimize_ep(st, o).ep - ep_bruteforce(st, {2, 2}, seed, 60)));
  }
  s.at_most("ep.vs.bruteforce", gap, 1e-4);
}

void identities(std::vector<CheckRecord>& out, std::uint64_t seed, std::size_t count) {
  Suite s("identities", out);
  Rng rng(seed);
  double h_gap = 0, g_res = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const PureState st = random_state({2, 3, 4}, rng);
    const HReport r = h_report(st, kAbc);
    for (double c : r.cmi) h_gap = std::max(h_gap, std::abs(c - r.h));
    PurificationProblem p(st, {2, 2});
    p.unitary = haar_unitary(4, rng);
    const auto [r1, r2] = g_decomposition_residual(p);
    g_res = std::max({g_res, r1, r2});
  }
  s.at_most("h.vs.cmi", h_gap, 1e-9);
  s.at_most("g.decomposition", g_res, 1e-9);
}

UniformMPS random_mps(std::size_t d, std::size_t bond, std::size_t n, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<CMatrix> t;
  for (std::size_t k = 0; k < d; ++k) {
    CMatrix m(static_cast<Eigen::Index>(bond), static_cast<Eigen::Index>(bond));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(g(rng), g(rng));
    t.push_back(m);
  }
  return UniformMPS(std::move(t), n);
}

void coarse(std::vector<CheckRecord>& out, std::uint64_t seed, std::size_t count) {
  Suite s("coarse", out);
  Rng rng(seed);
  std::vector<UniformMPS> cases;
  {
    CMatrix m0 = CMatrix::Zero(2, 2), m1 = CMatrix::Zero(2, 2);
    m0(0, 0) = 1;
    m1(1, 1) = 1;
    cases.emplace_back(std::vector<CMatrix>{m0, m1}, 12);
  }
  for (std::size_t k = 0; k < count; ++k) cases.push_back(random_mps(2, 1 + k % 3, 12, rng));
  double worst = 0;
  for (const UniformMPS& m : cases) {
    const PureState abc = dense_export(assemble_tripartite(m, 4, 4, {}));
    const PureState ref = group_tripartite(mps_to_dense(m), Tripartition::contiguous(12, 4, 4));
    for (std::size_t p = 0; p < 3; ++p) {
      const std::size_t one[] = {p};
      worst = std::max(worst, std::abs(subsystem_entropy(abc, one) - subsystem_entropy(ref, one)));
    }
  }
  s.at_most("assembly.entropy", worst, 1e-9);
  RVector lam(3);
  lam << 0.5, 0.3, 0.2;
  const TransferMatrix t = transfer_matrix(make_fixed_point_mps(FixedPointSpec{{lam}, {}}, 9));
  double fp = 0;
  for (std::size_t n : {1u, 2u, 3u}) {
    fp = std::max(fp, (reconstruct_transfer(coarse_grain(t, n)) - t.t).norm());
  }
  s.at_most("fixed_point.invariance", fp, 1e-10);
}

void models(std::vector<CheckRecord>& out) {
  Suite s("models", out);
  for (std::size_t n : {8u, 10u}) {
    const double e = ground_state(build_obrien_fendley(n, 0.0)).energy;
    s.at_most("ising.free_fermion.N" + std::to_string(n),
              std::abs(e - free_fermion_ising_oracle(n)), 1e-9);
  }
  const LocalHamiltonian x = build_xxz(8, 0.0);
  const double dense =
      symmetric_eigenvalues(x.dense())[0];
  s.at_most("xxz.dense.N8", std::abs(ground_state(x).energy - dense), 1e-10);
}

}  // namespace

std::vector<CheckRecord> run_checks(const std::string& suite, std::uint64_t seed,
                                    std::size_t count) {
  const std::map<std::string, std::function<void(std::vector<CheckRecord>&)>> suites{
      {"structure", [&](auto& o) { structure(o, seed, count); }},
      {"ghzw", [&](auto& o) { ghzw(o, seed); }},
      {"optimizer", [&](auto& o) { optimizer(o, seed, count); }},
      {"identities", [&](auto& o) { identities(o, seed, count); }},
      {"coarse", [&](auto& o) { coarse(o, seed, count); }},
      {"models", [&](auto& o) { models(o); }},
  };
  std::vector<CheckRecord> out;
  if (suite == "all") {
    for (const char* name : {"structure", "ghzw", "optimizer", "identities", "coarse", "models"}) {
      suites.at(name)(out);
    }
    return out;
  }
  const auto it = suites.find(suite);
  if (it == suites.end()) throw ConfigError("unknown check suite '" + suite + "'");
  it->second(out);
  return out;
}

}  // namespace tripent

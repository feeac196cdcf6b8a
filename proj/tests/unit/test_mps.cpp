// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "tripent/ep.hpp"
#include "tripent/error.hpp"
#include "tripent/models.hpp"
#include "tripent/mps.hpp"
#include "tripent/zoo.hpp"

using namespace tripent;

namespace {

const Tripartition kAbc({Party::A, Party::B, Party::C});

UniformMPS ghz_mps(std::size_t n) {
  CMatrix m0 = CMatrix::Zero(2, 2), m1 = CMatrix::Zero(2, 2);
  m0(0, 0) = 1;
  m1(1, 1) = 1;
  return UniformMPS({m0, m1}, n);
}

UniformMPS random_mps(std::size_t d, std::size_t bond, std::size_t n, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<CMatrix> t;
  for (std::size_t s = 0; s < d; ++s) {
    CMatrix m(static_cast<Eigen::Index>(bond), static_cast<Eigen::Index>(bond));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(g(rng), g(rng));
    t.push_back(m);
  }
  return UniformMPS(std::move(t), n);
}

// Transfer-matrix oracle written as explicit index loops.
CMatrix transfer_loops(const UniformMPS& m) {
  const std::size_t D = m.D();
  CMatrix t = CMatrix::Zero(static_cast<Eigen::Index>(D * D), static_cast<Eigen::Index>(D * D));
  for (const CMatrix& ms : m.tensors())
    for (std::size_t a = 0; a < D; ++a)
      for (std::size_t c = 0; c < D; ++c)
        for (std::size_t b = 0; b < D; ++b)
          for (std::size_t d = 0; d < D; ++d)
            t(static_cast<Eigen::Index>(a * D + c), static_cast<Eigen::Index>(b * D + d)) +=
                ms(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                std::conj(ms(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(d)));
  return t;
}

// Entropies across the three cuts of a contiguous 4/4/4-style split.
std::array<double, 3> cut_entropies(const PureState& abc) {
  return {subsystem_entropy(abc, PartySet{0}), subsystem_entropy(abc, PartySet{1}),
          subsystem_entropy(abc, PartySet{2})};
}

}  // namespace

TEST_CASE("transfer matrices") {
  CVector v(2);
  v << 0.6, Complex(0, 0.8);
  std::vector<CMatrix> prod;
  for (int s = 0; s < 2; ++s) prod.push_back(CMatrix::Constant(1, 1, v[s]));
  const TransferMatrix t1 = transfer_matrix(UniformMPS(prod, 5));
  CHECK(std::abs(t1.t(0, 0) - 1.0) < 1e-14);

  // GHZ: the regrouped (ab),(cd) matrix has exactly two unit eigenvalues.
  const CoarseTensor g = coarse_grain(transfer_matrix(ghz_mps(6)), 1);
  CHECK(g.d() == 2);
  CHECK(g.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.weights[1] == doctest::Approx(1.0).epsilon(1e-14));

  Rng rng(1);
  for (int k = 0; k < 5; ++k) {
    const UniformMPS m = random_mps(3, 3, 4, rng);
    CHECK((transfer_matrix(m).t - transfer_loops(m)).cwiseAbs().maxCoeff() < 1e-13);
  }
  CHECK_THROWS_AS(UniformMPS(prod, 2), DomainError);
}

TEST_CASE("coarse graining reconstructs powers of T") {
  Rng rng(2);
  for (int k = 0; k < 5; ++k) {
    const UniformMPS m = random_mps(2, 3, 12, rng);
    const TransferMatrix t = transfer_matrix(m);
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
      const CoarseTensor c = coarse_grain(t, n);
      const CMatrix tn = matrix_power(t.t, n);
      CHECK((reconstruct_transfer(c) - tn).norm() <= 1e-10 * tn.norm());
      CHECK(c.d() <= std::min<std::size_t>(9, std::size_t{1} << n));
    }
    // T^(m+n) from the product of the blocked reconstructions.
    const CMatrix r2 = reconstruct_transfer(coarse_grain(t, 2));
    const CMatrix r3 = reconstruct_transfer(coarse_grain(t, 3));
    const CMatrix t5 = matrix_power(t.t, 5);
    CHECK((r2 * r3 - t5).norm() <= 1e-10 * t5.norm());
  }
  std::vector<CMatrix> prod{CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, 0.0)};
  CHECK(coarse_grain(transfer_matrix(UniformMPS(prod, 4)), 3).d() == 1);
  CHECK(coarse_grain(transfer_matrix(ghz_mps(6)), 4).d() == 2);
  CHECK_THROWS_AS(coarse_grain(transfer_matrix(ghz_mps(6)), 0), DomainError);
}

TEST_CASE("fixed-point tensors are invariant under blocking") {
  Rng rng(3);
  const UniformMPS fp = make_fixed_point_mps(FixedPointSpec{{random_spectrum(3, rng)}, {}}, 9);
  const TransferMatrix t = transfer_matrix(fp);
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    const CoarseTensor c = coarse_grain(t, n);
    CHECK((reconstruct_transfer(c) - t.t).norm() < 1e-10);
    CHECK(c.d() == fp.d());
  }
  // The truncated three-site state is a triangle state.
  const PureState abc = dense_export(assemble_tripartite(fp, 3, 3, {}));
  CHECK(h_measure(abc, kAbc) <= 1e-9);
  EpOptions o;
  o.split_policy = SplitPolicy::Factored;
  CHECK(g_measure(abc, kAbc, o) <= 1e-5);
}

TEST_CASE("Schmidt spectra") {
  std::vector<CMatrix> prod{CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, 0.0)};
  const TransferMatrix tp = transfer_matrix(UniformMPS(prod, 6));
  const SchmidtResult sp = schmidt_bipartite(coarse_grain(tp, 2), coarse_grain(tp, 4));
  CHECK(sp.values.size() == 1);
  CHECK(sp.entropy == doctest::Approx(0.0));

  const TransferMatrix tg = transfer_matrix(ghz_mps(6));
  const SchmidtResult sg = schmidt_bipartite(coarse_grain(tg, 2), coarse_grain(tg, 4));
  REQUIRE(sg.values.size() == 2);
  CHECK(sg.values[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(sg.entropy == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Rng rng(4);
  const UniformMPS m = random_mps(2, 3, 10, rng);
  const TransferMatrix t = transfer_matrix(m);
  const SchmidtResult s = schmidt_bipartite(coarse_grain(t, 4), coarse_grain(t, 6));
  CHECK(s.values.squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
  const PureState dense = mps_to_dense(m);
  std::vector<std::size_t> first{0, 1, 2, 3};
  CHECK(std::abs(s.entropy - subsystem_entropy(dense, first)) < 1e-9);
  CHECK_THROWS_AS(schmidt_bipartite(coarse_grain(t, 4), coarse_grain(t, 4)), DomainError);
}

TEST_CASE("truncation rules") {
  const TransferMatrix tg = transfer_matrix(ghz_mps(6));
  const CoarseTensor a = coarse_grain(tg, 2);
  const SchmidtResult s = schmidt_bipartite(a, coarse_grain(tg, 4));
  CHECK(truncate_physical(a, s, {std::nullopt, 0.1}).d() == 2);
  CHECK(truncate_physical(a, s, {1, 0.0}).d() == 1);
  CHECK(truncate_physical(a, s, {1, 0.0}).discarded_weight == doctest::Approx(0.5));
  RVector v(4);
  v << 0.9, 0.4, 1e-5, 1e-7;
  CHECK(retained_rank(v, {}) == 3);
  CHECK(retained_rank(v, {std::nullopt, 1e-4}) == 2);
  CHECK(retained_rank(v, {2, 0.0}) == 2);
}

TEST_CASE("isometric assembly preserves entropies") {
  Rng rng(5);
  std::vector<UniformMPS> cases{ghz_mps(12)};
  for (int k = 0; k < 4; ++k) cases.push_back(random_mps(2, 1 + k % 3, 12, rng));
  for (const UniformMPS& m : cases) {
    const PureState abc = dense_export(assemble_tripartite(m, 4, 4, {}));
    const PureState ref = group_tripartite(mps_to_dense(m), Tripartition::contiguous(12, 4, 4));
    const auto e1 = cut_entropies(abc), e2 = cut_entropies(ref);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(e1[i] - e2[i]) < 1e-9);
    CHECK(std::abs(reflected_entropy(abc, kAbc) - reflected_entropy(ref, kAbc)) < 1e-8);
  }
  const PureState g = dense_export(assemble_tripartite(ghz_mps(6), 2, 2, {}));
  CHECK(std::abs(std::abs(g.amplitudes().dot(make_ghz(2).amplitudes())) - 1) < 1e-12);
}

TEST_CASE("artifact round trips") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tripent_unit_mps";
  fs::create_directories(dir);
  Rng rng(6);
  const UniformMPS m = random_mps(2, 3, 7, rng);
  for (bool binary : {true, false}) {
    const std::string p = (dir / (binary ? "m.bin" : "m.json")).string();
    write_mps(p, m, binary);
    const UniformMPS r = read_mps(p);
    CHECK(r.n_sites() == 7);
    for (std::size_t s = 0; s < 2; ++s) CHECK((r.tensors()[s] - m.tensors()[s]).norm() == 0);
    const PureState st = mps_to_dense(m);
    const std::string q = (dir / (binary ? "s.bin" : "s.json")).string();
    write_state(q, st, binary);
    const PureState rs = read_state(q);
    CHECK(rs.dims() == st.dims());
    CHECK((rs.amplitudes() - st.amplitudes()).norm() == 0);
  }
  {
    std::ofstream bad(dir / "bad.bin", std::ios::binary);
    bad << "NOTMAGIC";
  }
  CHECK_THROWS_AS(read_mps((dir / "bad.bin").string()), IoError);
  CHECK_THROWS_AS(read_state((dir / "missing.bin").string()), IoError);
  fs::remove_all(dir);
}

TEST_CASE("uniform-MPS energy and gradient") {
  Rng rng(7);
  const LocalHamiltonian h = build_obrien_fendley(6, 0.3);
  const double e0 = Eigen::SelfAdjointEigenSolver<RMatrix>(h.dense(), Eigen::EigenvaluesOnly)
                        .eigenvalues()[0];
  for (int k = 0; k < 3; ++k) {
    const UniformMPS m = random_mps(2, 3, 6, rng);
    const CVector v = mps_to_dense(m).amplitudes();
    const double dense_e = (v.adjoint() * h.dense().cast<Complex>() * v)(0, 0).real();
    const double e = pumps_energy(m, h);
    CHECK(e == doctest::Approx(dense_e).epsilon(1e-10));
    CHECK(e >= e0 - 1e-10);

    // dE along a real direction equals 2 Re <G, dM>.
    const std::vector<CMatrix> g = pumps_gradient(m, h);
    const UniformMPS dir = random_mps(2, 3, 6, rng);
    double analytic = 0;
    for (std::size_t s = 0; s < 2; ++s) {
      analytic += 2 * (g[s].conjugate().cwiseProduct(dir.tensors()[s])).sum().real();
    }
    auto shifted = [&](double t) {
      std::vector<CMatrix> ts;
      for (std::size_t s = 0; s < 2; ++s) ts.push_back(m.tensors()[s] + t * dir.tensors()[s]);
      return pumps_energy(UniformMPS(ts, 6), h);
    };
    const double fd = (shifted(1e-6) - shifted(-1e-6)) / 2e-6;
    CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
  }
}

TEST_CASE("variational optimizer on easy cases") {
  const PumpsResult f = pumps_optimize(build_field(6), 1);
  CHECK(f.energy == doctest::Approx(-6.0).epsilon(1e-8));
  const CMatrix& up = f.mps.tensors()[0];
  CHECK(std::abs(up(0, 0)) > 0.99 * std::pow(1.0, 1));
  CHECK(std::abs(f.mps.tensors()[1](0, 0)) < 1e-4);
  for (std::size_t i = 1; i < f.history.size(); ++i) CHECK(f.history[i] <= f.history[i - 1] + 1e-12);

  const LocalHamiltonian ising = build_obrien_fendley(8, 0.0);
  PumpsOptions o;
  o.max_iterations = 400;
  const PumpsResult r = pumps_optimize(ising, 2, o);
  CHECK(r.energy >= free_fermion_ising_oracle(8) - 1e-10);
  CHECK(r.energy < 0.9 * free_fermion_ising_oracle(8));
  CHECK(default_bond_dimension(24) == 12);
  CHECK(default_bond_dimension(84) == 26);
  CHECK(default_bond_dimension(9) == 9);
  CHECK(default_bond_dimension(3) == 8);
}

// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "tripent/ep.hpp"
#include "tripent/error.hpp"
#include "tripent/mps.hpp"
#include "tripent/zoo.hpp"

using namespace tripent;

namespace {

const Tripartition kAbc({Party::A, Party::B, Party::C});

std::vector<Tripartition> pairings() {
  return {Tripartition({Party::A, Party::B, Party::C}),
          Tripartition({Party::B, Party::C, Party::A}),
          Tripartition({Party::A, Party::C, Party::B})};
}

RVector half() {
  RVector v(2);
  v << 0.5, 0.5;
  return v;
}

}  // namespace

TEST_CASE("triangle of three Bell pairs") {
  TriangleSpec t;
  t.ab = {half(), 2, 2};
  t.bc = {half(), 2, 2};
  t.ca = {half(), 2, 2};
  const PureState s = make_triangle(t, 1);
  const EntropyReport r = entropy_report(s, kAbc);
  CHECK(r.S_A == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK(r.S_B == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK(r.S_C == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK(r.I_AB == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  // Pure state: I(A:C|B) = S_A + S_C - S_B.
  const std::vector<std::size_t> a{0}, b{1}, c{2};
  CHECK(conditional_mutual_information(s, a, b, c) ==
        doctest::Approx(r.S_A + r.S_C - r.S_B).epsilon(1e-10));
}

TEST_CASE("triangle with a trivial factor") {
  TriangleSpec t;
  t.ab = {half(), 2, 2};
  t.bc = {RVector::Ones(1), 1, 1};
  t.ca = {RVector::Ones(1), 1, 1};
  const PureState s = make_triangle(t, 2);
  CHECK(s.dims() == std::vector<std::size_t>{2, 2, 1});
  CHECK(mutual_information(s, kAbc) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  t.ab.left_dim = 1;
  CHECK_THROWS_AS(make_triangle(t, 2), DomainError);
}

TEST_CASE("random triangles have vanishing g and h on every pairing") {
  Rng rng(7);
  EpOptions o;
  o.split_policy = SplitPolicy::Factored;
  for (int k = 0; k < 5; ++k) {
    const PureState s = make_triangle(random_triangle_spec(rng, 3), 100 + k);
    for (const Tripartition& p : pairings()) {
      CHECK(h_measure(s, p) <= 1e-9);
      CHECK(g_measure(s, p, o) <= 1e-5);
    }
  }
}

TEST_CASE("SOTS constructions") {
  SotsSpec ghz;
  for (int j = 0; j < 3; ++j) {
    TriangleSpec t;
    t.ab = t.bc = t.ca = {RVector::Ones(1), 1, 1};
    t.scramble = false;
    ghz.blocks.push_back(t);
    ghz.weights.push_back(1.0 / 3.0);
  }
  ghz.weights[2] = 1.0 - ghz.weights[0] - ghz.weights[1];
  ghz.scramble = false;
  CHECK((make_sots(ghz, 0).amplitudes() - make_ghz(3).amplitudes()).norm() < 1e-12);

  Rng rng(8);
  SotsSpec one;
  one.blocks.push_back(random_triangle_spec(rng, 2));
  one.weights = {1.0};
  one.scramble = false;
  CHECK((make_sots(one, 4).amplitudes() - make_triangle(one.blocks[0], 4).amplitudes()).norm() <
        1e-12);

  SotsSpec two = random_sots_spec(rng, 2, 2);
  two.weights = {0.7, 0.3};
  const PureState s = make_sots(two, 5);
  for (const Tripartition& p : pairings()) CHECK(h_measure(s, p) <= 1e-9);

  SotsSpec overlap = two;
  overlap.offsets = {{0, 0, 0}, {0, 0, 0}};
  CHECK_THROWS_AS(make_sots(overlap, 0), DomainError);
}

TEST_CASE("GHZ and W amplitudes") {
  const PureState g = make_ghz(2);
  CHECK(std::abs(g.amplitudes()[0] - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(g.amplitudes()[7] - 1 / std::sqrt(2.0)) < 1e-15);
  const PureState w = make_w();
  for (int i : {1, 2, 4}) CHECK(std::abs(w.amplitudes()[i] - 1 / std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(w.amplitudes()[0]) == 0);
}

TEST_CASE("Markov residuals") {
  // 4-party SOPS: canonical purification of a SOTS marginal.
  Rng rng(9);
  const PureState s = make_sots(random_sots_spec(rng, 2, 2), 6);
  const PureState pur =
      canonical_purification(reduced_density(s, std::vector<std::size_t>{0, 1}));
  for (double r : markov_residuals(pur)) CHECK(std::abs(r) < 1e-9);

  // Four-qubit GHZ: conditioning on one qubit fixes its neighbours.
  CVector g = CVector::Zero(16);
  g[0] = g[15] = 1;
  for (double r : markov_residuals(PureState::normalized(g, {2, 2, 2, 2})))
    CHECK(std::abs(r) < 1e-12);

  // Bell pair between parties 0 and 2: I(0:2|1) = I(2:0|3) = 2 ln 2.
  CVector bell = CVector::Zero(16);
  bell[0b0000] = bell[0b1010] = 1;
  const std::vector<double> rb =
      markov_residuals(PureState::normalized(bell, {2, 2, 2, 2}));
  CHECK(std::abs(rb[0]) < 1e-12);
  CHECK(rb[1] == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(rb[2]) < 1e-12);
  CHECK(rb[3] == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  for (double r : markov_residuals(PureState::basis({2, 2, 2, 2}, {0, 1, 1, 0})))
    CHECK(std::abs(r) < 1e-14);

  // Merging adjacent parties of the SOPS keeps h = 0.
  const PureState merged = pur.grouped({{0}, {1, 2}, {3}});
  CHECK(h_measure(merged, kAbc) <= 1e-9);
}

TEST_CASE("local isometries leave g and h unchanged") {
  Rng rng(10);
  const PureState s = make_sots(random_sots_spec(rng, 2, 2), 3);
  const PureState big = apply_random_isometries(s, 2, rng);
  CHECK(std::abs(h_measure(big, kAbc) - h_measure(s, kAbc)) < 1e-5);
  EpOptions o;
  o.seed = 1;
  CHECK(std::abs(g_measure(big, kAbc, o) - g_measure(s, kAbc, o)) < 1e-5);
}

TEST_CASE("fixed-point MPS") {
  FixedPointSpec one{{half()}, {}};
  const UniformMPS m = make_fixed_point_mps(one, 6);
  CHECK(m.d() == 4);
  CHECK(m.D() == 2);
  const PureState dense = mps_to_dense(m);
  const Tripartition part = Tripartition::contiguous(6, 2, 2);
  const PureState abc = group_tripartite(dense, part);
  CHECK(h_measure(abc, kAbc) <= 1e-9);
  CHECK(g_measure(abc, kAbc) <= 1e-5);

  FixedPointSpec two{{RVector::Ones(1), RVector::Ones(1)}, {}};
  const UniformMPS g = make_fixed_point_mps(two, 3);
  CHECK((mps_to_dense(g).amplitudes() - make_ghz(2).amplitudes()).norm() < 1e-12);

  Rng rng(11);
  FixedPointSpec generic{{random_spectrum(2, rng), random_spectrum(2, rng)}, {}};
  const PureState lr = group_tripartite(mps_to_dense(make_fixed_point_mps(generic, 3)),
                                        Tripartition::contiguous(3, 1, 1));
  CHECK(h_measure(lr, kAbc) <= 1e-9);
  CHECK(g_measure(lr, kAbc) > 0.01);

  CHECK_THROWS_AS(make_fixed_point_mps(FixedPointSpec{}, 6), DomainError);
}

// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

// Extrapolated Ising h does not depend on the subregion ratios.

#include <cmath>

#include "doctest.h"
#include "tripent/experiment.hpp"

using namespace tripent;

namespace {

ScalingFit h_asymptote(const std::vector<std::size_t>& sizes, const std::string& ratios) {
  ExperimentConfig c;
  c.sizes = sizes;
  c.ratios = parse_ratios(ratios);
  c.compute_g = false;
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.all_converged);
  REQUIRE(r.h_fit);
  return *r.h_fit;
}

}  // namespace

TEST_CASE("Ising h asymptote is independent of the ratios") {
  const ScalingFit thirds = h_asymptote({9, 12, 15, 18, 21}, "1/3,1/3,1/3");
  const ScalingFit half = h_asymptote({8, 12, 16, 20}, "1/2,1/4,1/4");
  const double tol = 2 * std::hypot(thirds.asymptote_stderr, half.asymptote_stderr);
  INFO("thirds " << thirds.asymptote << " +- " << thirds.asymptote_stderr << ", half "
                 << half.asymptote << " +- " << half.asymptote_stderr);
  CHECK(std::abs(thirds.asymptote - half.asymptote) <= tol);
}

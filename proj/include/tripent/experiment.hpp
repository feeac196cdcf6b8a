// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

// Finite-size pipeline: ground state, per-region compression, g/h/I per
// size, power-law extrapolation, persisted records and property checks.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tripent/ep.hpp"
#include "tripent/qstate.hpp"

namespace tripent {

enum class ModelKind { Ising, ObrienFendley, Xxz, Ghz, W, Triangle, Sots, FixedPoint };
enum class Backend { Ed, Mps, Import };

struct Fraction {
  long num = 1;
  long den = 3;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Region caps: A, B, C_L, C_R. C is compressed to C_L * C_R.
using Caps = std::array<std::size_t, 4>;

struct ExperimentConfig {
  ModelKind model = ModelKind::Ising;
  double lambda = 0;
  double delta = 0;
  std::vector<std::size_t> sizes;
  std::array<Fraction, 3> ratios{};
  Backend backend = Backend::Ed;
  std::string import_path;
  Caps caps{64, 64, 12, 12};
  /// Schmidt-value threshold; values <= epsilon are dropped in addition to caps.
  double epsilon = 1e-8;
  double eta = 1e-4;
  int restarts = 3;
  int max_iterations = 10000;
  /// See EpOptions::screen_iterations.
  int screen_iterations = 300;
  std::uint64_t seed = 0;
  bool compute_g = true;
  /// Use (psi_even + psi_odd)/sqrt(2) when the two parity sectors are
  /// degenerate within `cat_tolerance`.
  bool cat_state = false;
  double cat_tolerance = 1e-10;
  /// Bond dimension for the mps backend; 0 selects the size-based default.
  std::size_t bond_dim = 0;
  /// Blocks of the fixed-point MPS model.
  std::size_t fp_blocks = 1;
  /// Worker cap; 0 reads TRIPARTICLE_THREADS, then the hardware count.
  std::size_t threads = 0;
};

struct ResultRecord {
  std::size_t n = 0;
  std::string ratios;
  std::string model;
  double g = 0, h = 0, I = 0;
  double S_A = 0, S_B = 0, S_AB = 0;
  double E_P = 0, S_R = 0;
  std::array<double, 3> discarded{};
  std::array<std::size_t, 3> dims{};
  double energy = 0;
  std::string sector;
  bool degenerate = false;
  bool cat = false;
  // Optimizer diagnostics.
  int ep_iterations = 0;
  double ep_gradient_norm = 0;
  int ep_restarts = 0;
  SplitDims ep_split{1, 1};
  bool converged = true;
  std::string error;
  /// Seconds; kept out of persisted output so reruns are byte-identical.
  double wall_time = 0;
};

struct ScalingFit {
  std::string quantity;
  double asymptote = 0;
  double amplitude = 0;
  double exponent = 2;
  bool exponent_fitted = false;
  /// Sum of squared residuals.
  double residual = 0;
  double asymptote_stderr = 0;
  std::vector<std::size_t> sizes;
};

struct CompressedState {
  PureState state;
  std::array<double, 3> discarded{};
};

/// Projects every region of a contiguous tripartition onto its top Schmidt
/// vectors. `caps[2]` and `caps[3]` multiply to the C cap.
CompressedState compress_tripartite(const PureState& state, const Tripartition& part,
                                    const Caps& caps, double epsilon);

/// Site counts (N_A, N_B, N_C) for the configured ratios.
std::array<std::size_t, 3> region_sizes(const ExperimentConfig& config, std::size_t n);

/// g, h and friends of an (A, B, C) state; E_P with the balanced split on
/// the compressed C, each side limited by the C_L / C_R caps.
ResultRecord measure_tripartite(const PureState& abc, const ExperimentConfig& config);

ResultRecord run_point(const ExperimentConfig& config, std::size_t n);

ScalingFit fit_series(const std::vector<ResultRecord>& records, const std::string& quantity);

struct ExperimentResult {
  std::vector<ResultRecord> records;
  std::optional<ScalingFit> g_fit;
  std::optional<ScalingFit> h_fit;
  std::vector<std::string> fit_errors;
  bool all_converged = true;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Serialization.
ExperimentConfig config_from_json(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& config);
std::string record_to_json(const ResultRecord& record);
ResultRecord record_from_json(const std::string& line);
std::string records_to_jsonl(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> records_from_jsonl(const std::string& text);
std::string records_to_csv(const std::vector<ResultRecord>& records);
std::string fit_to_json(const ScalingFit& fit);
std::string experiment_summary_json(const ExperimentResult& result);

std::string model_name(ModelKind m);
ModelKind parse_model(const std::string& name);
std::string backend_name(Backend b);
Backend parse_backend(const std::string& name);
/// "1/3,1/3,1/3" or "0.5,0.25,0.25".
std::array<Fraction, 3> parse_ratios(const std::string& text);
std::string ratios_string(const std::array<Fraction, 3>& r);

struct CheckRecord {
  std::string suite;
  std::string name;
  double value = 0;
  double threshold = 0;
  bool pass = false;
};

/// Property suites: structure, ghzw, optimizer, identities, coarse, models,
/// or all. `count` scales the number of random instances.
std::vector<CheckRecord> run_checks(const std::string& suite, std::uint64_t seed,
                                    std::size_t count = 10);
std::string checks_to_jsonl(const std::vector<CheckRecord>& checks);

}  // namespace tripent

// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

#include "tripent/tripent.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "tripent/ep.hpp"
#include "tripent/error.hpp"
#include "tripent/experiment.hpp"
#include "tripent/mps.hpp"
#include "tripent/qstate.hpp"

struct tp_state {
  tripent::PureState state;
};

namespace {

thread_local std::string g_last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
tp_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return TP_OK;
  } catch (const tripent::ConfigError& e) {
    g_last_error = e.what();
    return TP_ERR_CONFIG;
  } catch (const tripent::DomainError& e) {
    g_last_error = e.what();
    return TP_ERR_DOMAIN;
  } catch (const tripent::ConvergenceError& e) {
    g_last_error = e.what();
    return TP_ERR_CONVERGENCE;
  } catch (const tripent::IoError& e) {
    g_last_error = e.what();
    return TP_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TP_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw tripent::DomainError(std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* tp_version(void) { return "0.1.0"; }

const char* tp_last_error(void) { return g_last_error.c_str(); }

void tp_string_free(char* s) { std::free(s); }

tp_status tp_state_create(const double* amplitudes, const size_t* dims, size_t num_parties,
                          tp_state** out) {
  return guarded([&] {
    require(amplitudes, "amplitudes");
    require(dims, "dims");
    require(out, "out");
    std::vector<std::size_t> d(dims, dims + num_parties);
    std::size_t n = 1;
    for (std::size_t x : d) n *= x;
    tripent::CVector v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      v[static_cast<Eigen::Index>(i)] = {amplitudes[2 * i], amplitudes[2 * i + 1]};
    }
    *out = new tp_state{tripent::PureState(std::move(v), std::move(d))};
  });
}

tp_status tp_state_load(const char* path, tp_state** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new tp_state{tripent::read_state(path)};
  });
}

tp_status tp_state_save(const tp_state* state, const char* path, int binary) {
  return guarded([&] {
    require(state, "state");
    require(path, "path");
    tripent::write_state(path, state->state, binary != 0);
  });
}

void tp_state_free(tp_state* state) { delete state; }

tp_status tp_state_num_parties(const tp_state* state, size_t* out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    *out = state->state.num_parties();
  });
}

tp_status tp_state_measures(const tp_state* state, const int* assignment, double eta,
                            uint64_t seed, int compute_g, tp_measures* out) {
  return guarded([&] {
    require(state, "state");
    require(assignment, "assignment");
    require(out, "out");
    std::vector<tripent::Party> parts;
    for (std::size_t i = 0; i < state->state.num_parties(); ++i) {
      if (assignment[i] < 0 || assignment[i] > 2) {
        throw tripent::DomainError("assignment entries must be 0, 1 or 2");
      }
      parts.push_back(static_cast<tripent::Party>(assignment[i]));
    }
    const tripent::Tripartition part(parts);
    const tripent::PureState abc = tripent::group_tripartite(state->state, part);
    const tripent::Tripartition abc_part(
        {tripent::Party::A, tripent::Party::B, tripent::Party::C});
    const tripent::HReport h = tripent::h_report(abc, abc_part);
    out->h = h.h;
    out->mutual_information = h.mutual;
    out->reflected_entropy = h.reflected;
    out->converged = 1;
    out->g = out->ep = std::numeric_limits<double>::quiet_NaN();
    if (compute_g) {
      tripent::EpOptions o;
      o.eta = eta > 0 ? eta : 1e-4;
      o.seed = seed;
      o.split_policy = tripent::SplitPolicy::Factored;
      const tripent::EpResult r = tripent::minimize_ep(abc, o);
      out->ep = r.ep;
      out->g = 2 * r.ep - h.mutual;
      out->converged = r.converged ? 1 : 0;
    }
  });
}

tp_status tp_run_experiment(const char* config_json, char** records_jsonl, char** records_csv,
                            char** summary_json, int* all_converged) {
  return guarded([&] {
    require(config_json, "config");
    const tripent::ExperimentResult r =
        tripent::run_experiment(tripent::config_from_json(config_json));
    if (records_jsonl) *records_jsonl = dup(tripent::records_to_jsonl(r.records));
    if (records_csv) *records_csv = dup(tripent::records_to_csv(r.records));
    if (summary_json) *summary_json = dup(tripent::experiment_summary_json(r));
    if (all_converged) *all_converged = r.all_converged ? 1 : 0;
  });
}

tp_status tp_run_point(const char* config_json, size_t n, char** record_json, int* converged) {
  return guarded([&] {
    require(config_json, "config");
    require(record_json, "record_json");
    tripent::ExperimentConfig c = tripent::config_from_json(config_json);
    c.sizes = {n};
    const tripent::ResultRecord r = tripent::run_point(c, n);
    *record_json = dup(tripent::record_to_json(r));
    if (converged) *converged = r.converged ? 1 : 0;
  });
}

tp_status tp_fit(const char* records_jsonl, const char* quantity, char** fit_json) {
  return guarded([&] {
    require(records_jsonl, "records");
    require(quantity, "quantity");
    require(fit_json, "fit_json");
    const auto recs = tripent::records_from_jsonl(records_jsonl);
    *fit_json = dup(tripent::fit_to_json(tripent::fit_series(recs, quantity)));
  });
}

tp_status tp_records_to_csv(const char* records_jsonl, char** csv) {
  return guarded([&] {
    require(records_jsonl, "records");
    require(csv, "csv");
    *csv = dup(tripent::records_to_csv(tripent::records_from_jsonl(records_jsonl)));
  });
}

tp_status tp_check(const char* suite, uint64_t seed, size_t count, char** checks_jsonl,
                   int* all_passed) {
  return guarded([&] {
    require(suite, "suite");
    require(checks_jsonl, "checks_jsonl");
    const auto checks = tripent::run_checks(suite, seed, count);
    bool ok = true;
    for (const auto& c : checks) ok = ok && c.pass;
    *checks_jsonl = dup(tripent::checks_to_jsonl(checks));
    if (all_passed) *all_passed = ok ? 1 : 0;
  });
}

}  // extern "C"

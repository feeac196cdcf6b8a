// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through tripent.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tripent/tripent.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPartial = 2;

struct Options {
  std::string model = "ising";
  double lambda = 0;
  double delta = 0;
  std::string sizes;
  std::string ratios = "1/3,1/3,1/3";
  std::string caps = "64,64,12,12";
  double epsilon = 1e-8;
  double eta = 1e-4;
  std::uint64_t seed = 0;
  std::string backend = "ed";
  std::string import_path;
  std::string out;
  std::string format = "jsonl";
  int restarts = 3;
  int screen = 300;
  std::size_t bond_dim = 0;
  std::size_t blocks = 1;
  bool cat = false;
  bool no_g = false;
};

// Owns a string returned by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { tp_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Failure {
  std::string message;
};

void check(tp_status s) {
  if (s != TP_OK) throw Failure{tp_last_error()};
}

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Failure{std::string("cannot parse ") + what + " entry '" + item + "'"};
    }
    out.push_back(v);
  }
  return out;
}

std::string default_sizes(const std::string& model) {
  if (model == "xxz") return "12,18,24";
  if (model == "ising" || model == "obf") return "9,12,15,18,21";
  return "3,6,9";
}

std::string config_json(const Options& o) {
  json j;
  j["model"] = o.model;
  j["lambda"] = o.lambda;
  j["delta"] = o.delta;
  j["sizes"] = parse_list(o.sizes.empty() ? default_sizes(o.model) : o.sizes, "size");
  j["ratios"] = o.ratios;
  const auto caps = parse_list(o.caps, "cap");
  if (caps.size() != 4) throw Failure{"--caps needs four entries: A,B,C_L,C_R"};
  j["caps"] = caps;
  j["epsilon"] = o.epsilon;
  j["eta"] = o.eta;
  j["restarts"] = o.restarts;
  j["screen_iterations"] = o.screen;
  j["seed"] = o.seed;
  j["backend"] = o.backend;
  j["import_path"] = o.import_path;
  j["compute_g"] = !o.no_g;
  j["cat_state"] = o.cat;
  j["bond_dim"] = o.bond_dim;
  j["fp_blocks"] = o.blocks;
  return j.dump();
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Failure{"cannot open " + o.out + " for writing"};
  f << text;
  if (!f) throw Failure{"write to " + o.out + " failed"};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{"cannot open " + path + " for writing"};
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Failure{"cannot open " + path};
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cmd_run(const Options& o) {
  LibString jsonl, csv, summary;
  int all = 0;
  check(tp_run_experiment(config_json(o).c_str(), &jsonl.p, &csv.p, &summary.p, &all));
  emit(o, o.format == "csv" ? csv.str() : jsonl.str());
  if (!o.out.empty()) {
    write_file(o.out + ".summary.json", summary.str() + "\n");
    if (o.format == "jsonl") write_file(o.out + ".csv", csv.str());
  }
  std::cerr << summary.str() << "\n";
  return all ? kExitOk : kExitPartial;
}

int cmd_point(const Options& o) {
  const auto sizes = parse_list(o.sizes.empty() ? default_sizes(o.model) : o.sizes, "size");
  if (sizes.size() != 1) throw Failure{"point needs exactly one size in --sizes"};
  LibString rec;
  int converged = 0;
  check(tp_run_point(config_json(o).c_str(), sizes[0], &rec.p, &converged));
  if (o.format == "csv") {
    LibString csv;
    check(tp_records_to_csv((rec.str() + "\n").c_str(), &csv.p));
    emit(o, csv.str());
  } else {
    emit(o, rec.str() + "\n");
  }
  return converged ? kExitOk : kExitPartial;
}

int cmd_fit(const Options& o, const std::string& input, const std::string& quantity) {
  const std::string text = read_file(input);
  std::string out;
  std::vector<std::string> qs;
  if (quantity == "both") {
    qs = {"h", "g"};
  } else {
    qs = {quantity};
  }
  for (const std::string& q : qs) {
    LibString fit;
    check(tp_fit(text.c_str(), q.c_str(), &fit.p));
    out += fit.str() + "\n";
  }
  emit(o, out);
  return kExitOk;
}

int cmd_check(const Options& o, const std::string& suite, std::size_t count) {
  LibString out;
  int passed = 0;
  check(tp_check(suite.c_str(), o.seed, count, &out.p, &passed));
  emit(o, out.str());
  return passed ? kExitOk : kExitPartial;
}

void add_model_flags(CLI::App* app, Options& o) {
  app->add_option("--model", o.model, "Model")
      ->check(CLI::IsMember({"ising", "obf", "xxz", "ghz", "w", "triangle", "sots", "fpmps"}));
  app->add_option("--lambda", o.lambda, "Three-spin coupling of the obf model");
  app->add_option("--delta", o.delta, "Anisotropy of the xxz model, in [-1, 1)");
  app->add_option("--sizes", o.sizes, "Comma-separated ring lengths");
  app->add_option("--ratios", o.ratios, "Region fractions, e.g. 1/3,1/3,1/3");
  app->add_option("--caps", o.caps, "Compression caps A,B,C_L,C_R");
  app->add_option("--epsilon", o.epsilon, "Schmidt-value threshold");
  app->add_option("--eta", o.eta, "Gradient-norm stopping threshold");
  app->add_option("--restarts", o.restarts, "Random starts besides the identity");
  app->add_option("--screen", o.screen,
                  "Iterations per start before only the lowest continues (0: run all)");
  app->add_option("--backend", o.backend, "Ground-state source")
      ->check(CLI::IsMember({"ed", "mps", "import"}));
  app->add_option("--import", o.import_path, "State or MPS file for --backend import");
  app->add_option("--bond-dim", o.bond_dim, "Bond dimension for --backend mps");
  app->add_option("--blocks", o.blocks, "Blocks of the fpmps model");
  app->add_flag("--cat", o.cat, "Use the symmetric combination of degenerate parity sectors");
  app->add_flag("--no-g", o.no_g, "Skip the purification search");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tripartite entanglement measures g and h for pure states and spin chains"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--out", o.out, "Output path (stdout when omitted)");
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"jsonl", "csv"}));
  };

  CLI::App* run = app.add_subcommand("run", "Full finite-size experiment");
  add_model_flags(run, o);
  common(run);

  CLI::App* point = app.add_subcommand("point", "Single size");
  add_model_flags(point, o);
  common(point);

  std::string fit_input, quantity = "both";
  CLI::App* fit = app.add_subcommand("fit", "Refit stored JSON-lines records");
  fit->add_option("records", fit_input, "Records file")->required();
  fit->add_option("--quantity", quantity, "g, h, I or both")
      ->check(CLI::IsMember({"g", "h", "I", "both"}));
  common(fit);

  std::string suite = "all";
  std::size_t count = 10;
  CLI::App* chk = app.add_subcommand("check", "Property suites");
  chk->add_option("suite", suite, "structure, ghzw, optimizer, identities, coarse, models or all");
  chk->add_option("--count", count, "Random instances per suite");
  common(chk);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }
  try {
    if (*run) return cmd_run(o);
    if (*point) return cmd_point(o);
    if (*fit) return cmd_fit(o, fit_input, quantity);
    if (*chk) return cmd_check(o, suite, count);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

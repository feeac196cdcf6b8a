// Copyright 2026 The tripent Authors
// SPDX-License-Identifier: Apache-2.0

#include "tripent/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <boost/math/tools/minima.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "tripent/error.hpp"
#include "tripent/models.hpp"
#include "tripent/mps.hpp"
#include "tripent/zoo.hpp"

namespace tripent {

using ojson = nlohmann::ordered_json;

namespace {

const Tripartition kAbc({Party::A, Party::B, Party::C});

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Projection {
  CMatrix isometry;  // d x k
  double discarded = 0;
};

// Top Schmidt vectors of one party, through the smaller Gram matrix.
Projection top_schmidt(const PureState& s, std::size_t party, std::size_t cap,
                       double epsilon) {
  const std::size_t rows[] = {party};
  const CMatrix m = s.bipartite_matrix(rows);
  const bool left = m.rows() <= m.cols();
  const HermitianEigen eh =
      left ? hermitian_eigh(m * m.adjoint()) : hermitian_eigh(m.adjoint() * m);
  const Eigen::Index n = eh.values.size();
  std::vector<Eigen::Index> keep;
  double kept = 0;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const double p = eh.values[i];
    if (keep.size() >= cap) break;
    if (!(p > kEigenvalueFloor) || !(std::sqrt(p) > epsilon)) break;
    keep.push_back(i);
    kept += p;
  }
  if (keep.empty()) throw DomainError("compress_tripartite: region has no support");
  Projection out;
  out.isometry.resize(m.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(k);
    if (left) {
      out.isometry.col(j) = eh.vectors.col(keep[k]);
    } else {
      // Left singular vector from the right one.
      out.isometry.col(j) = m * eh.vectors.col(keep[k]) / std::sqrt(eh.values[keep[k]]);
    }
  }
  out.discarded = std::max(0.0, s.amplitudes().squaredNorm() - kept);
  return out;
}

SplitDims capped_balanced_split(std::size_t dc, const Caps& caps) {
  SplitDims s = balanced_split(dc);
  if (s.first > caps[2]) {
    s.first = caps[2];
    s.second = (dc + s.first - 1) / s.first;
  }
  if (s.second > caps[3]) {
    s.second = caps[3];
    s.first = std::max(s.first, (dc + s.second - 1) / s.second);
  }
  return s;
}

CVector ghz_qubits(std::size_t n) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  v[0] = v[v.size() - 1] = 1;
  return v;
}

CVector w_qubits(std::size_t n) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  for (std::size_t j = 0; j < n; ++j) v[static_cast<Eigen::Index>(std::size_t{1} << j)] = 1;
  return v;
}

bool is_lattice(ModelKind m) {
  return m == ModelKind::Ising || m == ModelKind::ObrienFendley || m == ModelKind::Xxz;
}

UniformMPS fixed_point_model(const ExperimentConfig& c, std::size_t n) {
  FixedPointSpec spec;
  RVector half(2);
  half << 0.5, 0.5;
  for (std::size_t j = 0; j < std::max<std::size_t>(c.fp_blocks, 1); ++j) {
    spec.spectra.push_back(half);
  }
  return make_fixed_point_mps(spec, n);
}

LocalHamiltonian lattice_model(const ExperimentConfig& c, std::size_t n) {
  switch (c.model) {
    case ModelKind::Ising: return build_obrien_fendley(n, 0.0);
    case ModelKind::ObrienFendley: return build_obrien_fendley(n, c.lambda);
    case ModelKind::Xxz: return build_xxz(n, c.delta);
    default: throw ConfigError("not a lattice model");
  }
}

std::size_t worker_count(const ExperimentConfig& c, std::size_t jobs) {
  std::size_t cap = c.threads;
  if (cap == 0) {
    if (const char* env = std::getenv("TRIPARTICLE_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 1) {
        throw ConfigError("TRIPARTICLE_THREADS must be a positive integer");
      }
      cap = static_cast<std::size_t>(v);
    }
  }
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(cap, jobs));
}

void validate(const ExperimentConfig& c) {
  if (c.sizes.empty()) throw ConfigError("size list is empty");
  for (std::size_t i = 1; i < c.sizes.size(); ++i) {
    if (c.sizes[i] <= c.sizes[i - 1]) throw ConfigError("sizes must be strictly ascending");
  }
  for (std::size_t n : c.sizes) region_sizes(c, n);
  for (std::size_t cap : c.caps) {
    if (cap == 0) throw ConfigError("caps must be positive");
  }
  if (c.epsilon < 0) throw ConfigError("epsilon must be non-negative");
  if (!(c.eta > 0)) throw ConfigError("eta must be positive");
  if (c.restarts < 0 || c.screen_iterations < 0 || c.max_iterations <= 0) {
    throw ConfigError("restarts and screen_iterations must be >= 0, max_iterations > 0");
  }
  if (c.backend == Backend::Import && c.import_path.empty()) {
    throw ConfigError("import backend needs a path");
  }
  if (c.model == ModelKind::Xxz && !(c.delta >= -1 && c.delta < 1)) {
    throw ConfigError("delta must lie in [-1, 1)");
  }
}

}  // namespace

CompressedState compress_tripartite(const PureState& state, const Tripartition& part,
                                    const Caps& caps, double epsilon) {
  if (part.size() != state.num_parties()) {
    throw DomainError("compress_tripartite: tripartition size does not match the state");
  }
  Tripartition(part.assignment(), true);  // contiguity on the ring
  const PureState abc = group_tripartite(state, part);
  const std::array<std::size_t, 3> cap{caps[0], caps[1], caps[2] * caps[3]};
  std::array<Projection, 3> proj;
  for (std::size_t p = 0; p < 3; ++p) proj[p] = top_schmidt(abc, p, cap[p], epsilon);
  CVector v = abc.amplitudes();
  std::vector<std::size_t> dims = abc.dims();
  for (std::size_t p = 0; p < 3; ++p) {
    const PureState cur = PureState::normalized(v, dims);
    v = cur.apply_local(p, proj[p].isometry.adjoint());
    dims[p] = static_cast<std::size_t>(proj[p].isometry.cols());
  }
  CompressedState out{PureState::normalized(std::move(v), dims, {"A", "B", "C"}), {}};
  for (std::size_t p = 0; p < 3; ++p) out.discarded[p] = proj[p].discarded;
  return out;
}

std::array<std::size_t, 3> region_sizes(const ExperimentConfig& c, std::size_t n) {
  std::array<std::size_t, 3> out{};
  std::size_t total = 0;
  for (int i = 0; i < 3; ++i) {
    const Fraction& f = c.ratios[static_cast<std::size_t>(i)];
    const long num = f.num * static_cast<long>(n);
    if (f.den <= 0 || f.num <= 0 || num % f.den != 0) {
      throw ConfigError("ratio " + std::to_string(f.num) + "/" + std::to_string(f.den) +
                        " of N = " + std::to_string(n) + " is not an integer site count");
    }
    out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(num / f.den);
    total += out[static_cast<std::size_t>(i)];
  }
  if (total != n) throw ConfigError("ratios must sum to 1");
  return out;
}

ResultRecord measure_tripartite(const PureState& abc, const ExperimentConfig& config) {
  ResultRecord r;
  const EntropyReport er = entropy_report(abc, kAbc);
  r.S_A = er.S_A;
  r.S_B = er.S_B;
  r.S_AB = er.S_AB;
  r.I = er.I_AB;
  r.S_R = reflected_entropy(abc, kAbc);
  r.h = r.S_R - r.I;
  r.dims = {abc.dim(0), abc.dim(1), abc.dim(2)};
  if (config.compute_g) {
    EpOptions o;
    o.eta = config.eta;
    o.restarts = config.restarts;
    o.max_iterations = config.max_iterations;
    o.screen_iterations = config.screen_iterations;
    o.seed = config.seed;
    if (is_lattice(config.model)) {
      o.split_dims = capped_balanced_split(abc.dim(2), config.caps);
    } else {
      o.split_policy = SplitPolicy::Factored;
    }
    const EpResult e = minimize_ep(abc, o);
    r.E_P = e.ep;
    r.ep_iterations = e.iterations;
    r.ep_gradient_norm = e.final_gradient_norm;
    r.ep_restarts = e.restarts;
    r.ep_split = e.split_dims;
    r.converged = e.converged;
    r.g = 2 * r.E_P - r.I;
  } else {
    r.E_P = std::numeric_limits<double>::quiet_NaN();
    r.g = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

ResultRecord run_point(const ExperimentConfig& config, std::size_t n) {
  const auto start = std::chrono::steady_clock::now();
  const std::array<std::size_t, 3> regions = region_sizes(config, n);
  const Tripartition part = Tripartition::contiguous(n, regions[0], regions[1]);
  double energy = 0;
  std::string sector;
  bool degenerate = false, cat = false;
  std::optional<PureState> abc;
  std::array<double, 3> discarded{};

  auto compress_sites = [&](const PureState& s) {
    CompressedState cs = compress_tripartite(s, part, config.caps, config.epsilon);
    discarded = cs.discarded;
    abc = std::move(cs.state);
  };
  auto compress_abc = [&](const PureState& s) {
    CompressedState cs = compress_tripartite(s, kAbc, config.caps, config.epsilon);
    discarded = cs.discarded;
    abc = std::move(cs.state);
  };
  auto from_mps = [&](const UniformMPS& m) {
    if (m.n_sites() != n) throw ConfigError("MPS ring length does not match N");
    const CoarseTripartite t =
        assemble_tripartite(m, regions[0], regions[1], {std::nullopt, config.epsilon});
    compress_abc(dense_export(t));
    for (std::size_t p = 0; p < 3; ++p) {
      discarded[p] += std::array<double, 3>{t.a.discarded_weight, t.b.discarded_weight,
                                            t.c.discarded_weight}[p];
    }
  };

  ResultRecord rec;
  try {
    if (config.backend == Backend::Import) {
      const std::string& path = config.import_path;
      std::optional<UniformMPS> m;
      try {
        m = read_mps(path);
      } catch (const IoError&) {
      }
      if (m) {
        from_mps(*m);
      } else {
        const PureState s = read_state(path);
        if (s.num_parties() == 3 && n != 3) {
          compress_abc(s);
        } else if (s.num_parties() == n) {
          compress_sites(s);
        } else {
          throw ConfigError("imported state has " + std::to_string(s.num_parties()) +
                            " parties; expected 3 or N");
        }
      }
    } else if (is_lattice(config.model)) {
      const LocalHamiltonian h = lattice_model(config, n);
      if (config.backend == Backend::Mps) {
        PumpsOptions po;
        po.seed = config.seed;
        const std::size_t bond =
            config.bond_dim ? config.bond_dim : default_bond_dimension(n);
        const PumpsResult pr = pumps_optimize(h, bond, po);
        energy = pr.energy;
        sector = "mps";
        if (!pr.converged) rec.error = "variational optimizer hit its iteration cap";
        from_mps(pr.mps);
      } else {
        LanczosOptions lo;
        lo.seed = config.seed;
        GroundStateResult gs = ground_state(h, lo);
        energy = gs.energy;
        sector = gs.sector;
        degenerate = gs.degenerate;
        const bool parity = std::find(h.symmetries.begin(), h.symmetries.end(),
                                      Symmetry::Parity) != h.symmetries.end();
        if (config.cat_state && parity &&
            std::abs(gs.next_energy - gs.energy) < config.cat_tolerance) {
          LanczosOptions even = lo, odd = lo;
          even.sector = Sector::ParityEven;
          odd.sector = Sector::ParityOdd;
          const CVector v = ground_state(h, even).state.amplitudes() +
                            ground_state(h, odd).state.amplitudes();
          compress_sites(PureState::normalized(v, gs.state.dims()));
          cat = true;
          sector = "cat";
        } else {
          compress_sites(gs.state);
        }
      }
    } else {
      switch (config.model) {
        case ModelKind::Ghz:
          compress_sites(PureState::normalized(ghz_qubits(n), std::vector<std::size_t>(n, 2)));
          break;
        case ModelKind::W:
          compress_sites(PureState::normalized(w_qubits(n), std::vector<std::size_t>(n, 2)));
          break;
        case ModelKind::Triangle: {
          Rng rng(config.seed + n);
          compress_abc(make_triangle(random_triangle_spec(rng, 3), config.seed + n));
          break;
        }
        case ModelKind::Sots: {
          Rng rng(config.seed + n);
          compress_abc(make_sots(random_sots_spec(rng, 2, 2), config.seed + n));
          break;
        }
        case ModelKind::FixedPoint: {
          const UniformMPS m = fixed_point_model(config, n);
          if (config.backend == Backend::Mps) {
            from_mps(m);
          } else {
            compress_sites(mps_to_dense(m));
          }
          break;
        }
        default: break;
      }
    }
    rec = [&] {
      ResultRecord m = measure_tripartite(*abc, config);
      if (!rec.error.empty()) {
        m.error = rec.error;
        m.converged = false;
      }
      return m;
    }();
  } catch (const ConvergenceError& e) {
    rec.converged = false;
    rec.error = e.what();
    rec.g = rec.h = rec.I = std::numeric_limits<double>::quiet_NaN();
  }
  rec.n = n;
  rec.model = model_name(config.model);
  rec.ratios = ratios_string(config.ratios);
  rec.discarded = discarded;
  rec.energy = energy;
  rec.sector = sector;
  rec.degenerate = degenerate;
  rec.cat = cat;
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

ScalingFit fit_series(const std::vector<ResultRecord>& records, const std::string& quantity) {
  if (quantity != "g" && quantity != "h" && quantity != "I") {
    throw ConfigError("fit quantity must be g, h or I");
  }
  std::vector<std::pair<double, double>> pts;
  std::set<std::size_t> seen;
  for (const ResultRecord& r : records) {
    if (!r.converged) continue;
    const double y = quantity == "g" ? r.g : quantity == "h" ? r.h : r.I;
    if (!std::isfinite(y)) continue;
    if (!seen.insert(r.n).second) throw ConfigError("duplicate size in the series");
    pts.emplace_back(static_cast<double>(r.n), y);
  }
  std::sort(pts.begin(), pts.end());
  auto series = [&] {
    std::ostringstream os;
    for (const auto& [x, y] : pts) os << " (" << x << ", " << fmt_double(y) << ")";
    return os.str();
  };
  if (pts.size() < 3) {
    throw DomainError("fit_series: need at least 3 converged sizes, have" + series());
  }
  const auto m = static_cast<Eigen::Index>(pts.size());

  struct Linear {
    double y0, a, rss;
  };
  auto linear = [&](double p) {
    RMatrix x(m, 2);
    RVector y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      x(i, 0) = 1;
      x(i, 1) = std::pow(pts[static_cast<std::size_t>(i)].first, -p);
      y[i] = pts[static_cast<std::size_t>(i)].second;
    }
    Eigen::ColPivHouseholderQR<RMatrix> qr(x);
    if (qr.rank() < 2) throw DomainError("fit_series: singular fit for series" + series());
    const RVector c = qr.solve(y);
    return Linear{c[0], c[1], (x * c - y).squaredNorm()};
  };

  ScalingFit fit;
  fit.quantity = quantity;
  for (const auto& pt : pts) fit.sizes.push_back(static_cast<std::size_t>(pt.first));
  double p = 2;
  Linear best = linear(2);
  double yscale = 0;
  for (const auto& pt : pts) yscale = std::max(yscale, std::abs(pt.second));
  // A flat series leaves the exponent undetermined; keep p = 2.
  const bool flat = std::abs(best.a) * std::pow(pts.front().first, -2.0) <=
                    1e-12 * std::max(yscale, 1e-300);
  if (pts.size() >= 4 && !flat) {
    // Coarse scan in log p, then Brent on the best bracket.
    const double lo = std::log(0.05), hi = std::log(8.0);
    const int grid = 120;
    int arg = 0;
    double val = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
      const double rss = linear(std::exp(lo + (hi - lo) * i / grid)).rss;
      if (rss < val) {
        val = rss;
        arg = i;
      }
    }
    const double a = lo + (hi - lo) * std::max(arg - 1, 0) / grid;
    const double b = lo + (hi - lo) * std::min(arg + 1, grid) / grid;
    const auto r = boost::math::tools::brent_find_minima(
        [&](double t) { return linear(std::exp(t)).rss; }, a, b, 52);
    p = std::exp(r.first);
    best = linear(p);
    fit.exponent_fitted = true;
  }
  fit.exponent = p;
  fit.asymptote = best.y0;
  fit.amplitude = best.a;
  fit.residual = best.rss;

  const Eigen::Index k = fit.exponent_fitted ? 3 : 2;
  RMatrix j(m, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = pts[static_cast<std::size_t>(i)].first;
    j(i, 0) = 1;
    j(i, 1) = std::pow(x, -p);
    if (k == 3) j(i, 2) = -best.a * std::log(x) * std::pow(x, -p);
  }
  const RMatrix jtj = j.transpose() * j;
  Eigen::FullPivLU<RMatrix> lu(jtj);
  if (!lu.isInvertible()) throw DomainError("fit_series: singular fit for series" + series());
  const double dof = static_cast<double>(m - k);
  const double sigma2 = dof > 0 ? best.rss / dof : 0.0;
  fit.asymptote_stderr = std::sqrt(std::max(0.0, sigma2 * lu.inverse()(0, 0)));
  return fit;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::size_t jobs = config.sizes.size();
  const std::size_t workers = worker_count(config, jobs);
  std::vector<std::optional<ResultRecord>> slots(jobs);
  std::vector<std::string> failures(jobs);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      const std::size_t n = config.sizes[i];
      try {
        slots[i] = run_point(config, n);
        std::lock_guard lock(log_mutex);
        spdlog::info("N = {}: h = {:.6f}, g = {:.6f}, {:.1f} s", n, slots[i]->h, slots[i]->g,
                     slots[i]->wall_time);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  ExperimentResult out;
  for (std::size_t i = 0; i < jobs; ++i) {
    if (slots[i]) {
      out.records.push_back(std::move(*slots[i]));
    } else {
      ResultRecord r;
      r.n = config.sizes[i];
      r.model = model_name(config.model);
      r.ratios = ratios_string(config.ratios);
      r.converged = false;
      r.error = failures[i];
      r.g = r.h = r.I = std::numeric_limits<double>::quiet_NaN();
      out.records.push_back(std::move(r));
    }
    out.all_converged = out.all_converged && out.records.back().converged;
  }
  for (const char* q : {"h", "g"}) {
    if (std::string(q) == "g" && !config.compute_g) continue;
    try {
      (std::string(q) == "g" ? out.g_fit : out.h_fit) = fit_series(out.records, q);
    } catch (const std::exception& e) {
      out.fit_errors.push_back(std::string(q) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------- names

std::string model_name(ModelKind m) {
  switch (m) {
    case ModelKind::Ising: return "ising";
    case ModelKind::ObrienFendley: return "obf";
    case ModelKind::Xxz: return "xxz";
    case ModelKind::Ghz: return "ghz";
    case ModelKind::W: return "w";
    case ModelKind::Triangle: return "triangle";
    case ModelKind::Sots: return "sots";
    case ModelKind::FixedPoint: return "fpmps";
  }
  return "?";
}

ModelKind parse_model(const std::string& name) {
  for (ModelKind m : {ModelKind::Ising, ModelKind::ObrienFendley, ModelKind::Xxz,
                      ModelKind::Ghz, ModelKind::W, ModelKind::Triangle, ModelKind::Sots,
                      ModelKind::FixedPoint}) {
    if (model_name(m) == name) return m;
  }
  throw ConfigError("unknown model '" + name + "'");
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::Ed: return "ed";
    case Backend::Mps: return "mps";
    case Backend::Import: return "import";
  }
  return "?";
}

Backend parse_backend(const std::string& name) {
  for (Backend b : {Backend::Ed, Backend::Mps, Backend::Import}) {
    if (backend_name(b) == name) return b;
  }
  throw ConfigError("unknown backend '" + name + "'");
}

std::array<Fraction, 3> parse_ratios(const std::string& text) {
  std::array<Fraction, 3> out{};
  std::stringstream ss(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 3) throw ConfigError("ratios need exactly three entries");
    Fraction f;
    try {
      const auto slash = item.find('/');
      if (slash != std::string::npos) {
        std::size_t used = 0;
        f.num = std::stol(item.substr(0, slash), &used);
        if (used != slash) throw ConfigError("bad ratio");
        const std::string den = item.substr(slash + 1);
        f.den = std::stol(den, &used);
        if (used != den.size()) throw ConfigError("bad ratio");
      } else {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw ConfigError("bad ratio");
        // Smallest denominator reproducing the decimal.
        bool found = false;
        for (long d = 1; d <= 1000 && !found; ++d) {
          const double nm = v * static_cast<double>(d);
          if (std::abs(nm - std::round(nm)) < 1e-9) {
            f = {std::lround(nm), d};
            found = true;
          }
        }
        if (!found) throw ConfigError("ratio " + item + " is not a simple fraction");
      }
    } catch (const std::logic_error&) {
      throw ConfigError("cannot parse ratio '" + item + "'");
    }
    if (f.num <= 0 || f.den <= 0) throw ConfigError("ratios must be positive");
    out[i++] = f;
  }
  if (i != 3) throw ConfigError("ratios need exactly three entries");
  long num = 0, den = 1;
  for (const Fraction& f : out) {
    num = num * f.den + f.num * den;
    den *= f.den;
  }
  if (num != den) throw ConfigError("ratios must sum to 1");
  return out;
}

std::string ratios_string(const std::array<Fraction, 3>& r) {
  std::string s;
  for (std::size_t i = 0; i < 3; ++i) {
    if (i) s += ',';
    s += std::to_string(r[i].num) + "/" + std::to_string(r[i].den);
  }
  return s;
}

// ---------------------------------------------------------------- JSON

namespace {

ojson number_or_null(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

double number_from(const ojson& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "model") c.model = parse_model(v.get<std::string>());
      else if (key == "lambda") c.lambda = v.get<double>();
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "sizes") c.sizes = v.get<std::vector<std::size_t>>();
      else if (key == "ratios") c.ratios = parse_ratios(v.get<std::string>());
      else if (key == "backend") c.backend = parse_backend(v.get<std::string>());
      else if (key == "import_path") c.import_path = v.get<std::string>();
      else if (key == "caps") {
        const auto caps = v.get<std::vector<std::size_t>>();
        if (caps.size() != 4) throw ConfigError("caps need four entries: A, B, C_L, C_R");
        std::copy(caps.begin(), caps.end(), c.caps.begin());
      } else if (key == "epsilon") c.epsilon = v.is_null() ? 0.0 : v.get<double>();
      else if (key == "eta") c.eta = v.get<double>();
      else if (key == "restarts") c.restarts = v.get<int>();
      else if (key == "max_iterations") c.max_iterations = v.get<int>();
      else if (key == "screen_iterations") c.screen_iterations = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "compute_g") c.compute_g = v.get<bool>();
      else if (key == "cat_state") c.cat_state = v.get<bool>();
      else if (key == "cat_tolerance") c.cat_tolerance = v.get<double>();
      else if (key == "bond_dim") c.bond_dim = v.get<std::size_t>();
      else if (key == "fp_blocks") c.fp_blocks = v.get<std::size_t>();
      else if (key == "threads") c.threads = v.get<std::size_t>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  ojson j;
  j["model"] = model_name(c.model);
  j["lambda"] = c.lambda;
  j["delta"] = c.delta;
  j["sizes"] = c.sizes;
  j["ratios"] = ratios_string(c.ratios);
  j["backend"] = backend_name(c.backend);
  j["import_path"] = c.import_path;
  j["caps"] = c.caps;
  j["epsilon"] = c.epsilon;
  j["eta"] = c.eta;
  j["restarts"] = c.restarts;
  j["max_iterations"] = c.max_iterations;
  j["screen_iterations"] = c.screen_iterations;
  j["seed"] = c.seed;
  j["compute_g"] = c.compute_g;
  j["cat_state"] = c.cat_state;
  j["cat_tolerance"] = c.cat_tolerance;
  j["bond_dim"] = c.bond_dim;
  j["fp_blocks"] = c.fp_blocks;
  j["threads"] = c.threads;
  return j.dump();
}

std::string record_to_json(const ResultRecord& r) {
  ojson j;
  j["N"] = r.n;
  j["model"] = r.model;
  j["ratios"] = r.ratios;
  j["g"] = number_or_null(r.g);
  j["h"] = number_or_null(r.h);
  j["I"] = number_or_null(r.I);
  j["S_A"] = r.S_A;
  j["S_B"] = r.S_B;
  j["S_AB"] = r.S_AB;
  j["E_P"] = number_or_null(r.E_P);
  j["S_R"] = r.S_R;
  j["discarded"] = r.discarded;
  j["dims"] = r.dims;
  j["energy"] = r.energy;
  j["sector"] = r.sector;
  j["degenerate"] = r.degenerate;
  j["cat"] = r.cat;
  j["ep"] = {{"iterations", r.ep_iterations},
             {"gradient_norm", r.ep_gradient_norm},
             {"restarts", r.ep_restarts},
             {"split", {r.ep_split.first, r.ep_split.second}}};
  j["converged"] = r.converged;
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump();
}

ResultRecord record_from_json(const std::string& line) {
  ResultRecord r;
  try {
    const ojson j = ojson::parse(line);
    r.n = j.at("N").get<std::size_t>();
    r.model = j.value("model", "");
    r.ratios = j.value("ratios", "");
    r.g = number_from(j.at("g"));
    r.h = number_from(j.at("h"));
    r.I = number_from(j.at("I"));
    r.S_A = j.value("S_A", 0.0);
    r.S_B = j.value("S_B", 0.0);
    r.S_AB = j.value("S_AB", 0.0);
    r.E_P = j.contains("E_P") ? number_from(j.at("E_P")) : 0.0;
    r.S_R = j.value("S_R", 0.0);
    if (j.contains("discarded")) r.discarded = j.at("discarded").get<std::array<double, 3>>();
    if (j.contains("dims")) r.dims = j.at("dims").get<std::array<std::size_t, 3>>();
    r.energy = j.value("energy", 0.0);
    r.sector = j.value("sector", "");
    r.degenerate = j.value("degenerate", false);
    r.cat = j.value("cat", false);
    if (j.contains("ep")) {
      const ojson& e = j.at("ep");
      r.ep_iterations = e.value("iterations", 0);
      r.ep_gradient_norm = e.value("gradient_norm", 0.0);
      r.ep_restarts = e.value("restarts", 0);
      const auto split = e.value("split", std::vector<std::size_t>{1, 1});
      if (split.size() == 2) r.ep_split = {split[0], split[1]};
    }
    r.converged = j.value("converged", true);
    r.error = j.value("error", "");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad record: ") + e.what());
  }
  return r;
}

std::string records_to_jsonl(const std::vector<ResultRecord>& records) {
  std::string out;
  for (const ResultRecord& r : records) out += record_to_json(r) + "\n";
  return out;
}

std::vector<ResultRecord> records_from_jsonl(const std::string& text) {
  std::vector<ResultRecord> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(record_from_json(line));
  }
  return out;
}

std::string records_to_csv(const std::vector<ResultRecord>& records) {
  std::string out = "N,g,h,I,S_A,S_B,S_AB,E_P,S_R,converged\n";
  for (const ResultRecord& r : records) {
    out += std::to_string(r.n);
    for (double x : {r.g, r.h, r.I, r.S_A, r.S_B, r.S_AB, r.E_P, r.S_R}) {
      out += "," + (std::isfinite(x) ? fmt_double(x) : std::string());
    }
    out += r.converged ? ",1\n" : ",0\n";
  }
  return out;
}

namespace {

ojson fit_object(const ScalingFit& f) {
  ojson j;
  j["quantity"] = f.quantity;
  j["asymptote"] = f.asymptote;
  j["asymptote_stderr"] = f.asymptote_stderr;
  j["amplitude"] = f.amplitude;
  j["exponent"] = f.exponent;
  j["exponent_fitted"] = f.exponent_fitted;
  j["residual"] = f.residual;
  j["sizes"] = f.sizes;
  return j;
}

}  // namespace

std::string fit_to_json(const ScalingFit& fit) { return fit_object(fit).dump(); }

std::string experiment_summary_json(const ExperimentResult& result) {
  ojson j;
  j["records"] = result.records.size();
  j["all_converged"] = result.all_converged;
  ojson fits = ojson::object();
  if (result.h_fit) fits["h"] = fit_object(*result.h_fit);
  if (result.g_fit) fits["g"] = fit_object(*result.g_fit);
  j["fits"] = fits;
  j["fit_errors"] = result.fit_errors;
  return j.dump();
}

std::string checks_to_jsonl(const std::vector<CheckRecord>& checks) {
  std::string out;
  for (const CheckRecord& c : checks) {
    ojson j;
    j["suite"] = c.suite;
    j["name"] = c.name;
    j["value"] = number_or_null(c.value);
    j["threshold"] = c.threshold;
    j["pass"] = c.pass;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace tripent

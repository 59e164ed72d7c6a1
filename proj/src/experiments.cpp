#include "disom/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "disom/errors.hpp"
#include "disom/format.hpp"
#include "disom/landscape.hpp"
#include "disom/prf.hpp"

namespace disom {

std::string_view preset_name(Preset p) noexcept {
  switch (p) {
    case Preset::Fig1: return "fig1";
    case Preset::Fig2: return "fig2";
    case Preset::Fig3: return "fig3";
    case Preset::Custom: return "custom";
  }
  return "custom";
}

Preset parse_preset(std::string_view name) {
  if (name == "fig1") return Preset::Fig1;
  if (name == "fig2") return Preset::Fig2;
  if (name == "fig3") return Preset::Fig3;
  if (name == "custom") return Preset::Custom;
  throw ParseError("unknown preset '" + std::string(name) + "' (expected fig1, fig2, fig3, custom)");
}

Fig2Parameters fig2_parameters(std::size_t n) {
  const double nd = static_cast<double>(n);
  const long lambda = std::lround(1.5 * std::log(nd));
  return {static_cast<unsigned>(std::max(1L, lambda)), 0.3 * std::pow(nd, -0.5),
          std::pow(nd, 0.15)};
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw ParameterError("runs must be >= 1");
  if (algorithms.empty()) throw ParameterError("at least one algorithm is required");
  if (distributions.empty()) throw ParameterError("at least one distribution is required");
  if (preset == Preset::Fig2 && n_values.empty())
    throw ParameterError("the fig2 preset needs a non-empty n sweep");
  if (preset == Preset::Fig3 && p_cutoffs.empty())
    throw ParameterError("the fig3 preset needs a non-empty (p, cutoff) sweep");
  if (n < 1) throw ParameterError("n must be >= 1");
  for (auto v : n_values) {
    if (v < 1) throw ParameterError("n sweep values must be >= 1");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0, 1]");
  for (const auto& pc : p_cutoffs) {
    if (!(pc.p >= 0.0 && pc.p <= 1.0)) throw ParameterError("sweep p must lie in [0, 1]");
    if (!(pc.cutoff_d > 0.0) || !std::isfinite(pc.cutoff_d))
      throw ParameterError("sweep cutoff_d must be positive and finite");
  }
  if (!p_cutoffs.empty()) {
    for (const auto& d : distributions) {
      if (d.kind() != DistortionKind::Exponential &&
          d.kind() != DistortionKind::TruncatedExponential) {
        throw ParameterError("a (p, cutoff) sweep requires exp or truncexp distributions, got " +
                             d.to_string());
      }
    }
  }
  // Cell-level checks (lambda, kstar < n, mutation rate) happen in expand_cells.
}

ExperimentConfig preset(Preset which, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("scale must be positive");
  auto scale_cutoff = [&](std::uint64_t c) {
    return static_cast<std::uint64_t>(std::max(1.0, std::round(static_cast<double>(c) * scale)));
  };
  auto scale_n = [&](std::size_t n) {
    return static_cast<std::size_t>(std::max(2.0, std::round(static_cast<double>(n) * scale)));
  };

  ExperimentConfig c;
  c.preset = which;
  switch (which) {
    case Preset::Fig1:
      c.algorithms = {Variant::Plus, Variant::Comma};
      c.distributions = {DistortionSpec::exponential(0.4)};
      c.n = 150;
      c.lambda = 8;
      c.p = 0.0245;
      c.kstar = 2.12;
      c.cutoff_generations = scale_cutoff(1'000'000'000);
      c.runs = 1;
      break;
    case Preset::Fig2:
      c.algorithms = {Variant::Plus, Variant::Comma};
      c.distributions = {DistortionSpec::exponential(0.4), DistortionSpec::uniform(0.0, 4.0)};
      c.derive_from_n = true;
      for (std::size_t n = 10; n <= 120; n += 10) c.n_values.push_back(scale_n(n));
      std::sort(c.n_values.begin(), c.n_values.end());
      c.n_values.erase(std::unique(c.n_values.begin(), c.n_values.end()), c.n_values.end());
      c.n = c.n_values.back();
      {
        const auto params = fig2_parameters(c.n);
        c.lambda = params.lambda;
        c.p = params.p;
        c.kstar = params.kstar;
      }
      c.cutoff_generations = scale_cutoff(1'000'000);
      c.runs = 49;
      break;
    case Preset::Fig3:
      c.algorithms = {Variant::Plus};
      c.distributions = {DistortionSpec::exponential(0.4)};
      c.n = scale_n(300);
      c.lambda = 9;
      c.kstar = 2.35;
      c.p = 0.02;
      for (double p : {0.01, 0.02, 0.04, 0.08}) {
        for (int d = 2; d <= 8; ++d) c.p_cutoffs.push_back({p, static_cast<double>(d)});
      }
      c.cutoff_generations = scale_cutoff(10'000'000);
      c.runs = 49;
      break;
    case Preset::Custom:
      break;
  }
  return c;
}

std::vector<Cell> expand_cells(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::size_t> ns = config.n_values;
  if (ns.empty()) ns.push_back(config.n);
  std::sort(ns.begin(), ns.end());

  std::vector<std::optional<PCutoff>> sweeps;
  if (config.p_cutoffs.empty()) {
    sweeps.emplace_back();
  } else {
    auto pcs = config.p_cutoffs;
    std::sort(pcs.begin(), pcs.end(), [](const PCutoff& a, const PCutoff& b) {
      return a.p != b.p ? a.p < b.p : a.cutoff_d < b.cutoff_d;
    });
    for (const auto& pc : pcs) sweeps.emplace_back(pc);
  }

  std::vector<Cell> cells;
  for (const auto& dist : config.distributions) {
    for (std::size_t n : ns) {
      for (const auto& sweep : sweeps) {
        for (Variant v : config.algorithms) {
          Cell cell;
          cell.index = cells.size();
          cell.variant = v;
          cell.n = n;
          cell.dist = dist;
          cell.mutation_rate = config.mutation_rate;
          cell.cutoff_generations = config.cutoff_generations;
          if (config.derive_from_n) {
            const auto params = fig2_parameters(n);
            cell.lambda = params.lambda;
            cell.p = params.p;
            cell.kstar = params.kstar;
          } else {
            cell.lambda = config.lambda;
            cell.p = config.p;
            cell.kstar = config.kstar;
          }
          if (sweep) {
            cell.p = sweep->p;
            cell.cutoff_d = sweep->cutoff_d;
            cell.dist = DistortionSpec::truncated_exponential(dist.rate(), sweep->cutoff_d);
          }
          EAConfig probe;
          probe.variant = v;
          probe.lambda = cell.lambda;
          probe.n = cell.n;
          probe.kstar = cell.kstar;
          probe.mutation_rate = cell.mutation_rate;
          probe.validate();
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

RunSeeds run_seeds(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t run) {
  return {derive_seed(master_seed, "landscape", cell, run), derive_seed(master_seed, "rng", cell, run)};
}

double normalize_runtime(double generations, double p, const DistortionSpec& dist, double cutoff_d) {
  const double t = tail(dist, cutoff_d);
  if (!(t > 0.0)) throw DomainError("normalize_runtime: Pr[D >= cutoff_d] is zero");
  return generations * p * t;
}

double median(std::vector<double> values) {
  if (values.empty()) throw UsageError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

RunRecord execute(const Cell& cell, const RunSeeds& seeds, bool keep) {
  RunRecord rec;
  rec.seeds = seeds;
  try {
    const FrozenLandscape landscape(cell.n, cell.p, cell.dist, seeds.landscape);
    EAConfig cfg;
    cfg.variant = cell.variant;
    cfg.lambda = cell.lambda;
    cfg.n = cell.n;
    cfg.kstar = cell.kstar;
    cfg.mutation_rate = cell.mutation_rate;
    cfg.cutoff_generations = cell.cutoff_generations;
    cfg.rng_seed = seeds.rng;
    RunResult result = run(landscape, cfg);
    rec.completed = true;
    rec.success = result.success;
    rec.om_target_reached = result.om_target_reached;
    rec.generations = result.generations;
    rec.evaluations = result.evaluations;
    rec.final = result.final;
    if (keep) rec.detail = std::move(result);
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

CellStats aggregate(const Cell& cell, std::vector<RunRecord> records) {
  CellStats s;
  s.cell = cell;
  std::vector<double> gens;
  for (const auto& r : records) {
    if (!r.completed) {
      ++s.failed;
      continue;
    }
    ++s.runs;
    if (r.success) ++s.success; else ++s.censored;
    gens.push_back(static_cast<double>(r.generations));
  }
  if (!gens.empty()) {
    s.median_generations = median(gens);
    s.mean_generations = std::accumulate(gens.begin(), gens.end(), 0.0) /
                         static_cast<double>(gens.size());
    if (cell.cutoff_d) {
      s.normalized = normalize_runtime(s.mean_generations, cell.p, cell.dist, *cell.cutoff_d);
    }
  }
  s.mean_is_lower_bound = s.censored > 0;
  s.records = std::move(records);
  return s;
}

}  // namespace

BatchResult run_batch(const ExperimentConfig& config, unsigned jobs) {
  const std::vector<Cell> cells = expand_cells(config);
  const std::size_t runs = config.runs;
  const std::size_t total = cells.size() * runs;
  std::vector<RunRecord> records(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const std::size_t c = task / runs;
      const std::size_t r = task % runs;
      records[task] = execute(cells[c], run_seeds(config.master_seed, c, r), config.keep_runs);
    }
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  BatchResult batch;
  batch.config = config;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<RunRecord> slice(std::make_move_iterator(records.begin() + c * runs),
                                 std::make_move_iterator(records.begin() + (c + 1) * runs));
    batch.cells.push_back(aggregate(cells[c], std::move(slice)));
  }
  return batch;
}

std::string BatchResult::median_csv() const {
  std::ostringstream out;
  out << "n,algorithm,distribution,runs,median_generations,mean_generations,censored,cutoff\n";
  for (const auto& s : cells) {
    out << s.cell.n << ',' << variant_name(s.cell.variant) << ",\"" << s.cell.dist.to_string()
        << "\"," << s.runs << ',' << format_real(s.median_generations) << ','
        << format_real(s.mean_generations) << ',' << s.censored << ','
        << s.cell.cutoff_generations << '\n';
  }
  return out.str();
}

std::string BatchResult::normalized_csv() const {
  std::ostringstream out;
  out << "p,cutoff_d,runs,mean_generations,normalized\n";
  for (const auto& s : cells) {
    if (!s.cell.cutoff_d || !s.normalized) continue;
    out << format_real(s.cell.p) << ',' << format_real(*s.cell.cutoff_d) << ',' << s.runs << ','
        << format_real(s.mean_generations) << ',' << format_real(*s.normalized) << '\n';
  }
  return out.str();
}

}  // namespace disom

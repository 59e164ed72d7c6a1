#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "disom/distributions.hpp"
#include "disom/ea.hpp"

namespace disom {

enum class Preset { Fig1, Fig2, Fig3, Custom };

std::string_view preset_name(Preset p) noexcept;  // fig1, fig2, fig3, custom
Preset parse_preset(std::string_view name);       // throws ParseError

/// One point of a (p, truncation cutoff) sweep.
struct PCutoff {
  double p = 0;
  double cutoff_d = 0;
  friend bool operator==(const PCutoff&, const PCutoff&) = default;
};

/// A batch of runs over a grid of cells. The grid is the product
///   distributions x (n_values or {n}) x (p_cutoffs or {p}) x algorithms.
/// With derive_from_n, lambda/p/kstar of each cell follow fig2_parameters(n).
/// With p_cutoffs, each base distribution (exp or truncexp) is replaced by
/// truncexp at that cutoff with its rate.
struct ExperimentConfig {
  Preset preset = Preset::Custom;
  std::vector<Variant> algorithms{Variant::Plus, Variant::Comma};
  std::vector<DistortionSpec> distributions{DistortionSpec::exponential(0.4)};
  std::size_t n = 100;
  unsigned lambda = 8;
  double p = 0.0;
  double kstar = 1.0;
  std::optional<double> mutation_rate;
  std::uint64_t cutoff_generations = 1'000'000;
  unsigned runs = 1;
  std::uint64_t master_seed = 0;
  std::vector<std::size_t> n_values;
  bool derive_from_n = false;
  std::vector<PCutoff> p_cutoffs;
  bool keep_runs = false;  // retain full per-run results, traces included

  /// Throws ParameterError on an empty axis, runs == 0 or invalid values.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct Fig2Parameters {
  unsigned lambda;  // round(1.5 ln n), halves rounded away from zero
  double p;         // 0.3 n^-0.5
  double kstar;     // n^0.15
};
Fig2Parameters fig2_parameters(std::size_t n);

/// Preset configurations. `scale` multiplies the generation cutoff (all
/// presets), the n grid (fig2) and n (fig3); scaled integers are rounded and
/// kept >= 1 (cutoff) or >= 2 (n). Throws ParameterError if scale <= 0.
///
///   fig1  n=150 lambda=8 p=0.0245 kstar=2.12 exp(0.4) cutoff 1e9, 1 run, plus+comma
///   fig2  n in {10, 20, ..., 120}, derived lambda/p/kstar, exp(0.4) and
///         uniform(0,4), cutoff 1e6, 49 runs, plus+comma
///   fig3  n=300 lambda=9 kstar=2.35, exp(0.4) truncated at d in {2..8},
///         p in {0.01, 0.02, 0.04, 0.08}, cutoff 1e7, 49 runs, plus
ExperimentConfig preset(Preset which, double scale = 1.0);

struct Cell {
  std::size_t index = 0;
  Variant variant = Variant::Plus;
  std::size_t n = 0;
  unsigned lambda = 1;
  double p = 0;
  double kstar = 0;
  DistortionSpec dist = DistortionSpec::exponential(1.0);
  std::optional<double> cutoff_d;  // set for truncation sweeps
  std::optional<double> mutation_rate;
  std::uint64_t cutoff_generations = 0;
};

/// Cells in canonical order: distribution (as configured), n ascending,
/// (p, cutoff_d) ascending, algorithm (as configured).
std::vector<Cell> expand_cells(const ExperimentConfig& config);

struct RunSeeds {
  std::uint64_t landscape;
  std::uint64_t rng;
};

/// landscape = PRF(master, "landscape" | cell | run), rng = PRF(master, "rng" | cell | run).
RunSeeds run_seeds(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t run);

struct RunRecord {
  RunSeeds seeds{};
  bool completed = false;  // false when the run raised an error
  bool success = false;
  bool om_target_reached = false;
  std::uint64_t generations = 0;
  std::uint64_t evaluations = 0;
  FitnessValue final;
  std::optional<RunResult> detail;  // only with keep_runs
  std::string error;
};

struct CellStats {
  Cell cell;
  unsigned runs = 0;       // completed runs
  unsigned failed = 0;     // runs that raised; see records[i].error
  unsigned success = 0;
  unsigned censored = 0;   // hit the generation cutoff; success + censored == runs
  double median_generations = 0;  // censored runs enter at the cutoff
  double mean_generations = 0;
  bool mean_is_lower_bound = false;  // true when any run was censored
  std::optional<double> normalized;  // mean * p * Pr[D >= cutoff_d], truncation sweeps only
  std::vector<RunRecord> records;
};

struct BatchResult {
  ExperimentConfig config;
  std::vector<CellStats> cells;

  /// n,algorithm,distribution,runs,median_generations,mean_generations,censored,cutoff
  std::string median_csv() const;
  /// p,cutoff_d,runs,mean_generations,normalized (cells with a truncation cutoff)
  std::string normalized_csv() const;
};

/// Runs every cell `config.runs` times on `jobs` worker threads. The result
/// does not depend on `jobs` or on scheduling. Per-run errors are recorded in
/// the cell, never dropped.
BatchResult run_batch(const ExperimentConfig& config, unsigned jobs = 1);

/// generations * p * Pr[D >= cutoff_d]. Throws DomainError when the tail is 0.
double normalize_runtime(double generations, double p, const DistortionSpec& dist, double cutoff_d);

/// Median of the values (mean of the middle pair for even sizes). Throws UsageError if empty.
double median(std::vector<double> values);

/// JSON (de)serialization; field names mirror ExperimentConfig. from_json
/// starts from the named preset's defaults (or a default custom config) and
/// overrides the fields present; unknown fields are a ParseError.
std::string to_json(const ExperimentConfig& config);
ExperimentConfig experiment_from_json(std::string_view json);

/// Per-cell summary as JSON, including failure records.
std::string summary_json(const BatchResult& batch);

}  // namespace disom
